#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

enum class Sublattice { A, B };
enum class Spin { ground, excited };
enum class Marker { none, dopant_port };

struct Site {
  Sublattice sublattice = Sublattice::A;
  Spin spin = Spin::ground;
  Marker marker = Marker::none;
  bool operator==(const Site&) const = default;
};

// Text form: '^' A ground, 'V' A excited, 'v' B ground, 'W' B excited; '*' before
// a site marks a dopant port.
struct ChainState {
  std::vector<Site> sites;

  static ChainState ground(std::size_t length, Sublattice first = Sublattice::A);
  static ChainState parse(std::string_view text);
  std::string to_string() const;
  void validate() const;
  std::size_t size() const { return sites.size(); }
  bool operator==(const ChainState&) const = default;
};

// twice the magnetic quantum number of a site: A ground +1, A excited -1, B ground -1, B excited +1
int twice_m(const Site& site);
// twice the sum of neighbour m values (single neighbour at the ends)
int twice_neighbor_sum(const ChainState& chain, std::size_t i);

struct PulseSpec {
  Sublattice sublattice = Sublattice::A;
  int twice_sum = 0;  // 2 (m_< + m_>), in {-2, -1, 0, 1, 2}
  double angle = 3.14159265358979323846;
  bool operator==(const PulseSpec&) const = default;
};
PulseSpec pi_pulse(Sublattice sublattice, int twice_sum);

struct ChainCouplings {
  double hyperfine_a = 0.0;  // rad/s
  double zeeman = 0.0;       // rad/s, gamma_I B
  double spin_spin = 0.0;    // rad/s, I_n / hbar
  double linewidth = 0.0;    // rad/s, pulse selectivity

  // 31P at 1 T with a 0.5 MHz neighbour coupling and 0.05 MHz linewidth
  static ChainCouplings defaults();
  // ratio and collision checks; throws DomainError
  void validate() const;
};

// |zeeman +- A/2 - I_n (m_< + m_>)|, + on sublattice A
double resonance_frequency(const ChainCouplings& couplings, Sublattice sublattice, int twice_sum);

// simultaneous flip of every non-port site of the pulse's sublattice whose current
// neighbour sum matches; even multiples of pi are identities
ChainState apply_pulse(const ChainState& chain, const PulseSpec& pulse, const ChainCouplings& couplings);
ChainState apply_program(const ChainState& chain, const std::vector<PulseSpec>& program,
                         const ChainCouplings& couplings);

// "0" = A-exc B-exc A-gnd B-gnd, "1" = A-gnd B-gnd A-exc B-exc
std::array<Spin, 4> logical_pattern(int bit);

struct EncodeResult {
  ChainState state;
  std::vector<PulseSpec> program;
};
// shortest program of table pulses writing the pattern into sites [position, position + 4)
// while leaving every other site unchanged
EncodeResult encode_logical(const ChainState& chain, std::size_t position, int bit,
                            const ChainCouplings& couplings, std::size_t search_budget = 1u << 22);

// flips needed to turn one 4-site pattern into the other
int check_code_distance(const std::array<Spin, 4>& a, const std::array<Spin, 4>& b);
int check_code_distance(const std::array<Spin, 4>& window);  // against the other codeword
bool is_codeword(const std::array<Spin, 4>& window);
// two excited spins and zero net m on an A,B,A,B window
bool window_balanced(const std::array<Spin, 4>& window);

enum class PortOp { write_ground, write_excited, swap_in, swap_out, read };
struct PortResult {
  ChainState state;
  std::optional<Spin> value;
  std::vector<std::string> program;  // symbolic pulses at the port frequencies
};
PortResult port_io(const ChainState& chain, std::size_t dopant_index, PortOp op);

std::string serialize_program(const std::vector<PulseSpec>& program);
std::vector<PulseSpec> parse_program(std::string_view text);

// six-site control unit W V v ^ W V (starts on a B site)
ChainState control_unit_preset();
// number of spacer sites between two disjoint site ranges must be odd
bool cu_spacing_valid(std::size_t cu_start, std::size_t window_start, std::size_t cu_length = 6,
                      std::size_t window_length = 4);
// 'A'/'B' grid with no equal horizontal or vertical neighbours
bool is_antiferromagnetic_2d(const std::vector<std::string>& grid);

std::string to_string(Sublattice s);

}  // namespace nmrqc
