#include "nmrqc/automaton.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

using constants::pi;
using constants::two_pi;

std::string to_string(Sublattice s) { return s == Sublattice::A ? "A" : "B"; }

ChainState ChainState::ground(std::size_t length, Sublattice first) {
  ChainState c;
  Sublattice s = first;
  for (std::size_t i = 0; i < length; ++i) {
    c.sites.push_back({s, Spin::ground, Marker::none});
    s = s == Sublattice::A ? Sublattice::B : Sublattice::A;
  }
  c.validate();
  return c;
}

void ChainState::validate() const {
  if (sites.size() < 2) throw DomainError("chain: at least two sites required");
  for (std::size_t i = 1; i < sites.size(); ++i)
    if (sites[i].sublattice == sites[i - 1].sublattice)
      throw DomainError("chain: sublattices must alternate (site " + std::to_string(i) + ")");
}

ChainState ChainState::parse(std::string_view text) {
  ChainState c;
  bool port = false;
  for (char ch : text) {
    if (ch == '*') {
      if (port) throw DomainError("chain text: doubled port marker");
      port = true;
      continue;
    }
    Site s;
    switch (ch) {
      case '^': s = {Sublattice::A, Spin::ground, Marker::none}; break;
      case 'V': s = {Sublattice::A, Spin::excited, Marker::none}; break;
      case 'v': s = {Sublattice::B, Spin::ground, Marker::none}; break;
      case 'W': s = {Sublattice::B, Spin::excited, Marker::none}; break;
      default: throw DomainError(std::string("chain text: unexpected character '") + ch + "'");
    }
    if (port) s.marker = Marker::dopant_port;
    port = false;
    c.sites.push_back(s);
  }
  if (port) throw DomainError("chain text: dangling port marker");
  c.validate();
  return c;
}

std::string ChainState::to_string() const {
  std::string out;
  for (const auto& s : sites) {
    if (s.marker == Marker::dopant_port) out += '*';
    if (s.sublattice == Sublattice::A)
      out += s.spin == Spin::ground ? '^' : 'V';
    else
      out += s.spin == Spin::ground ? 'v' : 'W';
  }
  return out;
}

int twice_m(const Site& site) {
  const int base = site.sublattice == Sublattice::A ? 1 : -1;
  return site.spin == Spin::ground ? base : -base;
}

int twice_neighbor_sum(const ChainState& chain, std::size_t i) {
  int s = 0;
  if (i > 0) s += twice_m(chain.sites[i - 1]);
  if (i + 1 < chain.sites.size()) s += twice_m(chain.sites[i + 1]);
  return s;
}

PulseSpec pi_pulse(Sublattice sublattice, int twice_sum) {
  if (twice_sum < -2 || twice_sum > 2) throw DomainError("pulse: neighbour sum outside [-1, 1]");
  return {sublattice, twice_sum, pi};
}

ChainCouplings ChainCouplings::defaults() {
  return {two_pi * 116e6, 108e6, two_pi * 0.5e6, two_pi * 0.05e6};
}

double resonance_frequency(const ChainCouplings& c, Sublattice sublattice, int twice_sum) {
  if (twice_sum < -2 || twice_sum > 2) throw DomainError("resonance_frequency: neighbour sum outside [-1, 1]");
  const double hf = sublattice == Sublattice::A ? 0.5 * c.hyperfine_a : -0.5 * c.hyperfine_a;
  return std::abs(c.zeeman + hf - c.spin_spin * 0.5 * twice_sum);
}

void ChainCouplings::validate() const {
  if (!(hyperfine_a > 0.0 && zeeman > 0.0 && spin_spin > 0.0 && linewidth > 0.0))
    throw DomainError("couplings: all entries must be positive");
  if (!(zeeman > 10.0 * spin_spin && 0.5 * hyperfine_a > 10.0 * spin_spin))
    throw DomainError("couplings: Zeeman and hyperfine terms must exceed the neighbour coupling tenfold");
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      if (std::abs(resonance_frequency(*this, Sublattice::A, a) -
                   resonance_frequency(*this, Sublattice::B, b)) <= linewidth)
        throw DomainError("couplings: an A-site and a B-site frequency collide within the linewidth");
  if (spin_spin * 0.5 <= linewidth)
    throw DomainError("couplings: neighbour splitting not resolved by the linewidth");
}

namespace {

// number of half turns for angles that are integer multiples of pi
long long half_turns(double angle) {
  const double k = angle / pi;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9) throw DomainError("apply_pulse: only multiples of pi map states to states");
  return static_cast<long long>(r);
}

}  // namespace

ChainState apply_pulse(const ChainState& chain, const PulseSpec& pulse, const ChainCouplings& couplings) {
  chain.validate();
  couplings.validate();
  if (pulse.twice_sum < -2 || pulse.twice_sum > 2) throw DomainError("apply_pulse: invalid neighbour sum");
  if (half_turns(pulse.angle) % 2 == 0) return chain;
  ChainState out = chain;
  for (std::size_t i = 0; i < chain.sites.size(); ++i) {
    const Site& s = chain.sites[i];
    if (s.marker == Marker::dopant_port || s.sublattice != pulse.sublattice) continue;
    if (twice_neighbor_sum(chain, i) != pulse.twice_sum) continue;
    out.sites[i].spin = s.spin == Spin::ground ? Spin::excited : Spin::ground;
  }
  return out;
}

ChainState apply_program(const ChainState& chain, const std::vector<PulseSpec>& program,
                         const ChainCouplings& couplings) {
  ChainState s = chain;
  for (const auto& p : program) s = apply_pulse(s, p, couplings);
  return s;
}

std::array<Spin, 4> logical_pattern(int bit) {
  if (bit == 0) return {Spin::excited, Spin::excited, Spin::ground, Spin::ground};
  if (bit == 1) return {Spin::ground, Spin::ground, Spin::excited, Spin::excited};
  throw DomainError("logical_pattern: bit must be 0 or 1");
}

namespace {

// bitmask view of a chain for the program search; bit i set = site i excited
struct MaskChain {
  std::vector<int> sign;  // +1 on A sites, -1 on B sites
  std::vector<bool> port;
  std::size_t n = 0;

  int m2(std::uint64_t mask, std::size_t i) const { return (mask >> i & 1u) ? -sign[i] : sign[i]; }
  std::uint64_t apply(std::uint64_t mask, int sub_sign, int twice_sum) const {
    std::uint64_t flips = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (sign[i] != sub_sign || port[i]) continue;
      int s = 0;
      if (i > 0) s += m2(mask, i - 1);
      if (i + 1 < n) s += m2(mask, i + 1);
      if (s == twice_sum) flips |= std::uint64_t{1} << i;
    }
    return mask ^ flips;
  }
};

}  // namespace

EncodeResult encode_logical(const ChainState& chain, std::size_t position, int bit,
                            const ChainCouplings& couplings, std::size_t search_budget) {
  chain.validate();
  couplings.validate();
  const auto pattern = logical_pattern(bit);
  if (chain.size() > 64) throw DomainError("encode_logical: chains longer than 64 sites are not supported");
  if (position + 4 > chain.size()) throw DomainError("encode_logical: window exceeds the chain");
  for (std::size_t k = 0; k < 4; ++k) {
    const Site& s = chain.sites[position + k];
    const Sublattice want = k % 2 == 0 ? Sublattice::A : Sublattice::B;
    if (s.sublattice != want) throw DomainError("encode_logical: window must be aligned A,B,A,B");
    if (s.spin != Spin::ground) throw DomainError("encode_logical: window must start in the ground state");
    if (s.marker != Marker::none) throw DomainError("encode_logical: window overlaps a port");
  }

  MaskChain mc;
  mc.n = chain.size();
  std::uint64_t start = 0;
  for (std::size_t i = 0; i < mc.n; ++i) {
    mc.sign.push_back(chain.sites[i].sublattice == Sublattice::A ? 1 : -1);
    mc.port.push_back(chain.sites[i].marker == Marker::dopant_port);
    if (chain.sites[i].spin == Spin::excited) start |= std::uint64_t{1} << i;
  }
  std::uint64_t target = start;
  for (std::size_t k = 0; k < 4; ++k)
    if (pattern[k] == Spin::excited) target |= std::uint64_t{1} << (position + k);

  std::vector<PulseSpec> pulses;
  for (Sublattice s : {Sublattice::A, Sublattice::B})
    for (int t = -2; t <= 2; ++t) pulses.push_back(pi_pulse(s, t));

  // breadth-first search over chain states reachable with table pulses
  struct Prev {
    std::uint64_t from;
    int pulse;
  };
  std::unordered_map<std::uint64_t, Prev> seen;
  seen.emplace(start, Prev{start, -1});
  std::deque<std::uint64_t> queue{start};
  bool found = start == target;
  while (!queue.empty() && !found) {
    const std::uint64_t cur = queue.front();
    queue.pop_front();
    for (std::size_t p = 0; p < pulses.size() && !found; ++p) {
      const int sub = pulses[p].sublattice == Sublattice::A ? 1 : -1;
      const std::uint64_t next = mc.apply(cur, sub, pulses[p].twice_sum);
      if (next == cur || seen.count(next)) continue;
      seen.emplace(next, Prev{cur, static_cast<int>(p)});
      if (next == target) found = true;
      queue.push_back(next);
    }
    if (seen.size() > search_budget)
      throw EncodingBlocked("encode_logical: search budget exhausted before reaching the target");
  }
  if (!found) throw EncodingBlocked("encode_logical: no table-pulse program reaches the target window");

  EncodeResult out;
  for (std::uint64_t s = target; s != start;) {
    const Prev& pr = seen.at(s);
    out.program.insert(out.program.begin(), pulses[static_cast<std::size_t>(pr.pulse)]);
    s = pr.from;
  }
  out.state = apply_program(chain, out.program, couplings);
  return out;
}

int check_code_distance(const std::array<Spin, 4>& a, const std::array<Spin, 4>& b) {
  int d = 0;
  for (std::size_t i = 0; i < 4; ++i) d += a[i] != b[i];
  return d;
}

bool is_codeword(const std::array<Spin, 4>& window) {
  return window == logical_pattern(0) || window == logical_pattern(1);
}

int check_code_distance(const std::array<Spin, 4>& window) {
  if (window == logical_pattern(0)) return check_code_distance(window, logical_pattern(1));
  if (window == logical_pattern(1)) return check_code_distance(window, logical_pattern(0));
  throw DomainError("check_code_distance: window is not a codeword");
}

bool window_balanced(const std::array<Spin, 4>& window) {
  int excited = 0, m = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const Site s{k % 2 == 0 ? Sublattice::A : Sublattice::B, window[k], Marker::none};
    excited += window[k] == Spin::excited;
    m += twice_m(s);
  }
  return excited == 2 && m == 0;
}

PortResult port_io(const ChainState& chain, std::size_t dopant_index, PortOp op) {
  chain.validate();
  if (dopant_index >= chain.size() || chain.sites[dopant_index].marker != Marker::dopant_port)
    throw InvalidPort("port_io: site " + std::to_string(dopant_index) + " is not a dopant port");
  PortResult out{chain, std::nullopt, {}};
  Site& d = out.state.sites[dopant_index];
  const std::string dl = "D" + std::to_string(dopant_index);
  auto flip = [](Site& s) { s.spin = s.spin == Spin::ground ? Spin::excited : Spin::ground; };
  switch (op) {
    case PortOp::read:
      out.value = d.spin;
      break;
    case PortOp::write_ground:
    case PortOp::write_excited: {
      const Spin want = op == PortOp::write_ground ? Spin::ground : Spin::excited;
      if (d.spin != want) {
        flip(d);
        out.program.push_back(dl + " pi");
      }
      break;
    }
    case PortOp::swap_in:
    case PortOp::swap_out: {
      const std::size_t nb = dopant_index + 1 < chain.size() ? dopant_index + 1 : dopant_index - 1;
      Site& x = out.state.sites[nb];
      if (x.marker == Marker::dopant_port) throw InvalidPort("port_io: adjacent site is also a port");
      const std::string xl = to_string(x.sublattice) + std::to_string(nb);
      // three conditional inversions exchange the two excitation flags
      if (x.spin == Spin::excited) flip(d);
      out.program.push_back(dl + " if " + xl + " excited pi");
      if (d.spin == Spin::excited) flip(x);
      out.program.push_back(xl + " if " + dl + " excited pi");
      if (x.spin == Spin::excited) flip(d);
      out.program.push_back(dl + " if " + xl + " excited pi");
      break;
    }
  }
  return out;
}

namespace {

std::string sum_token(int twice_sum) {
  switch (twice_sum) {
    case -2: return "-1";
    case -1: return "-1/2";
    case 0: return "0";
    case 1: return "1/2";
    case 2: return "1";
  }
  throw DomainError("pulse: invalid neighbour sum");
}

int parse_sum(const std::string& tok) {
  for (int t = -2; t <= 2; ++t)
    if (sum_token(t) == tok) return t;
  if (tok == "+1/2") return 1;
  if (tok == "+1") return 2;
  throw DomainError("pulse text: invalid neighbour sum '" + tok + "'");
}

}  // namespace

std::string serialize_program(const std::vector<PulseSpec>& program) {
  std::string out;
  for (const auto& p : program) {
    out += to_string(p.sublattice) + " " + sum_token(p.twice_sum) + " ";
    if (p.angle == pi) {
      out += "pi";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", p.angle);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<PulseSpec> parse_program(std::string_view text) {
  std::vector<PulseSpec> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string sub, sum, ang, extra;
    if (!(ls >> sub >> sum >> ang) || (ls >> extra))
      throw DomainError("pulse text line " + std::to_string(lineno) + ": expected '<A|B> <sum> <angle>'");
    PulseSpec p;
    if (sub == "A")
      p.sublattice = Sublattice::A;
    else if (sub == "B")
      p.sublattice = Sublattice::B;
    else
      throw DomainError("pulse text line " + std::to_string(lineno) + ": unknown sublattice '" + sub + "'");
    p.twice_sum = parse_sum(sum);
    if (ang == "pi") {
      p.angle = pi;
    } else {
      std::size_t used = 0;
      p.angle = std::stod(ang, &used);
      if (used != ang.size()) throw DomainError("pulse text line " + std::to_string(lineno) + ": bad angle");
    }
    out.push_back(p);
  }
  return out;
}

ChainState control_unit_preset() { return ChainState::parse("WVv^WV"); }

bool cu_spacing_valid(std::size_t cu_start, std::size_t window_start, std::size_t cu_length,
                      std::size_t window_length) {
  std::size_t gap;
  if (cu_start + cu_length <= window_start)
    gap = window_start - (cu_start + cu_length);
  else if (window_start + window_length <= cu_start)
    gap = cu_start - (window_start + window_length);
  else
    return false;
  return gap % 2 == 1;
}

bool is_antiferromagnetic_2d(const std::vector<std::string>& grid) {
  for (std::size_t r = 0; r < grid.size(); ++r)
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      const char ch = grid[r][c];
      if (ch != 'A' && ch != 'B') return false;
      if (c + 1 < grid[r].size() && grid[r][c + 1] == ch) return false;
      if (r + 1 < grid.size() && c < grid[r + 1].size() && grid[r + 1][c] == ch) return false;
    }
  return true;
}

}  // namespace nmrqc
