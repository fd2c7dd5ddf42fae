#include <doctest.h>

#include <cmath>

#include "nmrqc/automaton.hpp"
#include "nmrqc/errors.hpp"

using namespace nmrqc;

namespace {

// frequency-matching reference: a site flips when its own resonance, set by its
// sublattice and the m values of its neighbours, lies within the pulse linewidth
ChainState brute_force_pulse(const ChainState& chain, const PulseSpec& p, const ChainCouplings& c) {
  auto m_half = [](const Site& s) {
    const double base = s.sublattice == Sublattice::A ? 0.5 : -0.5;
    return s.spin == Spin::ground ? base : -base;
  };
  const double hf_p = p.sublattice == Sublattice::A ? 0.5 * c.hyperfine_a : -0.5 * c.hyperfine_a;
  const double wp = std::abs(c.zeeman + hf_p - c.spin_spin * 0.5 * p.twice_sum);
  ChainState out = chain;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Site& s = chain.sites[i];
    if (s.marker == Marker::dopant_port) continue;
    double sum = 0.0;
    if (i > 0) sum += m_half(chain.sites[i - 1]);
    if (i + 1 < chain.size()) sum += m_half(chain.sites[i + 1]);
    const double hf = s.sublattice == Sublattice::A ? 0.5 * c.hyperfine_a : -0.5 * c.hyperfine_a;
    const double ws = std::abs(c.zeeman + hf - c.spin_spin * sum);
    if (std::abs(ws - wp) < c.linewidth) out.sites[i].spin = s.spin == Spin::ground ? Spin::excited : Spin::ground;
  }
  return out;
}

ChainState from_mask(std::size_t n, unsigned mask) {
  ChainState s = ChainState::ground(n);
  for (std::size_t i = 0; i < n; ++i)
    if (mask >> i & 1u) s.sites[i].spin = Spin::excited;
  return s;
}

std::array<Spin, 4> window_at(const ChainState& s, std::size_t pos) {
  return {s.sites[pos].spin, s.sites[pos + 1].spin, s.sites[pos + 2].spin, s.sites[pos + 3].spin};
}

}  // namespace

TEST_CASE("pulse selectivity equals the frequency-matching reference on every 8-site state") {
  const auto c = ChainCouplings::defaults();
  for (unsigned mask = 0; mask < 256; ++mask) {
    const auto s = from_mask(8, mask);
    for (Sublattice sub : {Sublattice::A, Sublattice::B})
      for (int t = -2; t <= 2; ++t) {
        const auto p = pi_pulse(sub, t);
        CHECK(apply_pulse(s, p, c) == brute_force_pulse(s, p, c));
        CHECK(apply_pulse(apply_pulse(s, p, c), p, c) == s);
      }
  }
}

TEST_CASE("two-pulse program writes logical zero") {
  const auto c = ChainCouplings::defaults();
  const auto s = apply_program(ChainState::ground(8), {pi_pulse(Sublattice::A, -1), pi_pulse(Sublattice::B, 0)}, c);
  CHECK(s.to_string() == "VW^v^v^v");
  CHECK(window_at(s, 0) == logical_pattern(0));
  CHECK(check_code_distance(logical_pattern(0), logical_pattern(1)) == 4);
  CHECK(check_code_distance(logical_pattern(1)) == 4);
  CHECK(window_balanced(logical_pattern(0)));
  CHECK(window_balanced(logical_pattern(1)));
  CHECK_FALSE(window_balanced({Spin::excited, Spin::ground, Spin::ground, Spin::ground}));
  CHECK_THROWS_AS(check_code_distance({Spin::excited, Spin::ground, Spin::ground, Spin::ground}), DomainError);
}

TEST_CASE("encoding leaves the rest of the chain unchanged") {
  const auto c = ChainCouplings::defaults();
  for (std::size_t n : {8u, 10u})
    for (std::size_t pos = 0; pos + 4 <= n; pos += 2)
      for (int bit : {0, 1}) {
        const auto chain = ChainState::ground(n);
        const auto enc = encode_logical(chain, pos, bit, c);
        CHECK(window_at(enc.state, pos) == logical_pattern(bit));
        for (std::size_t i = 0; i < n; ++i)
          if (i < pos || i >= pos + 4) CHECK(enc.state.sites[i] == chain.sites[i]);
        CHECK(apply_program(chain, enc.program, c) == enc.state);
      }
  CHECK(encode_logical(ChainState::ground(8), 0, 0, c).program.size() == 2);
  CHECK_THROWS_AS(encode_logical(ChainState::ground(8), 1, 0, c), DomainError);
  CHECK_THROWS_AS(encode_logical(ChainState::ground(8), 6, 0, c), DomainError);
  CHECK_THROWS_AS(encode_logical(ChainState::ground(12), 4, 1, c, 3), EncodingBlocked);
}

TEST_CASE("non-pi angles") {
  const auto c = ChainCouplings::defaults();
  const auto s = ChainState::ground(6);
  PulseSpec p = pi_pulse(Sublattice::A, -1);
  p.angle = 2.0 * 3.14159265358979323846;
  CHECK(apply_pulse(s, p, c) == s);
  p.angle = 3.0 * 3.14159265358979323846;
  CHECK(apply_pulse(s, p, c) == apply_pulse(s, pi_pulse(Sublattice::A, -1), c));
  p.angle = 1.0;
  CHECK_THROWS_AS(apply_pulse(s, p, c), DomainError);
}

TEST_CASE("couplings validation") {
  auto c = ChainCouplings::defaults();
  c.validate();
  c.spin_spin = c.zeeman;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = ChainCouplings::defaults();
  c.linewidth = c.spin_spin;
  CHECK_THROWS_AS(c.validate(), DomainError);
  // the four frequency bands sit within a factor 3 of 120 MHz
  const auto d = ChainCouplings::defaults();
  for (Sublattice sub : {Sublattice::A, Sublattice::B}) {
    const double f = resonance_frequency(d, sub, 0) / (2.0 * 3.14159265358979323846);
    CHECK(f > 40e6);
    CHECK(f < 360e6);
  }
}

TEST_CASE("text round trips") {
  const auto s = ChainState::parse("^W*Vv");
  CHECK(s.size() == 4);
  CHECK(s.sites[2].marker == Marker::dopant_port);
  CHECK(s.to_string() == "^W*Vv");
  CHECK_THROWS_AS(ChainState::parse("^^"), DomainError);
  CHECK_THROWS_AS(ChainState::parse("^x"), DomainError);
  CHECK_THROWS_AS(ChainState::parse("^v*"), DomainError);
  const std::vector<PulseSpec> prog = {pi_pulse(Sublattice::A, -1), pi_pulse(Sublattice::B, 0),
                                       pi_pulse(Sublattice::B, 2)};
  const auto text = serialize_program(prog);
  CHECK(text == "A -1/2 pi\nB 0 pi\nB 1 pi\n");
  CHECK(parse_program(text) == prog);
  CHECK_THROWS_AS(parse_program("C 0 pi\n"), DomainError);
  CHECK_THROWS_AS(parse_program("A 3/2 pi\n"), DomainError);
}

TEST_CASE("port input and output") {
  const auto chain = ChainState::parse("^v*^v^v");
  CHECK_THROWS_AS(port_io(chain, 1, PortOp::read), InvalidPort);
  const auto w = port_io(chain, 2, PortOp::write_excited);
  CHECK(w.state.sites[2].spin == Spin::excited);
  CHECK(port_io(w.state, 2, PortOp::read).value == Spin::excited);
  // swapping exchanges the excitation flags of the port and its neighbour
  const auto sw = port_io(w.state, 2, PortOp::swap_out);
  CHECK(sw.state.sites[2].spin == Spin::ground);
  CHECK(sw.state.sites[3].spin == Spin::excited);
  CHECK(sw.program.size() == 3);
  CHECK(port_io(sw.state, 2, PortOp::swap_in).state == w.state);
  // ports are transparent to table pulses
  const auto c = ChainCouplings::defaults();
  for (Sublattice sub : {Sublattice::A, Sublattice::B})
    for (int t = -2; t <= 2; ++t) CHECK(apply_pulse(w.state, pi_pulse(sub, t), c).sites[2] == w.state.sites[2]);
}

TEST_CASE("control unit placement and two-dimensional ordering") {
  const auto cu = control_unit_preset();
  CHECK(cu.to_string() == "WVv^WV");
  CHECK(cu.sites[0].sublattice == Sublattice::B);
  CHECK(cu_spacing_valid(0, 7));
  CHECK_FALSE(cu_spacing_valid(0, 8));
  CHECK(cu_spacing_valid(11, 0));
  CHECK_FALSE(cu_spacing_valid(0, 3));
  CHECK(is_antiferromagnetic_2d({"ABAB", "BABA", "ABAB"}));
  CHECK_FALSE(is_antiferromagnetic_2d({"ABAB", "ABAB"}));
  CHECK_FALSE(is_antiferromagnetic_2d({"AAB"}));
}
