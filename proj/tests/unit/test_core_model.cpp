#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "nmrqc/constants.hpp"
#include "nmrqc/core_model.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/rng.hpp"

using namespace nmrqc;
using namespace nmrqc::constants;

namespace {

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) k.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return k;
}

// spin-1/2 operators built from Pauli matrices, electron (x) nucleus
Eigen::Vector4d diagonalized_levels(const DonorSpecies& s, double b) {
  using cd = std::complex<double>;
  Eigen::Matrix2cd sx, sy, sz, id = Eigen::Matrix2cd::Identity();
  sx << 0.0, 0.5, 0.5, 0.0;
  sy << 0.0, cd(0, -0.5), cd(0, 0.5), 0.0;
  sz << 0.5, 0.0, 0.0, -0.5;
  const double a = hbar * s.hyperfine_a;
  const Eigen::Matrix4cd h = a * (kron(sx, sx) + kron(sy, sy) + kron(sz, sz)) +
                             s.gamma_e * hbar * b * kron(sz, id) - s.gamma_i * hbar * b * kron(id, sz);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  return es.eigenvalues();
}

Environment at_field(double b) {
  Environment env;
  env.b_field = b;
  return env;
}

}  // namespace

TEST_CASE("Breit-Rabi levels match Hamiltonian diagonalization") {
  const auto sp = phosphorus31();
  const CounterRng rng{11};
  for (std::uint64_t i = 0; i < 300; ++i) {
    const double b = std::pow(10.0, -3.0 + 4.0 * rng.uniform(0, i));
    const auto lv = breit_rabi_levels(sp, at_field(b));
    const auto ref = diagonalized_levels(sp, b);
    const double scale = ref.cwiseAbs().maxCoeff();
    for (int k = 0; k < 4; ++k) CHECK(std::abs(lv[static_cast<std::size_t>(k)].energy - ref(k)) / scale < 1e-12);
  }
}

TEST_CASE("zero-field levels are the hyperfine triplet and singlet") {
  const auto sp = phosphorus31();
  const double a = hbar * sp.hyperfine_a;
  const double tiny = 1e-12;
  CHECK(breit_rabi_energy(sp, tiny, 0, 0) == doctest::Approx(-0.75 * a).epsilon(1e-9));
  for (int m = -1; m <= 1; ++m) CHECK(breit_rabi_energy(sp, tiny, 1, m) == doctest::Approx(0.25 * a).epsilon(1e-9));
  CHECK_THROWS_AS(breit_rabi_energy(sp, 1.0, 0, 1), DomainError);
  CHECK_THROWS_AS(breit_rabi_energy(sp, 1.0, 2, 0), DomainError);
}

TEST_CASE("transition frequencies at 1 T") {
  const auto tr = transition_frequencies(phosphorus31(), at_field(1.0));
  CHECK(tr.omega_a_plus / two_pi == doctest::Approx(75e6).epsilon(0.01));
  CHECK(tr.omega_a_minus / two_pi == doctest::Approx(41e6).epsilon(0.01));
  // closure relations among the six lines
  CHECK(tr.omega_b == doctest::Approx(tr.omega_a_minus + tr.omega_d).epsilon(1e-12));
  CHECK(tr.omega_s == doctest::Approx(tr.omega_a_minus + tr.omega_c).epsilon(1e-12));
  CHECK(tr.omega_d == doctest::Approx(tr.omega_a_plus + tr.omega_c).epsilon(1e-12));
}

TEST_CASE("large-field nuclear frequency expansion") {
  const auto sp = phosphorus31();
  for (double b : {1.0, 3.0, 10.0}) {
    const auto tr = transition_frequencies(sp, at_field(b));
    const auto ex = nuclear_frequencies_large_x(sp, at_field(b));
    CHECK(std::abs(ex.omega_a_plus / tr.omega_a_plus - 1.0) < 1e-4);
    CHECK(std::abs(ex.omega_a_minus / tr.omega_a_minus - 1.0) < 1e-4);
  }
}

TEST_CASE("mixing coefficient limits and stability") {
  CHECK(mixing_alpha(0.0) == doctest::Approx(0.5));
  CHECK(mixing_alpha(1e8) == doctest::Approx(0.25e-16).epsilon(1e-6));
  CHECK(mixing_alpha(1e8) > 0.0);
  for (double x : {0.1, 1.0, 10.0}) CHECK(mixing_alpha(x) + mixing_alpha(-x) == doctest::Approx(1.0));
}

TEST_CASE("pseudo-pure probability") {
  const double w = 1e9, t = 1.0;
  const double x = hbar * w / (2.0 * k_b * t);
  CHECK(epsilon_pseudo_pure(1, w, t) == doctest::Approx(std::tanh(x)).epsilon(1e-12));
  // high temperature: L 2^-L (hbar w / kT)
  const double hot = 1e4;
  const double y = hbar * w / (k_b * hot);
  CHECK(epsilon_pseudo_pure(5, w, hot) == doctest::Approx(5.0 / 32.0 * y).epsilon(1e-4));
  CHECK(std::isfinite(log_epsilon_pseudo_pure(1000, w, hot)));
  CHECK_THROWS_AS(epsilon_pseudo_pure(0, w, t), DomainError);
  CHECK(max_qubits_dynamic(1e-3) == 13);
  CHECK(max_qubits_dynamic(0.5) == 0);
  CHECK(max_qubits_dynamic(0.49) == 2);
}

TEST_CASE("gain factor") {
  const auto sp = phosphorus31();
  Environment env = at_field(1.0);
  env.rf_amp = 1e-4;
  const auto g = gain_factor(sp, env);
  CHECK(g.ratio_approx == doctest::Approx(4.4).epsilon(0.02));
  CHECK(g.ratio == doctest::Approx(g.ratio_approx).epsilon(0.01));
  CHECK(g.b_eff == doctest::Approx(g.ratio * 1e-4));
  CHECK(g.rabi == doctest::Approx(sp.gamma_i * g.b_eff));
  env.b_field = 0.01;
  CHECK(gain_factor(sp, env).ratio_approx == doctest::Approx(338.0).epsilon(0.02));
  // the enhancement fades at high field
  env.b_field = 100.0;
  CHECK(gain_factor(sp, env).ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("magnetization elements and register maximum") {
  const auto sp = phosphorus31();
  const auto m = magnetization_elements(sp, at_field(10.0));
  CHECK(m.mz_excited == doctest::Approx(-0.5 * sp.gamma_i * hbar));
  CHECK(m.mz_ground == doctest::Approx(0.5 * sp.gamma_i * hbar).epsilon(1e-3));
  Environment env = at_field(1.0);
  env.temp_nuclear = 1e-3;
  const double m1 = max_magnetization(sp, env, 1.0, 1e15, 10);
  CHECK(std::isfinite(m1));
  CHECK(max_magnetization(sp, env, 2.0, 1e15, 10) == doctest::Approx(0.5 * m1));
}

TEST_CASE("species presets") {
  CHECK(species_preset("P31-in-Si28").label == "P31-in-Si28");
  CHECK_THROWS_AS(species_preset("unknown"), DomainError);
  CHECK_FALSE(species_labels().empty());
  Environment env;
  env.b_field = -1.0;
  CHECK_THROWS_AS(env.validate(), DomainError);
}
