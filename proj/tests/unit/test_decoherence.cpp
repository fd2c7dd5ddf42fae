#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmrqc/constants.hpp"
#include "nmrqc/decoherence.hpp"
#include "nmrqc/errors.hpp"

using namespace nmrqc;
using namespace nmrqc::constants;
using boost::math::quadrature::gauss_kronrod;

namespace {

// half the variance of the accumulated phase, integrated over the square [0, t]^2
double decrement_oracle(const NoiseChannel& ch, double t) {
  auto outer = [&](double t1) {
    auto k = [&](double t2) { return ch.variance * std::exp(-std::abs(t1 - t2) / ch.corr_time); };
    return gauss_kronrod<double, 31>::integrate(k, 0.0, t1, 5, 1e-11) +
           gauss_kronrod<double, 31>::integrate(k, t1, t, 5, 1e-11);
  };
  return 0.5 * gauss_kronrod<double, 31>::integrate(outer, 0.0, t, 8, 1e-11);
}

}  // namespace

TEST_CASE("decrement closed form against the double integral") {
  const NoiseChannel ch{3.0, 0.7, NoiseKind::custom};
  for (double x : {1e-6, 1e-3, 0.1, 0.49, 0.51, 1.0, 4.0, 10.0}) {
    const double t = x * ch.corr_time;
    CHECK(decrement(ch, t) == doctest::Approx(decrement_oracle(ch, t)).epsilon(1e-9));
  }
  CHECK(decrement(ch, 0.0) == 0.0);
  CHECK_THROWS_AS(decrement(ch, -1.0), DomainError);
}

TEST_CASE("decrement limits") {
  const NoiseChannel ch{2.0, 5.0, NoiseKind::custom};
  const double early = ch.corr_time / 100.0;
  CHECK(std::abs(decrement_quadratic(ch, early) / decrement(ch, early) - 1.0) < 0.01);
  const double late = ch.corr_time * 1000.0;
  CHECK(std::abs(decrement_linear(ch, late) / decrement(ch, late) - 1.0) < 0.002);
  CHECK(classify_regime(ch, early) == DephasingRegime::quadratic);
  CHECK(classify_regime(ch, ch.corr_time) == DephasingRegime::intermediate);
  CHECK(classify_regime(ch, late) == DephasingRegime::linear);
}

TEST_CASE("decoherence time solves the half-decrement condition") {
  for (double tau : {1e-3, 1.0, 1e4}) {
    const NoiseChannel ch{1.0, tau, NoiseKind::custom};
    const double td = decoherence_time(ch);
    CHECK(decrement(ch, td) == doctest::Approx(0.5).epsilon(1e-10));
  }
  // slow noise: T_d = 1 / sqrt(variance)
  const NoiseChannel slow{4.0, 1e9, NoiseKind::custom};
  CHECK(decoherence_time(slow) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(decoherence_time(NoiseChannel{0.0, 1.0, NoiseKind::custom}), DomainError);
}

TEST_CASE("dephased single-qubit density") {
  const BlochVector p{0.6, 0.0, 0.8};
  const auto rho = dephase_density(p, 0.0);
  CHECK(rho.trace().real() == doctest::Approx(1.0));
  const auto ev = dephased_eigenvalues(p, 0.0);
  CHECK(ev(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(1.0));
  for (double g : {0.1, 1.0, 5.0}) {
    const BlochVector q{0.3, -0.4, 0.5};
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(dephase_density(q, g));
    const auto mine = dephased_eigenvalues(q, g);
    CHECK(es.eigenvalues()(0) == doctest::Approx(mine(0)).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(mine(1)).epsilon(1e-12));
  }
  // full dephasing of an equatorial state leaves the maximally mixed state
  const auto mixed = dephased_eigenvalues(BlochVector{1.0, 0.0, 0.0}, 60.0);
  CHECK(mixed(0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(dephase_density(BlochVector{1.0, 1.0, 0.0}, 0.1), DomainError);
}

TEST_CASE("hyperfine dephasing threshold") {
  const auto sp = phosphorus31();
  const auto th = required_field_over_temp(sp, 1.0);
  CHECK(th.exact >= 27.0);
  CHECK(th.exact <= 34.0);
  CHECK(2.0 / 0.06 >= th.exact);
  // re-substitution: the rate at the threshold equals the target
  Environment env;
  env.b_field = th.exact;
  env.temp_lattice = 1.0;
  CHECK(std::sqrt(hyperfine_variance(sp, env)) == doctest::Approx(1.0).epsilon(1e-6));
  // larger targets need smaller B/T
  CHECK(required_field_over_temp(sp, 1e3).exact < th.exact);
  CHECK(required_field_over_temp(sp, 1e12).exact == 0.0);
}

TEST_CASE("exponential form of the hyperfine variance") {
  const auto sp = phosphorus31();
  for (double bt : {5.0, 10.0, 30.0}) {
    Environment env;
    env.b_field = bt;
    env.temp_lattice = 1.0;
    const double y = sp.gamma_e * hbar * bt / (2.0 * k_b);
    const double ratio = hyperfine_variance_approx(sp, env) / hyperfine_variance(sp, env);
    CHECK(ratio == doctest::Approx(2.0 * std::pow(1.0 + std::exp(-2.0 * y), 2)).epsilon(1e-10));
    if (y > 5.0) CHECK(ratio <= 2.05);
  }
}

TEST_CASE("impurity dipolar bound") {
  const auto sp = phosphorus31();
  ImpuritySpec imp;
  imp.temp_nuclear_imp = 0.8e-3;
  Environment env;
  env.b_field = 2.0;
  const double allowed = allowed_concentration(sp, imp, env, 1.0);
  CHECK(allowed_concentration(sp, imp, env, 2.0) == doctest::Approx(4.0 * allowed));
  imp.concentration = allowed;
  CHECK(impurity_variance(sp, imp, env) == doctest::Approx(1.0));
  CHECK(0.047 / allowed > 50.0);
  ImpuritySpec warm;
  warm.temp_nuclear_imp = 1.0;
  const double hot = impurity_thermal_factor(warm, Environment{});
  CHECK(hot <= 1.0);
  CHECK(hot > 0.99);
  CHECK(impurity_thermal_factor(ImpuritySpec{}, Environment{}) < hot);
}

TEST_CASE("dipolar moment Monte Carlo") {
  ImpuritySpec imp;
  const auto a = impurity_moment_monte_carlo(imp, 200000, 5, 1);
  const auto b = impurity_moment_monte_carlo(imp, 200000, 5, 4);
  CHECK(a.monte_carlo == b.monte_carlo);
  CHECK(a.ratio() == doctest::Approx(1.0).epsilon(0.25));
  CHECK(std::abs(a.monte_carlo - a.analytic * (1.0 - 1.0 / 8000.0)) < 4.0 * a.std_error);
}

TEST_CASE("adiabaticity") {
  const NoiseChannel ch{1.0, 1e4, NoiseKind::custom};
  CHECK(adiabaticity_check(ch, 1e8, 1e-3));
  CHECK_FALSE(adiabaticity_check(ch, 1e2, 1e-3));
  CHECK_FALSE(adiabaticity_check(NoiseChannel{1.0, 1e-4, NoiseKind::custom}, 1e8, 1e-3));
}
