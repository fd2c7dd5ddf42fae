#include <doctest.h>

#include <cmath>

#include "nmrqc/entangled.hpp"
#include "nmrqc/errors.hpp"

using namespace nmrqc;

TEST_CASE("diagonal conjugation equals the full unitary") {
  const auto rho = partially_entangled(0.3) + bell_state(-1);
  for (double p1 : {0.0, 0.4, -1.3})
    for (double p2 : {0.2, 2.1})
      for (double pi : {0.0, 0.7}) {
        const Eigen::Matrix4cd u = phase_unitary(p1, p2, pi);
        CHECK((u.adjoint() * u - Eigen::Matrix4cd::Identity()).norm() < 1e-14);
        CHECK((u.adjoint() * rho * u - conjugate_by_phases(rho, p1, p2, pi)).norm() < 1e-14);
      }
}

TEST_CASE("decrement ratios") {
  for (double s2 : {0.1, 0.7, 3.0}) {
    const double g1 = single_qubit_decrement(s2);
    const auto full = CorrelatedPhaseModel::constant(s2, s2, 1.0);
    const auto none = CorrelatedPhaseModel::constant(s2, s2, 0.0);
    CHECK(epr_decrement(full, 0.0) == 0.0);
    CHECK(bell_decrement(full, 0.0) / g1 == 4.0);
    CHECK(epr_decrement(none, 0.0) / g1 == 2.0);
    CHECK(bell_decrement(none, 0.0) / g1 == 2.0);
  }
  CHECK_THROWS_AS(epr_decrement(CorrelatedPhaseModel::constant(1.0, 1.0, 1.5), 0.0), DomainError);
  CHECK_THROWS_AS(epr_decrement(CorrelatedPhaseModel::constant(-1.0, 1.0, 0.5), 0.0), DomainError);
}

TEST_CASE("time-dependent model") {
  CorrelatedPhaseModel m;
  m.sigma1_sq = [](double t) { return t * t; };
  m.sigma2_sq = [](double t) { return 4.0 * t * t; };
  m.rho12 = [](double) { return 0.5; };
  // a + b - 2 r sqrt(ab) = t^2 (1 + 4 - 2) = 3 t^2
  CHECK(epr_decrement(m, 2.0) == doctest::Approx(0.5 * 12.0));
  CHECK(bell_decrement(m, 2.0) == doctest::Approx(0.5 * 28.0));
}

TEST_CASE("averaged states") {
  const auto model = CorrelatedPhaseModel::constant(0.5, 0.5, 0.0);
  const auto epr = averaged_epr(model, 0.0);
  CHECK(epr(1, 2).real() == doctest::Approx(0.5 * std::exp(-0.5)));
  CHECK(epr.trace().real() == doctest::Approx(1.0));
  CHECK(purity(epr) < 1.0);
  CHECK(purity(epr_triplet()) == doctest::Approx(1.0));
  const auto bell = averaged_bell(CorrelatedPhaseModel::constant(0.5, 0.5, 1.0), 0.0, -1);
  CHECK(bell(0, 3).real() == doctest::Approx(-0.5 * std::exp(-1.0)));
  CHECK_THROWS_AS(partially_entangled(1.5), DomainError);
}

TEST_CASE("sampled phases have the requested covariance") {
  const auto model = CorrelatedPhaseModel::constant(0.8, 0.3, 0.6);
  const auto s = sample_correlated_phases(model, 0.0, 400000, 3);
  double a = 0.0, b = 0.0, ab = 0.0;
  for (std::size_t i = 0; i < s.phi1.size(); ++i) {
    a += s.phi1[i] * s.phi1[i];
    b += s.phi2[i] * s.phi2[i];
    ab += s.phi1[i] * s.phi2[i];
  }
  const double n = static_cast<double>(s.phi1.size());
  CHECK(a / n == doctest::Approx(0.8).epsilon(0.01));
  CHECK(b / n == doctest::Approx(0.3).epsilon(0.01));
  CHECK(ab / n == doctest::Approx(0.6 * std::sqrt(0.8 * 0.3)).epsilon(0.02));
}

TEST_CASE("Monte Carlo coherences agree with the closed form") {
  const auto model = CorrelatedPhaseModel::constant(0.4, 0.9, 0.3, 0.2);
  const auto mc = monte_carlo_average(epr_triplet(), model, 0.0, 200000, 9, 2);
  const auto an = averaged_epr(model, 0.0);
  CHECK(std::abs(mc.mean(1, 2) - an(1, 2)) < 4.0 * mc.std_error(1, 2));
  // the coupling phase cancels in this coherence and the populations are untouched
  CHECK(mc.mean(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
  const auto same = monte_carlo_average(epr_triplet(), model, 0.0, 200000, 9, 7);
  CHECK((mc.mean - same.mean).norm() == 0.0);
  const auto bell = monte_carlo_average(bell_state(1), model, 0.0, 200000, 10, 0);
  const auto bell_an = averaged_bell(model, 0.0, 1);
  CHECK(std::abs(bell.mean(0, 3) - bell_an(0, 3)) < 4.0 * bell.std_error(0, 3));
}
