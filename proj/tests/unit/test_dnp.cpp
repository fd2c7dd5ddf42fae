#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "nmrqc/constants.hpp"
#include "nmrqc/dnp.hpp"
#include "nmrqc/errors.hpp"

using namespace nmrqc;

namespace {

RelaxationRates saturation_rates() {
  RelaxationRates r;
  r.tau_b = 1e-3;
  r.t_par_a = 10.0;
  r.w_pump = 100.0;
  r.temp = 0.1;
  return r;
}

// normalized kernel vector of M, as the stationary distribution of a closed rate system
Eigen::VectorXd null_space(const Eigen::MatrixXd& m) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  Eigen::MatrixXd k = lu.kernel();
  REQUIRE(k.cols() == 1);
  Eigen::VectorXd v = k.col(0);
  return v / v.sum();
}

Populations thermal_start(const RelaxationRates& r) {
  Environment env;
  env.b_field = 1.0;
  return thermal_populations(phosphorus31(), env, r.temp);
}

}  // namespace

TEST_CASE("affine integrator reproduces exponential decay") {
  AffineSystem sys{Eigen::MatrixXd::Constant(1, 1, -2.0), Eigen::VectorXd::Constant(1, 4.0)};
  AffineOptions o;
  o.tol = 1e-10;
  const auto tr = integrate_affine(sys, Eigen::VectorXd::Constant(1, 0.0), 3.0, o);
  CHECK(tr.t.back() == doctest::Approx(3.0));
  CHECK(tr.y.back()(0) == doctest::Approx(2.0 * (1.0 - std::exp(-6.0))).epsilon(1e-4));
  CHECK(affine_fixed_point(sys)(0) == doctest::Approx(2.0));
  o.max_steps = 2;
  CHECK_THROWS_AS(integrate_affine(sys, Eigen::VectorXd::Constant(1, 0.0), 3.0, o), StepFailure);
}

TEST_CASE("reduced rate system: fixed point equals the null space") {
  const auto r = saturation_rates();
  const auto sys = reduced_rate_system(r);
  CHECK(sys.c.cwiseAbs().maxCoeff() == 0.0);
  const Eigen::VectorXd ns = null_space(sys.m);
  CHECK((dnp_steady_state(r).vec() - ns).cwiseAbs().maxCoeff() < 1e-12);
  // column sums vanish, so the derivative conserves probability
  CHECK(sys.m.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("saturation from thermal start reaches full nuclear polarization") {
  const auto r = saturation_rates();
  const auto traj = integrate_dnp(thermal_start(r), r, 20.0, 1e-8);
  double drift = 0.0, min_pop = 1.0;
  for (const auto& p : traj.p) {
    drift = std::max(drift, std::abs(p.sum() - 1.0));
    min_pop = std::min({min_pop, p.p11, p.p10, p.p1m1, p.p00});
  }
  CHECK(drift < 1e-10);
  CHECK(min_pop >= 0.0);
  CHECK(traj.p.back().p_i() >= 0.99);
  CHECK((traj.p.back().vec() - dnp_steady_state(r).vec()).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("no pumping from equilibrium stays put") {
  auto r = saturation_rates();
  r.w_pump = 0.0;
  Environment env;
  env.b_field = 1.0;
  const auto tr = transition_frequencies(phosphorus31(), env);
  const auto start = thermal_populations(phosphorus31(), env, r.temp);
  const auto d = full_rate_derivative(start, r, tr);
  CHECK(std::abs(d.p11) + std::abs(d.p10) + std::abs(d.p1m1) + std::abs(d.p00) < 1e-12);
  const auto traj = integrate_dnp_full(start, r, tr, 5.0, 1e-9);
  CHECK((traj.p.back().vec() - start.vec()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((dnp_steady_state_full(r, tr).vec() - start.vec()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("full model reduces to the reduced model when electrons freeze and nuclei stay hot") {
  auto r = saturation_rates();
  r.tau_c = r.tau_b;
  r.tau_d = 1e300;
  TransitionSet tr;
  tr.omega_b = tr.omega_c = tr.omega_d = 1e16;
  const Populations p{0.1, 0.2, 0.3, 0.4};
  const auto a = full_rate_derivative(p, r, tr);
  const auto b = reduced_population_derivative(p, r);
  CHECK((a.vec() - b.vec()).cwiseAbs().maxCoeff() < 1e-12);
  // at a real field and 0.1 K the nuclear Boltzmann factors pull the two apart
  Environment env;
  env.b_field = 1.0;
  const auto real = full_rate_derivative(p, r, transition_frequencies(phosphorus31(), env));
  CHECK((real.vec() - b.vec()).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("polarization equations") {
  const auto r = saturation_rates();
  const auto sys = polarization_system(r);
  const PolarizationPair pol{-0.5, 0.2};
  const auto d = reduced_rate_derivative(pol, r);
  const Eigen::Vector2d lin = sys.m * Eigen::Vector2d(pol.p_s, pol.p_i) + sys.c;
  CHECK(d.p_s == doctest::Approx(lin(0)));
  CHECK(d.p_i == doctest::Approx(lin(1)));
  const Eigen::VectorXd fp = affine_fixed_point(sys);
  CHECK(fp(1) > 0.99);
}

TEST_CASE("tolerance and rate validation") {
  const auto r = saturation_rates();
  CHECK_THROWS_AS(integrate_dnp(thermal_start(r), r, 1.0, 1e-2), DomainError);
  CHECK_THROWS_AS(integrate_dnp(thermal_start(r), r, 1.0, 1e-14), DomainError);
  auto bad = r;
  bad.tau_b = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("microwave power bound") {
  const auto sp = phosphorus31();
  const auto a = saturation_power(sp, 100e9, 1.0, 1000.0, 1e8, 1e3, 1e-3);
  const auto b = saturation_power(sp, 100e9, 1.0, 1000.0, 2e8, 1e3, 1e-3);
  CHECK(b.power == doctest::Approx(2.0 * a.power).epsilon(1e-14));
  CHECK(saturation_power(sp, 100e9, 1.0, 1e30, 1e8, 1e3, 1e-3).power < 1e-25);
  // the amplitude implied by the cavity relation gives (gamma_e b)^2 t2* tau_b = 2 W tau_b
  CHECK(std::pow(sp.gamma_e * a.b_mw, 2) * a.t2_star * 1e-3 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(a.saturates);
  CHECK_THROWS_AS(saturation_power(sp, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0), DomainError);
}
