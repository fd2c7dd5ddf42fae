#include "nmrqc/dnp.hpp"

#include <cmath>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

using constants::hbar;
using constants::k_b;

namespace {

enum Index { I11 = 0, I10 = 1, I1M1 = 2, I00 = 3 };

// upper <-> lower exchange: downward rate k, upward rate r k
void add_channel(Eigen::MatrixXd& m, int upper, int lower, double k, double r) {
  m(upper, upper) -= k;
  m(upper, lower) += r * k;
  m(lower, upper) += k;
  m(lower, lower) -= r * k;
}

double inv(double tau) { return std::isinf(tau) ? 0.0 : 1.0 / tau; }

DnpTrajectory to_populations(const AffineTrajectory& tr) {
  DnpTrajectory out;
  out.t = tr.t;
  out.p.reserve(tr.y.size());
  for (const auto& y : tr.y) out.p.push_back(Populations::from_vec(y));
  return out;
}

void check_tol(double tol) {
  if (!(tol > 1e-12 && tol < 1e-3)) throw DomainError("integrate_dnp: tol must lie in (1e-12, 1e-3)");
}

}  // namespace

void RelaxationRates::validate() const {
  if (!(tau_b > 0.0 && tau_c > 0.0 && tau_d > 0.0 && tau_s > 0.0 && t_par_a > 0.0))
    throw DomainError("relaxation rates: all times must be positive");
  if (!(w_pump >= 0.0)) throw DomainError("relaxation rates: pump rate must be non-negative");
  if (!(temp > 0.0)) throw DomainError("relaxation rates: temperature must be positive");
}

BoltzmannFactors boltzmann_factors(const TransitionSet& tr, double temp) {
  auto r = [temp](double w) { return std::exp(-hbar * w / (k_b * temp)); };
  return {r(tr.omega_b), r(tr.omega_c), r(tr.omega_d), r(tr.omega_a_plus), r(tr.omega_a_minus)};
}

Populations thermal_populations(const DonorSpecies& species, const Environment& env, double temp) {
  if (!(temp > 0.0)) throw DomainError("thermal_populations: temperature must be positive");
  const auto lv = breit_rabi_levels(species, env);
  const double e0 = lv[0].energy;
  auto w = [&](int f, int m) { return std::exp(-(level_energy(lv, f, m) - e0) / (k_b * temp)); };
  const double a = w(1, 1), b = w(1, 0), c = w(1, -1), d = w(0, 0);
  const double z = a + b + c + d;
  return {a / z, b / z, c / z, d / z};
}

AffineSystem full_rate_system(const RelaxationRates& rates, const TransitionSet& transitions) {
  rates.validate();
  const auto r = boltzmann_factors(transitions, rates.temp);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  add_channel(m, I11, I00, inv(rates.tau_b), r.r_b);
  add_channel(m, I10, I1M1, inv(rates.tau_c), r.r_c);
  add_channel(m, I10, I00, inv(rates.tau_d), r.r_d);
  add_channel(m, I1M1, I00, inv(rates.t_par_a), r.r_a_plus);
  add_channel(m, I11, I10, inv(rates.t_par_a), r.r_a_minus);
  add_channel(m, I11, I1M1, rates.w_pump, 1.0);
  return {m, Eigen::VectorXd::Zero(4)};
}

AffineSystem reduced_rate_system(const RelaxationRates& rates) {
  rates.validate();
  // frozen electron relaxation (one time tau_b for both branches), hot nuclei
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  add_channel(m, I11, I00, inv(rates.tau_b), 0.0);
  add_channel(m, I10, I1M1, inv(rates.tau_b), 0.0);
  add_channel(m, I1M1, I00, inv(rates.t_par_a), 1.0);
  add_channel(m, I11, I10, inv(rates.t_par_a), 1.0);
  add_channel(m, I11, I1M1, rates.w_pump, 1.0);
  return {m, Eigen::VectorXd::Zero(4)};
}

AffineSystem polarization_system(const RelaxationRates& rates) {
  rates.validate();
  const double w = rates.w_pump, gb = inv(rates.tau_b), ga = inv(rates.t_par_a);
  Eigen::MatrixXd m(2, 2);
  m << -w - gb, -w,
       -w, -w - ga;
  Eigen::VectorXd c(2);
  c << -gb, 0.0;
  return {m, c};
}

Populations full_rate_derivative(const Populations& pops, const RelaxationRates& rates,
                                 const TransitionSet& transitions) {
  const auto sys = full_rate_system(rates, transitions);
  return Populations::from_vec(sys.m * pops.vec());
}

Populations reduced_population_derivative(const Populations& pops, const RelaxationRates& rates) {
  const auto sys = reduced_rate_system(rates);
  return Populations::from_vec(sys.m * pops.vec());
}

PolarizationPair reduced_rate_derivative(const PolarizationPair& pol, const RelaxationRates& rates) {
  if (std::abs(pol.p_s) > 1.0 || std::abs(pol.p_i) > 1.0)
    throw DomainError("reduced_rate_derivative: polarizations must lie in [-1, 1]");
  const auto sys = polarization_system(rates);
  const Eigen::Vector2d y(pol.p_s, pol.p_i);
  const Eigen::Vector2d d = sys.m * y + sys.c;
  return {d(0), d(1)};
}

DnpTrajectory integrate_dnp(const Populations& initial, const RelaxationRates& rates,
                            double duration, double tol) {
  check_tol(tol);
  AffineOptions opts;
  opts.tol = tol;
  return to_populations(integrate_affine(reduced_rate_system(rates), initial.vec(), duration, opts));
}

DnpTrajectory integrate_dnp_full(const Populations& initial, const RelaxationRates& rates,
                                 const TransitionSet& transitions, double duration, double tol) {
  check_tol(tol);
  AffineOptions opts;
  opts.tol = tol;
  return to_populations(
      integrate_affine(full_rate_system(rates, transitions), initial.vec(), duration, opts));
}

Populations dnp_steady_state(const RelaxationRates& rates) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  return Populations::from_vec(affine_fixed_point(reduced_rate_system(rates), ones, 1.0));
}

Populations dnp_steady_state_full(const RelaxationRates& rates, const TransitionSet& transitions) {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  return Populations::from_vec(affine_fixed_point(full_rate_system(rates, transitions), ones, 1.0));
}

double pump_rate_from_amplitude(const DonorSpecies& species, double b_mw, double linewidth) {
  if (!(linewidth > 0.0)) throw DomainError("pump_rate_from_amplitude: linewidth must be positive");
  const double g = species.gamma_e * b_mw;
  return g * g * (2.0 / linewidth) / 2.0;
}

SaturationPower saturation_power(const DonorSpecies& species, double omega_s, double cavity_volume_cm3,
                                 double cavity_q, double linewidth, double pump_rate_target,
                                 double tau_b) {
  if (!(omega_s > 0.0 && cavity_volume_cm3 > 0.0 && cavity_q > 0.0 && linewidth > 0.0 &&
        pump_rate_target > 0.0 && tau_b > 0.0))
    throw DomainError("saturation_power: all inputs must be positive");
  const double vr = cavity_volume_cm3 * constants::cm3;
  const double ge = species.gamma_e;
  SaturationPower s;
  s.power = omega_s * vr * pump_rate_target * linewidth / (2.0 * constants::mu0 * cavity_q * ge * ge);
  // cavity relation Q_c = w_S b^2 V_r / (2 mu0 P) solved for b
  s.b_mw = std::sqrt(2.0 * constants::mu0 * cavity_q * s.power / (omega_s * vr));
  s.t2_star = 2.0 / linewidth;
  s.pump_rate = pump_rate_from_amplitude(species, s.b_mw, linewidth);
  const double g = ge * s.b_mw;
  s.saturates = g * g * s.t2_star * tau_b > 1.0;
  return s;
}

SaturationPower saturation_power(const DonorSpecies& species, const TransitionSet& transitions,
                                 double cavity_volume_cm3, double cavity_q, double linewidth,
                                 double pump_rate_target, double tau_b) {
  return saturation_power(species, transitions.omega_s, cavity_volume_cm3, cavity_q, linewidth,
                          pump_rate_target, tau_b);
}

}  // namespace nmrqc
