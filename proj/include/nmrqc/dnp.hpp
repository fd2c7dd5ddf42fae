#pragma once

#include <array>
#include <vector>

#include "nmrqc/affine_ode.hpp"
#include "nmrqc/core_model.hpp"

namespace nmrqc {

struct Populations {
  double p11 = 0.0, p10 = 0.0, p1m1 = 0.0, p00 = 0.0;

  double sum() const { return p11 + p10 + p1m1 + p00; }
  double p_s() const { return p11 + p10 - p1m1 - p00; }
  double p_i() const { return p11 + p00 - p10 - p1m1; }
  Eigen::Vector4d vec() const { return {p11, p10, p1m1, p00}; }
  static Populations from_vec(const Eigen::Vector4d& v) { return {v(0), v(1), v(2), v(3)}; }
};

struct RelaxationRates {
  double tau_b = 1e-3;   // s, electron |1,1> <-> |0,0>
  double tau_c = 1e-3;   // s, electron |1,0> <-> |1,-1>
  double tau_d = 1e5;    // s, flip-flop |1,0> <-> |0,0>
  double tau_s = 1e5;    // s, forbidden |1,1> <-> |1,-1> (not a thermal channel in the rate model)
  double t_par_a = 10.0; // s, nuclear
  double w_pump = 0.0;   // 1/s, induced forbidden-transition rate
  double temp = 0.1;     // K

  void validate() const;
};

struct PolarizationPair {
  double p_s = 0.0, p_i = 0.0;
};

struct BoltzmannFactors {
  double r_b = 1.0, r_c = 1.0, r_d = 1.0, r_a_plus = 1.0, r_a_minus = 1.0;
};
BoltzmannFactors boltzmann_factors(const TransitionSet& tr, double temp);

// thermal occupation of the four levels at temperature temp
Populations thermal_populations(const DonorSpecies& species, const Environment& env, double temp);

// four-level rate model with thermal up/down ratios
Populations full_rate_derivative(const Populations& pops, const RelaxationRates& rates,
                                 const TransitionSet& transitions);
// low-temperature reduced model with a single electron time tau_b
Populations reduced_population_derivative(const Populations& pops, const RelaxationRates& rates);
// electron/nuclear polarization equations
PolarizationPair reduced_rate_derivative(const PolarizationPair& pol, const RelaxationRates& rates);

// linear operators in (p11, p10, p1m1, p00) order
AffineSystem full_rate_system(const RelaxationRates& rates, const TransitionSet& transitions);
AffineSystem reduced_rate_system(const RelaxationRates& rates);
AffineSystem polarization_system(const RelaxationRates& rates);

struct DnpTrajectory {
  std::vector<double> t;
  std::vector<Populations> p;
};

DnpTrajectory integrate_dnp(const Populations& initial, const RelaxationRates& rates,
                            double duration, double tol);
DnpTrajectory integrate_dnp_full(const Populations& initial, const RelaxationRates& rates,
                                 const TransitionSet& transitions, double duration, double tol);

Populations dnp_steady_state(const RelaxationRates& rates);
Populations dnp_steady_state_full(const RelaxationRates& rates, const TransitionSet& transitions);

struct SaturationPower {
  double power = 0.0;        // W, lower bound on the absorbed microwave power
  double b_mw = 0.0;         // T, amplitude sustained by that power in the cavity
  double t2_star = 0.0;      // s, 2 / linewidth
  double pump_rate = 0.0;    // 1/s, (gamma_e b_mw)^2 t2*/2 at that amplitude
  bool saturates = false;    // (gamma_e b_mw)^2 t2* tau_b > 1
};

// P > w_S V_r W dw / (2 mu0 Q_c gamma_e^2); cavity volume in cm^3, linewidth in rad/s
SaturationPower saturation_power(const DonorSpecies& species, double omega_s, double cavity_volume_cm3,
                                 double cavity_q, double linewidth, double pump_rate_target,
                                 double tau_b);
SaturationPower saturation_power(const DonorSpecies& species, const TransitionSet& transitions,
                                 double cavity_volume_cm3, double cavity_q, double linewidth,
                                 double pump_rate_target, double tau_b);

// forbidden-transition pump rate (gamma_e b_mw)^2 t2*/2 with t2* = 2 / linewidth
double pump_rate_from_amplitude(const DonorSpecies& species, double b_mw, double linewidth);

}  // namespace nmrqc
