#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nmrqc {

// basis order |uu>, |ud>, |du>, |dd>
using TwoQubitDensity = Eigen::Matrix4cd;

// Phase variances are <phi^2> of the accumulated random phases; a single qubit
// with variance s^2 has decrement s^2 / 2.
struct CorrelatedPhaseModel {
  std::function<double(double)> sigma1_sq;
  std::function<double(double)> sigma2_sq;
  std::function<double(double)> rho12;
  std::function<double(double)> sigma_i_sq;

  static CorrelatedPhaseModel constant(double s1_sq, double s2_sq, double rho, double si_sq = 0.0);
  void validate(double t) const;
};

Eigen::Matrix4cd phase_unitary(double phi1, double phi2, double phi_i);
// U^dagger rho U
TwoQubitDensity conjugate_by_phases(const TwoQubitDensity& rho, double phi1, double phi2, double phi_i);

TwoQubitDensity epr_triplet();                      // (|ud> + |du>)/sqrt 2
TwoQubitDensity epr_singlet();                      // (|ud> - |du>)/sqrt 2
TwoQubitDensity bell_state(int sign);               // (|uu> +- |dd>)/sqrt 2
TwoQubitDensity partially_entangled(double alpha);  // sqrt(1-a)|ud> + sqrt(a)|du>

// decrements of the |ud>,|du> and |uu>,|dd> coherences
double epr_decrement(const CorrelatedPhaseModel& model, double t);
double bell_decrement(const CorrelatedPhaseModel& model, double t);
double single_qubit_decrement(double sigma_sq);

TwoQubitDensity averaged_epr(const CorrelatedPhaseModel& model, double t, int sign = +1);
TwoQubitDensity averaged_bell(const CorrelatedPhaseModel& model, double t, int sign);

struct PhaseSamples {
  std::vector<double> phi1, phi2;
};
PhaseSamples sample_correlated_phases(const CorrelatedPhaseModel& model, double t, std::uint64_t count,
                                      std::uint64_t seed);

struct MonteCarloDensity {
  TwoQubitDensity mean;
  Eigen::Matrix4d std_error;  // elementwise, of the complex mean's modulus deviation
};
MonteCarloDensity monte_carlo_average(const TwoQubitDensity& rho0, const CorrelatedPhaseModel& model,
                                      double t, std::uint64_t count, std::uint64_t seed,
                                      unsigned workers = 0);

double purity(const TwoQubitDensity& rho);

}  // namespace nmrqc
