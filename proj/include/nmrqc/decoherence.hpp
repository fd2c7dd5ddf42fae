#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "nmrqc/core_model.hpp"

namespace nmrqc {

enum class NoiseKind { hyperfine_electron, impurity_dipole, custom };

// Gaussian frequency noise with exponential correlation <dw(t) dw(0)> = variance exp(-t/corr_time)
struct NoiseChannel {
  double variance = 0.0;   // (rad/s)^2
  double corr_time = 1.0;  // s
  NoiseKind kind = NoiseKind::custom;
  void validate() const;
};

struct BlochVector {
  double px = 0.0, py = 0.0, pz = 0.0;
  double length() const;
  void validate() const;
};

// modulation amplitude of the hyperfine field seen by the 31P nucleus
inline constexpr double p31_hyperfine_modulation = 725e6;  // rad/s

double decrement(const NoiseChannel& channel, double t);
double decrement_quadratic(const NoiseChannel& channel, double t);  // variance t^2 / 2
double decrement_linear(const NoiseChannel& channel, double t);     // variance corr_time t
double decoherence_time(const NoiseChannel& channel);               // Gamma(T_d) = 1/2

enum class DephasingRegime { quadratic, intermediate, linear };
// quadratic when t^2/2 approximates Gamma to 1%, linear when corr_time t does
DephasingRegime classify_regime(const NoiseChannel& channel, double t);

Eigen::Matrix2cd dephase_density(const BlochVector& rho0, double gamma_t);
Eigen::Vector2d dephased_eigenvalues(const BlochVector& rho0, double gamma_t);

// electron-flip modulation of the hyperfine field, a0 in rad/s
double hyperfine_variance(const DonorSpecies& species, const Environment& env,
                          double a0 = p31_hyperfine_modulation);
double hyperfine_variance_approx(const DonorSpecies& species, const Environment& env,
                                 double a0 = p31_hyperfine_modulation);
NoiseChannel hyperfine_channel(const DonorSpecies& species, const Environment& env, double tau1,
                               double a0 = p31_hyperfine_modulation);

struct FieldOverTemp {
  double exact = 0.0;   // T/K from the tanh form
  double approx = 0.0;  // T/K from the exponential form
};
// smallest B/T at which the dephasing rate sqrt(<dw^2>) falls below target_rate
FieldOverTemp required_field_over_temp(const DonorSpecies& species, double target_rate,
                                       double a0 = p31_hyperfine_modulation);

struct ImpuritySpec {
  double concentration = 0.047;     // fraction
  double gamma_imp = -53e6;         // rad/(s T)
  double lattice_density = 5e22;    // 1/cm^3
  double temp_nuclear_imp = 1e-3;   // K
  double corr_time = 1e4;           // s
  double min_distance = 0.0;        // cm; 0 means a^3 = 1 / lattice_density
  void validate() const;
  double min_distance_m() const;
};

// 1 - tanh^2(gamma_imp hbar B / 2 k T_I)
double impurity_thermal_factor(const ImpuritySpec& imp, const Environment& env);
double impurity_variance(const DonorSpecies& species, const ImpuritySpec& imp, const Environment& env);
double allowed_concentration(const DonorSpecies& species, const ImpuritySpec& imp,
                             const Environment& env, double target_rate);

struct DipoleMomentCheck {
  double monte_carlo = 0.0;  // sampled integral of (1 - 3 cos^2)^2 / r^6 outside a, m^-3
  double std_error = 0.0;
  double analytic = 0.0;     // 16 pi / (15 a^3)
  double ratio() const { return monte_carlo / analytic; }
};
// uniform impurity positions in a < r < 20 a; draws are split into fixed batches
DipoleMomentCheck impurity_moment_monte_carlo(const ImpuritySpec& imp, std::uint64_t draws,
                                              std::uint64_t seed, unsigned workers = 0);

// omega tau2 > 1 and corr_time / tau2 > 10
bool adiabaticity_check(const NoiseChannel& channel, double omega_carrier, double tau2);

}  // namespace nmrqc
