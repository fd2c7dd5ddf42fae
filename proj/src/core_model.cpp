#include "nmrqc/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

using constants::hbar;
using constants::k_b;

void DonorSpecies::validate() const {
  if (!(gamma_e > 0.0)) throw DomainError("species: gamma_e must be positive");
  if (!(hyperfine_a > 0.0)) throw DomainError("species: hyperfine constant must be positive");
  if (!std::isfinite(gamma_i)) throw DomainError("species: gamma_i must be finite");
}

DonorSpecies phosphorus31() {
  return DonorSpecies{176.08e9, 108e6, constants::two_pi * 116e6, "P31-in-Si28"};
}

DonorSpecies species_preset(std::string_view label) {
  if (label == "P31-in-Si28") return phosphorus31();
  throw DomainError("unknown species preset '" + std::string(label) + "'");
}

std::vector<std::string> species_labels() { return {"P31-in-Si28"}; }

void Environment::validate() const {
  if (!(b_field > 0.0)) throw DomainError("environment: b_field must be positive");
  if (!(temp_lattice > 0.0)) throw DomainError("environment: temp_lattice must be positive");
  if (!(temp_nuclear > 0.0)) throw DomainError("environment: temp_nuclear must be positive");
  if (!(rf_amp >= 0.0) || !(mw_amp >= 0.0))
    throw DomainError("environment: drive amplitudes must be non-negative");
}

double field_parameter(const DonorSpecies& species, double b_field) {
  if (!(b_field > 0.0)) throw DomainError("field_parameter: b_field must be positive");
  // hbar cancels between numerator and A = hbar * hyperfine_a
  return (species.gamma_e + species.gamma_i) * b_field / species.hyperfine_a;
}

double field_parameter(const DonorSpecies& species, const Environment& env) {
  return field_parameter(species, env.b_field);
}

double mixing_alpha(double x) {
  // 1/2 (1 - x/s) rewritten without cancellation for large x
  const double s = std::hypot(1.0, x);
  if (x >= 0.0) return 0.5 / (s * (s + x));
  return 0.5 * (1.0 - x / s);
}

double breit_rabi_energy(const DonorSpecies& species, double b_field, int f, int m_f) {
  if (!((f == 0 && m_f == 0) || (f == 1 && m_f >= -1 && m_f <= 1)))
    throw DomainError("breit_rabi_energy: invalid (F, m_F)");
  const double a = hbar * species.hyperfine_a;
  const double x = field_parameter(species, b_field);
  const double nuc = species.gamma_i * hbar * b_field * m_f;
  if (m_f == 0) {
    const double root = 0.5 * a * std::hypot(1.0, x);
    return -0.25 * a + (f == 1 ? root : -root);
  }
  // stretched states: sqrt(1 + 2 m X + X^2) = |1 + m X|, signed by sign(1 + m X)
  const double arg = 1.0 + m_f * x;
  const double sgn = arg >= 0.0 ? 1.0 : -1.0;
  return -0.25 * a - nuc + 0.5 * a * sgn * std::abs(arg);
}

std::array<HyperfineLevel, 4> breit_rabi_levels(const DonorSpecies& species,
                                                const Environment& env) {
  env.validate();
  const double b = env.b_field;
  const double alpha = mixing_alpha(field_parameter(species, b));
  std::array<HyperfineLevel, 4> out{{
      {0, 0, breit_rabi_energy(species, b, 0, 0), alpha},
      {1, -1, breit_rabi_energy(species, b, 1, -1), 0.0},
      {1, 0, breit_rabi_energy(species, b, 1, 0), alpha},
      {1, 1, breit_rabi_energy(species, b, 1, 1), 0.0},
  }};
  std::stable_sort(out.begin(), out.end(),
                   [](const HyperfineLevel& l, const HyperfineLevel& r) { return l.energy < r.energy; });
  return out;
}

double level_energy(const std::array<HyperfineLevel, 4>& levels, int f, int m_f) {
  for (const auto& l : levels)
    if (l.f == f && l.m_f == m_f) return l.energy;
  throw DomainError("level_energy: level not present");
}

TransitionSet transition_frequencies(const DonorSpecies& species, const Environment& env) {
  const auto lv = breit_rabi_levels(species, env);
  const double e00 = level_energy(lv, 0, 0);
  const double e1m = level_energy(lv, 1, -1);
  const double e10 = level_energy(lv, 1, 0);
  const double e11 = level_energy(lv, 1, 1);
  TransitionSet t;
  t.omega_a_plus = (e1m - e00) / hbar;
  t.omega_a_minus = (e11 - e10) / hbar;
  t.omega_b = (e11 - e00) / hbar;
  t.omega_c = (e10 - e1m) / hbar;
  t.omega_d = (e10 - e00) / hbar;
  t.omega_s = (e11 - e1m) / hbar;
  return t;
}

NuclearFrequencyExpansion nuclear_frequencies_large_x(const DonorSpecies& species,
                                                      const Environment& env) {
  env.validate();
  const double a = species.hyperfine_a;
  const double zi = species.gamma_i * env.b_field;
  const double tail = a * a / (4.0 * species.gamma_e * env.b_field);
  // the second-order shift raises the upper line and lowers the lower one
  return {zi + 0.5 * a + tail, -zi + 0.5 * a - tail};
}

double log_epsilon_pseudo_pure(long long l_qubits, double omega_a, double temp) {
  if (l_qubits < 1) throw DomainError("epsilon_pseudo_pure: L must be at least 1");
  if (!(temp > 0.0)) throw DomainError("epsilon_pseudo_pure: temperature must be positive");
  const double x = std::abs(hbar * omega_a / (2.0 * k_b * temp));
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  const double l = static_cast<double>(l_qubits);
  // 2 sinh(Lx) / (2 cosh x)^L = (1 - e^{-2Lx}) / (1 + e^{-2x})^L
  return std::log(-std::expm1(-2.0 * l * x)) - l * std::log1p(std::exp(-2.0 * x));
}

double epsilon_pseudo_pure(long long l_qubits, double omega_a, double temp) {
  return std::exp(log_epsilon_pseudo_pure(l_qubits, omega_a, temp));
}

int max_qubits_dynamic(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw DomainError("max_qubits_dynamic: threshold must lie in (0, 1)");
  int best = 0;
  for (int l = 1; l <= 1100; ++l)
    if (std::ldexp(static_cast<double>(l), -l) > threshold) best = l;
  return best;
}

GainFactor gain_factor(const DonorSpecies& species, const Environment& env) {
  env.validate();
  const double x = field_parameter(species, env);
  const double alpha = mixing_alpha(x);
  const double b = env.rf_amp;
  // the electron admixture of |0,0> carries the electron's much larger moment
  GainFactor out;
  out.ratio = std::sqrt(alpha) * species.gamma_e / species.gamma_i + std::sqrt(1.0 - alpha);
  out.eta = species.hyperfine_a / (2.0 * species.gamma_i * env.b_field);
  out.ratio_approx = 1.0 + out.eta;
  out.b_eff = out.ratio * b;
  out.b_eff_approx = out.ratio_approx * b;
  out.rabi = species.gamma_i * out.b_eff;
  return out;
}

MagnetizationElements magnetization_elements(const DonorSpecies& species,
                                             const Environment& env) {
  const double x = field_parameter(species, env);
  const double half = 0.5 * species.gamma_i * hbar;
  return {x / std::hypot(1.0, x) * half, -half};
}

double max_magnetization(const DonorSpecies& species, const Environment& env,
                         double volume_cm3, double n_atoms, long long l_qubits) {
  if (!(volume_cm3 > 0.0)) throw DomainError("max_magnetization: volume must be positive");
  if (n_atoms < 0.0) throw DomainError("max_magnetization: negative atom count");
  if (n_atoms == 0.0) return 0.0;
  const auto tr = transition_frequencies(species, env);
  const auto me = magnetization_elements(species, env);
  const double xx = hbar * tr.omega_a_plus / (2.0 * k_b * env.temp_nuclear);
  const double l = static_cast<double>(l_qubits);
  // filling probabilities p00^L and p1-1^L of the all-ground / all-excited registers
  const double log_p0 = -l * std::log1p(std::exp(-2.0 * xx));
  const double log_p1 = -2.0 * l * xx + log_p0;
  // p00^L mz_ground - p1-1^L |mz_excited| with the ground element carrying the X weight
  const double w = me.mz_ground / std::abs(me.mz_excited);
  const double diff = std::exp(log_p0) * (w - std::exp(log_p1 - log_p0));
  return std::abs(me.mz_excited) * n_atoms / volume_cm3 * diff;
}

}  // namespace nmrqc
