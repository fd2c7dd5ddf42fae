#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace nmrqc {

// Donor electron/nucleus pair. All rates in rad/s, gyromagnetic ratios in rad/(s T).
struct DonorSpecies {
  double gamma_e = 0.0;
  double gamma_i = 0.0;      // signed
  double hyperfine_a = 0.0;  // A / hbar
  std::string label;

  void validate() const;
};

// phosphorus-31 donor in spin-free silicon-28
DonorSpecies phosphorus31();
// lookup by label; throws DomainError for unknown names
DonorSpecies species_preset(std::string_view label);
std::vector<std::string> species_labels();

struct Environment {
  double b_field = 1.0;       // T
  double temp_lattice = 1.0;  // K
  double temp_nuclear = 1.0;  // K, nuclear spin temperature T_I
  double rf_amp = 0.0;        // T, circular RF amplitude b
  double mw_amp = 0.0;        // T, microwave amplitude

  void validate() const;
};

struct HyperfineLevel {
  int f = 0;
  int m_f = 0;
  double energy = 0.0;  // J
  double mixing_alpha = 0.0;
};

struct TransitionSet {
  double omega_a_plus = 0.0;
  double omega_a_minus = 0.0;
  double omega_b = 0.0;
  double omega_c = 0.0;
  double omega_d = 0.0;
  double omega_s = 0.0;
};

// X = (gamma_e + gamma_i) hbar B / A
double field_parameter(const DonorSpecies& species, double b_field);
double field_parameter(const DonorSpecies& species, const Environment& env);

// singlet admixture of the |1,0>/|0,0> pair, 1/2 (1 - X / sqrt(1 + X^2))
double mixing_alpha(double x);

// exact Breit-Rabi energy of level (F, m_F), in J
double breit_rabi_energy(const DonorSpecies& species, double b_field, int f, int m_f);

// the four levels sorted by ascending energy
std::array<HyperfineLevel, 4> breit_rabi_levels(const DonorSpecies& species,
                                                const Environment& env);
double level_energy(const std::array<HyperfineLevel, 4>& levels, int f, int m_f);

TransitionSet transition_frequencies(const DonorSpecies& species, const Environment& env);

// large-X expansions of the two nuclear frequencies, comparison only
struct NuclearFrequencyExpansion {
  double omega_a_plus = 0.0;
  double omega_a_minus = 0.0;
};
NuclearFrequencyExpansion nuclear_frequencies_large_x(const DonorSpecies& species,
                                                      const Environment& env);

// probability of the pseudo-pure state for L qubits at splitting omega_a and temperature
double epsilon_pseudo_pure(long long l_qubits, double omega_a, double temp);
double log_epsilon_pseudo_pure(long long l_qubits, double omega_a, double temp);

// largest L with L 2^-L > threshold; 0 when no L >= 1 qualifies
int max_qubits_dynamic(double threshold);

struct GainFactor {
  double eta = 0.0;            // A / (2 gamma_i B)
  double b_eff = 0.0;          // exact, T
  double b_eff_approx = 0.0;   // (1 + eta) b
  double rabi = 0.0;           // gamma_i b_eff, rad/s
  double ratio = 0.0;          // b_eff / b
  double ratio_approx = 0.0;   // 1 + eta
};
GainFactor gain_factor(const DonorSpecies& species, const Environment& env);

struct MagnetizationElements {
  double mz_ground = 0.0;   // J/T per atom
  double mz_excited = 0.0;  // J/T per atom
};
MagnetizationElements magnetization_elements(const DonorSpecies& species,
                                             const Environment& env);

// maximal longitudinal magnetization of an L-qubit register, J/T per cm^3.
// Populations use the nuclear spin temperature env.temp_nuclear.
double max_magnetization(const DonorSpecies& species, const Environment& env,
                         double volume_cm3, double n_atoms, long long l_qubits);

}  // namespace nmrqc
