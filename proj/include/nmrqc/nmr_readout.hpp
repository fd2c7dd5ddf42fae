#pragma once

#include "nmrqc/core_model.hpp"

namespace nmrqc {

// Inductive pickup circuit. Areas and volumes are given in cm units as in the
// usual NMR bookkeeping; formulas convert to SI internally.
struct CoilCircuit {
  double quality_q = 1.0;
  double turns_k = 1.0;
  double turn_area = 1.0;        // cm^2, A
  double solenoid_volume = 1.0;  // cm^3, V_s
  double resistance = 1.0;       // ohm
  double bandwidth = 1.0;        // Hz
  double resonance_omega = 1.0;  // rad/s

  // K A fixed by the circuit: KA = sqrt(R V_s / (mu0 Q omega))
  static CoilCircuit from_circuit(double resistance, double quality_q, double resonance_omega,
                                  double solenoid_volume_cm3, double turns_k,
                                  double bandwidth = 1.0);
  double ka_m2() const;
  double ka_from_circuit_m2() const;
  bool consistent(double rel_tol = 1e-6) const;
  void validate() const;
};

struct RegisterGeometry {
  double pitch_x = 20.0;           // nm, l_x
  double pitch_y = 50.0;           // nm, l_y
  double depth = 20.0;             // nm, d
  double plate_thickness = 0.1;    // cm, delta
  long long qubits_per_molecule = 1000;  // L
  long long molecules_per_block = 100;   // N0
  long long blocks_n = 16;
  long long blocks_p = 63;

  double total_molecules() const;
  double molecule_volume_cm3() const;  // delta l_x l_y L
  double volume_cm3() const;           // V_s with filling factor one
  void validate() const;
};

struct RelaxationPair {
  double t_perp = 1.0;  // s
  double t_par = 1.0;   // s
  void validate() const;
  bool suspicious() const { return t_perp > t_par; }
};

struct BlochVector3 {
  double mx = 0.0, my = 0.0, mz = 0.0;
};

// rotating-frame right-hand side at resonance offset `detuning`, drive b_eff
BlochVector3 bloch_derivative(const DonorSpecies& species, const RelaxationPair& relax,
                              double m_zm, double drive_beff, double detuning,
                              const BlochVector3& m);
BlochVector3 bloch_steady_state(const DonorSpecies& species, const Environment& env,
                                const RelaxationPair& relax, double m_zm, double drive_beff,
                                double detuning);
double optimum_drive(const DonorSpecies& species, const RelaxationPair& relax);

struct SnrParts {
  double signal = 0.0;  // V
  double noise = 0.0;   // V
  double ratio() const { return noise > 0.0 ? signal / noise : 0.0; }
};

// component path: signal from the coil model, Johnson noise at the lattice temperature
SnrParts snr_bulk_parts(const DonorSpecies& species, const Environment& env,
                        const CoilCircuit& coil, double n_molecules, long long l_qubits);
double snr_bulk(const DonorSpecies& species, const Environment& env, const CoilCircuit& coil,
                double n_molecules, long long l_qubits);
// closed form (1/8) sqrt(mu0 hbar Q hbar w / (dnu V_s k T)) gamma_i N eps
double snr_bulk_closed_form(const DonorSpecies& species, const Environment& env,
                            const CoilCircuit& coil, double n_molecules, long long l_qubits);
// rounded estimate 0.2 sqrt((Q/V_s)(hbar w/kT)) N eps 1e-9 with V_s in cm^3
double snr_bulk_estimate(const DonorSpecies& species, const Environment& env,
                         const CoilCircuit& coil, double n_molecules, long long l_qubits);
// N at which the component path reaches S/N = 1
double min_molecules_bulk(const DonorSpecies& species, const Environment& env,
                          const CoilCircuit& coil, long long l_qubits);

// planar ensemble estimate sqrt(Q N / (delta l_x l_y L)) 1e-10, lengths in cm, eps = 1
double snr_ensemble(const DonorSpecies& species, const Environment& env,
                    const RegisterGeometry& geom, double quality_q);
double snr_ensemble_min_molecules(const RegisterGeometry& geom, double quality_q);
// the same quantity through the full coil expression with eps = 1 and noise at
// env.temp_lattice, bandwidth in Hz
double snr_ensemble_from_coil(const DonorSpecies& species, const Environment& env,
                              const RegisterGeometry& geom, double quality_q,
                              double bandwidth = 1.0);
// noise temperature at which the coil expression reproduces the folded 1e-10 constant
double folded_constant_temperature(const DonorSpecies& species, double omega_a,
                                   double bandwidth = 1.0);

struct BlockSolution {
  double n_exact = 0.0;
  double p_exact = 0.0;
  long long n = 0;
  long long p = 0;
  double side_x_um = 0.0;
  double side_y_um = 0.0;
};
// square plate: l_x L n = l_y N0 p with N = n p N0
BlockSolution solve_blocks(double n_molecules, long long molecules_per_block, double pitch_x_nm,
                           double pitch_y_nm, long long qubits_per_molecule);

struct QuadratureSpec {
  double rel_tol = 1e-7;
  unsigned max_depth = 18;
};

// Lattice sum of dipole fields from resonant spins, flux through the plate
// cross-section D x delta, integrated along the coil. Coil turn area is D delta,
// so coil.turn_area / solenoid_volume are not used here. Solenoid length and
// plate width in cm.
double discrete_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                       const CoilCircuit& coil, double solenoid_length, double plate_width,
                       const QuadratureSpec& resolution = {});
// the uniform-magnetization long-solenoid value for the same N, X, coil
double bulk_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                   const CoilCircuit& coil, double solenoid_length);
// (X / pi D) log(X / (delta sqrt e)); DomainError when X <= delta sqrt e
double continuum_factor(double solenoid_length, double plate_width, double plate_thickness);
double continuum_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                        const CoilCircuit& coil, double solenoid_length, double plate_width);

// flux of the unit dipole kernel (2u^2 - v^2 - w^2)/r^5 through the rectangle
// v in [y1, y2], w in [z1, z2] at axial offset u
double dipole_rect_flux(double u, double y1, double y2, double z1, double z2);

}  // namespace nmrqc
