#include "nmrqc/nmr_readout.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"

namespace nmrqc {

using namespace constants;

CoilCircuit CoilCircuit::from_circuit(double resistance, double quality_q, double resonance_omega,
                                      double solenoid_volume_cm3, double turns_k,
                                      double bandwidth) {
  CoilCircuit c;
  c.quality_q = quality_q;
  c.turns_k = turns_k;
  c.solenoid_volume = solenoid_volume_cm3;
  c.resistance = resistance;
  c.bandwidth = bandwidth;
  c.resonance_omega = resonance_omega;
  c.turn_area = c.ka_from_circuit_m2() / turns_k / cm2;
  c.validate();
  return c;
}

double CoilCircuit::ka_m2() const { return turns_k * turn_area * cm2; }

double CoilCircuit::ka_from_circuit_m2() const {
  return std::sqrt(resistance * solenoid_volume * cm3 / (mu0 * quality_q * resonance_omega));
}

bool CoilCircuit::consistent(double rel_tol) const {
  const double a = ka_m2(), b = ka_from_circuit_m2();
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

void CoilCircuit::validate() const {
  if (!(quality_q > 0.0)) throw DomainError("coil: Q must be positive");
  if (!(turns_k >= 1.0)) throw DomainError("coil: K must be at least 1");
  if (!(turn_area > 0.0) || !(solenoid_volume > 0.0)) throw DomainError("coil: area and volume must be positive");
  if (!(resistance > 0.0) || !(bandwidth > 0.0) || !(resonance_omega > 0.0))
    throw DomainError("coil: R, bandwidth and resonance must be positive");
}

double RegisterGeometry::total_molecules() const {
  return static_cast<double>(blocks_n) * static_cast<double>(blocks_p) *
         static_cast<double>(molecules_per_block);
}

double RegisterGeometry::molecule_volume_cm3() const {
  return plate_thickness * (pitch_x * 1e-7) * (pitch_y * 1e-7) * static_cast<double>(qubits_per_molecule);
}

double RegisterGeometry::volume_cm3() const { return molecule_volume_cm3() * total_molecules(); }

void RegisterGeometry::validate() const {
  if (!(pitch_x > 0.0 && pitch_y > 0.0 && depth > 0.0 && plate_thickness > 0.0))
    throw DomainError("geometry: dimensions must be positive");
  if (qubits_per_molecule < 1 || molecules_per_block < 0 || blocks_n < 0 || blocks_p < 0)
    throw DomainError("geometry: invalid counts");
}

void RelaxationPair::validate() const {
  if (!(t_perp > 0.0) || !(t_par > 0.0)) throw DomainError("relaxation times must be positive");
}

// Rotating frame, drive along x': the absorption component lands in +mx.
static Eigen::Matrix3d bloch_matrix(double w1, double det, double t2, double t1) {
  Eigen::Matrix3d m;
  m << -1.0 / t2, det, w1,
       -det, -1.0 / t2, 0.0,
       -w1, 0.0, -1.0 / t1;
  return m;
}

BlochVector3 bloch_derivative(const DonorSpecies& species, const RelaxationPair& relax,
                              double m_zm, double drive_beff, double detuning,
                              const BlochVector3& m) {
  const double w1 = std::abs(species.gamma_i) * drive_beff;
  const Eigen::Vector3d v(m.mx, m.my, m.mz);
  Eigen::Vector3d d = bloch_matrix(w1, detuning, relax.t_perp, relax.t_par) * v;
  d.z() += m_zm / relax.t_par;
  return {d.x(), d.y(), d.z()};
}

BlochVector3 bloch_steady_state(const DonorSpecies& species, const Environment& env,
                                const RelaxationPair& relax, double m_zm, double drive_beff,
                                double detuning) {
  env.validate();
  relax.validate();
  const double w1 = std::abs(species.gamma_i) * drive_beff;
  const Eigen::Matrix3d a = bloch_matrix(w1, detuning, relax.t_perp, relax.t_par);
  const Eigen::Vector3d rhs(0.0, 0.0, -m_zm / relax.t_par);
  const Eigen::Vector3d s = a.partialPivLu().solve(rhs);
  return {s.x(), s.y(), s.z()};
}

double optimum_drive(const DonorSpecies& species, const RelaxationPair& relax) {
  relax.validate();
  return 1.0 / (std::abs(species.gamma_i) * std::sqrt(relax.t_perp * relax.t_par));
}

SnrParts snr_bulk_parts(const DonorSpecies& species, const Environment& env,
                        const CoilCircuit& coil, double n_molecules, long long l_qubits) {
  env.validate();
  coil.validate();
  const double w = coil.resonance_omega;
  const double eps = epsilon_pseudo_pure(l_qubits, w, env.temp_nuclear);
  const double vs = coil.solenoid_volume * cm3;
  SnrParts p;
  p.signal = 0.25 * mu0 * coil.quality_q * coil.ka_m2() * (n_molecules / vs) *
             std::abs(species.gamma_i) * hbar * w * eps;
  p.noise = std::sqrt(4.0 * k_b * env.temp_lattice * coil.resistance * coil.bandwidth);
  return p;
}

double snr_bulk(const DonorSpecies& species, const Environment& env, const CoilCircuit& coil,
                double n_molecules, long long l_qubits) {
  return snr_bulk_parts(species, env, coil, n_molecules, l_qubits).ratio();
}

double snr_bulk_closed_form(const DonorSpecies& species, const Environment& env,
                            const CoilCircuit& coil, double n_molecules, long long l_qubits) {
  env.validate();
  const double w = coil.resonance_omega;
  const double eps = epsilon_pseudo_pure(l_qubits, w, env.temp_nuclear);
  const double vs = coil.solenoid_volume * cm3;
  return 0.125 *
         std::sqrt(mu0 * hbar * coil.quality_q * hbar * w /
                   (coil.bandwidth * vs * k_b * env.temp_lattice)) *
         std::abs(species.gamma_i) * n_molecules * eps;
}

double snr_bulk_estimate(const DonorSpecies&, const Environment& env, const CoilCircuit& coil,
                         double n_molecules, long long l_qubits) {
  env.validate();
  const double w = coil.resonance_omega;
  const double eps = epsilon_pseudo_pure(l_qubits, w, env.temp_nuclear);
  return 0.2 * std::sqrt(coil.quality_q / coil.solenoid_volume * hbar * w / (k_b * env.temp_lattice)) *
         n_molecules * eps * 1e-9;
}

double min_molecules_bulk(const DonorSpecies& species, const Environment& env,
                          const CoilCircuit& coil, long long l_qubits) {
  const double per = snr_bulk(species, env, coil, 1.0, l_qubits);
  if (!(per > 0.0)) throw DomainError("min_molecules_bulk: vanishing signal");
  return 1.0 / per;
}

double snr_ensemble(const DonorSpecies&, const Environment& env, const RegisterGeometry& geom,
                    double quality_q) {
  env.validate();
  geom.validate();
  return std::sqrt(quality_q * geom.total_molecules() / geom.molecule_volume_cm3()) * 1e-10;
}

double snr_ensemble_min_molecules(const RegisterGeometry& geom, double quality_q) {
  geom.validate();
  return geom.molecule_volume_cm3() / (quality_q * 1e-20);
}

double snr_ensemble_from_coil(const DonorSpecies& species, const Environment& env,
                              const RegisterGeometry& geom, double quality_q, double bandwidth) {
  env.validate();
  geom.validate();
  const double w = transition_frequencies(species, env).omega_a_plus;
  const double vs = geom.volume_cm3() * cm3;
  return 0.125 * std::sqrt(mu0 * hbar * quality_q * hbar * w / (bandwidth * vs * k_b * env.temp_lattice)) *
         std::abs(species.gamma_i) * geom.total_molecules();
}

double folded_constant_temperature(const DonorSpecies& species, double omega_a, double bandwidth) {
  // (1/8) gamma hbar sqrt(mu0 w / (dnu k T cm3)) = 1e-10
  const double gh = std::abs(species.gamma_i) * hbar;
  return mu0 * omega_a * gh * gh / (64.0 * 1e-20 * bandwidth * k_b * cm3);
}

BlockSolution solve_blocks(double n_molecules, long long molecules_per_block, double pitch_x_nm,
                           double pitch_y_nm, long long qubits_per_molecule) {
  if (!(n_molecules > 0.0) || molecules_per_block < 1 || !(pitch_x_nm > 0.0) || !(pitch_y_nm > 0.0) ||
      qubits_per_molecule < 1)
    throw DomainError("solve_blocks: invalid inputs");
  BlockSolution s;
  const double lx_l = pitch_x_nm * static_cast<double>(qubits_per_molecule);
  s.n_exact = std::sqrt(n_molecules * pitch_y_nm / lx_l);
  s.p_exact = n_molecules / (static_cast<double>(molecules_per_block) * s.n_exact);
  s.n = std::llround(s.n_exact);
  s.p = std::llround(s.p_exact);
  s.side_x_um = lx_l * s.n_exact * 1e-3;
  s.side_y_um = pitch_y_nm * static_cast<double>(molecules_per_block) * s.p_exact * 1e-3;
  return s;
}

static double corner_flux(double u, double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double u2 = u * u, a2 = a * a, b2 = b * b;
  const double r = std::sqrt(a2 + b2 + u2);
  return a * b * (a2 + b2 + 2.0 * u2) / (r * (u2 + a2) * (u2 + b2));
}

double dipole_rect_flux(double u, double y1, double y2, double z1, double z2) {
  return corner_flux(u, y2, z2) - corner_flux(u, y1, z2) - corner_flux(u, y2, z1) + corner_flux(u, y1, z1);
}

namespace {

struct Lattice {
  std::vector<double> xs;  // m
  std::vector<double> ys;  // m
  double half_d = 0.0, half_delta = 0.0;

  double row_flux(double u) const {
    double s = 0.0;
    for (double y : ys) s += dipole_rect_flux(u, -half_d - y, half_d - y, -half_delta, half_delta);
    return s;
  }
  double flux(double x) const {
    double s = 0.0;
    for (double xi : xs) s += row_flux(x - xi);
    return s;
  }
};

std::vector<double> centred(long long count, double pitch) {
  std::vector<double> v(static_cast<size_t>(count));
  const double c = 0.5 * static_cast<double>(count - 1);
  for (long long i = 0; i < count; ++i) v[static_cast<size_t>(i)] = (static_cast<double>(i) - c) * pitch;
  return v;
}

double moment(const DonorSpecies& species) { return std::abs(species.gamma_i) * hbar / 4.0; }

}  // namespace

double discrete_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                       const CoilCircuit& coil, double solenoid_length, double plate_width,
                       const QuadratureSpec& resolution) {
  geom.validate();
  if (!(solenoid_length > 0.0) || !(plate_width > 0.0))
    throw DomainError("discrete_signal: coil dimensions must be positive");
  const long long rows = geom.blocks_p * geom.molecules_per_block;
  if (geom.blocks_n == 0 || rows == 0) return 0.0;

  const double x_len = solenoid_length * cm;
  Lattice lat;
  lat.xs = centred(geom.blocks_n, geom.pitch_x * nm * static_cast<double>(geom.qubits_per_molecule));
  lat.ys = centred(rows, geom.pitch_y * nm);
  lat.half_d = 0.5 * plate_width * cm;
  lat.half_delta = 0.5 * geom.plate_thickness * cm;

  // split the coil at every spin line so each panel holds at most one field peak at its ends
  std::vector<double> cuts{-0.5 * x_len};
  for (double x : lat.xs)
    if (x > -0.5 * x_len && x < 0.5 * x_len) cuts.push_back(x);
  cuts.push_back(0.5 * x_len);

  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0, total_err = 0.0;
  auto f = [&lat](double x) { return std::abs(lat.flux(x)); };
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    total += gauss_kronrod<double, 31>::integrate(f, cuts[i], cuts[i + 1], resolution.max_depth,
                                                  resolution.rel_tol, &err);
    total_err += err;
  }
  if (total_err > 0.01 * std::abs(total))
    throw QuadratureError("discrete_signal: quadrature error estimate exceeds 1% of the result");

  const double pref = mu0 * moment(species) / (4.0 * pi);
  return coil.quality_q * coil.resonance_omega * coil.turns_k / x_len * pref * total;
}

double bulk_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                   const CoilCircuit& coil, double solenoid_length) {
  geom.validate();
  const double n = static_cast<double>(geom.blocks_n) *
                   static_cast<double>(geom.blocks_p * geom.molecules_per_block);
  return 0.25 * mu0 * coil.quality_q * coil.turns_k * coil.resonance_omega * n /
         (solenoid_length * cm) * std::abs(species.gamma_i) * hbar;
}

double continuum_factor(double solenoid_length, double plate_width, double plate_thickness) {
  const double arg = solenoid_length / (plate_thickness * std::sqrt(std::exp(1.0)));
  if (!(arg > 1.0)) throw DomainError("continuum_factor: X must exceed delta sqrt(e)");
  return solenoid_length / (pi * plate_width) * std::log(arg);
}

double continuum_signal(const RegisterGeometry& geom, const DonorSpecies& species,
                        const CoilCircuit& coil, double solenoid_length, double plate_width) {
  if (!(solenoid_length > 10.0 * geom.plate_thickness))
    throw DomainError("continuum_signal: requires X > 10 delta");
  return bulk_signal(geom, species, coil, solenoid_length) *
         continuum_factor(solenoid_length, plate_width, geom.plate_thickness);
}

}  // namespace nmrqc
