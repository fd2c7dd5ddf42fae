#include "nmrqc/acceptance.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmrqc/automaton.hpp"
#include "nmrqc/constants.hpp"
#include "nmrqc/core_model.hpp"
#include "nmrqc/decoherence.hpp"
#include "nmrqc/dnp.hpp"
#include "nmrqc/entangled.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/nmr_readout.hpp"
#include "nmrqc/rng.hpp"
#include "nmrqc/scenarios.hpp"

namespace nmrqc {

using namespace constants;

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string line(const std::string& name, double v) { return name + " = " + num(v); }
std::string flag(const std::string& name, bool v) { return name + " = " + (v ? "yes" : "no"); }

bool within_factor(double v, double target, double factor) {
  return v > 0.0 && v <= target * factor && v >= target / factor;
}

// exact diagonalization of the coupled electron-nuclear spin Hamiltonian
// A S.I + gamma_e hbar B S_z - gamma_i hbar B I_z in the |m_S m_I> product basis
Eigen::Vector4d hamiltonian_levels(const DonorSpecies& s, double b) {
  const double a = hbar * s.hyperfine_a, ge = s.gamma_e * hbar * b, gi = s.gamma_i * hbar * b;
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = 0.25 * a + 0.5 * ge - 0.5 * gi;   // up, up
  h(1, 1) = -0.25 * a + 0.5 * ge + 0.5 * gi;  // up, down
  h(2, 2) = -0.25 * a - 0.5 * ge - 0.5 * gi;  // down, up
  h(3, 3) = 0.25 * a - 0.5 * ge + 0.5 * gi;   // down, down
  h(1, 2) = h(2, 1) = 0.5 * a;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

CriterionResult c1_transitions() {
  CriterionResult r{1, "transition frequencies at 1 T", false, {}, 0.0};
  const auto t0 = clock_type::now();
  Environment env;
  env.b_field = 1.0;
  const auto tr = transition_frequencies(phosphorus31(), env);
  r.seconds = since(t0);
  const double fp = tr.omega_a_plus / two_pi / 1e6, fm = tr.omega_a_minus / two_pi / 1e6;
  r.details = {line("f_A+ [MHz]", fp), line("f_A- [MHz]", fm), "target = 75 MHz, 41 MHz within 1%"};
  r.pass = std::abs(fp / 75.0 - 1.0) <= 0.01 && std::abs(fm / 41.0 - 1.0) <= 0.01 && r.seconds < 1e-3;
  return r;
}

CriterionResult c2_breit_rabi(const AcceptanceOptions& o) {
  CriterionResult r{2, "Breit-Rabi levels vs 4x4 diagonalization", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto sp = phosphorus31();
  const CounterRng rng{o.seed};
  double worst = 0.0, worst_b = 0.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double b = std::pow(10.0, -3.0 + 4.0 * rng.uniform(2, i));
    Environment env;
    env.b_field = b;
    const auto lv = breit_rabi_levels(sp, env);
    const Eigen::Vector4d ref = hamiltonian_levels(sp, b);
    double scale = 0.0, err = 0.0;
    for (int k = 0; k < 4; ++k) {
      scale = std::max(scale, std::abs(ref(k)));
      err = std::max(err, std::abs(lv[static_cast<std::size_t>(k)].energy - ref(k)));
    }
    if (err / scale > worst) {
      worst = err / scale;
      worst_b = b;
    }
  }
  r.seconds = since(t0);
  r.details = {line("max relative error", worst), line("at B [T]", worst_b), "target < 1e-10 over 1000 fields"};
  r.pass = worst < 1e-10 && r.seconds < 1.0;
  return r;
}

CriterionResult c3_gain() {
  CriterionResult r{3, "gain factor b_eff/b", false, {}, 0.0};
  const auto t0 = clock_type::now();
  Environment env;
  env.rf_amp = 1e-4;
  env.b_field = 1.0;
  const auto g1 = gain_factor(phosphorus31(), env);
  env.b_field = 0.01;
  const auto g2 = gain_factor(phosphorus31(), env);
  r.seconds = since(t0);
  r.details = {line("1 + eta at 1 T", g1.ratio_approx), line("1 + eta at 0.01 T", g2.ratio_approx),
               line("exact ratio at 1 T", g1.ratio), line("exact ratio at 0.01 T", g2.ratio),
               "target = 4.4 and 338 within 2%"};
  r.pass = std::abs(g1.ratio_approx / 4.4 - 1.0) <= 0.02 && std::abs(g2.ratio_approx / 338.0 - 1.0) <= 0.02 &&
           r.seconds < 1e-3;
  return r;
}

CriterionResult c4_bulk() {
  CriterionResult r{4, "liquid-state S/N crossover", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const double temp = 300.0;
  const double omega = 2e-5 * k_b * temp / hbar;
  const auto coil = CoilCircuit::from_circuit(1.0, 1e3, omega, 1.0, 10.0, 1.0);
  Environment env;
  env.temp_lattice = env.temp_nuclear = temp;
  const double eps = epsilon_pseudo_pure(2, omega, temp);
  const double n = min_molecules_bulk(phosphorus31(), env, coil, 2);
  const double n_est = 1.0 / snr_bulk_estimate(phosphorus31(), env, coil, 1.0, 2);
  r.seconds = since(t0);
  r.details = {line("epsilon(L=2)", eps), line("N at S/N = 1", n), line("N from rounded estimate", n_est),
               "target = 1e16 within a factor 3"};
  r.pass = within_factor(n, 1e16, 3.0);
  return r;
}

CriterionResult c5_ensemble() {
  CriterionResult r{5, "ensemble S/N and block layout", false, {}, 0.0};
  const auto t0 = clock_type::now();
  RegisterGeometry g;
  const double n = snr_ensemble_min_molecules(g, 1e6);
  const auto blocks = solve_blocks(n, g.molecules_per_block, g.pitch_x, g.pitch_y, g.qubits_per_molecule);
  r.seconds = since(t0);
  r.details = {line("molecule volume [cm^3]", g.molecule_volume_cm3()), line("minimum N", n),
               line("blocks n", static_cast<double>(blocks.n)), line("blocks p", static_cast<double>(blocks.p)),
               "target = N 1e5 within a factor 3, n 16 +- 1, p 63 +- 1"};
  r.pass = within_factor(n, 1e5, 3.0) && std::abs(blocks.n - 16) <= 1 && std::abs(blocks.p - 63) <= 1;
  return r;
}

CriterionResult c6_dnp() {
  CriterionResult r{6, "DNP saturation from thermal start", false, {}, 0.0};
  const auto t0 = clock_type::now();
  RelaxationRates rates;
  rates.tau_b = 1e-3;
  rates.t_par_a = 10.0;
  rates.w_pump = 100.0;
  rates.temp = 0.1;
  Environment env;
  env.b_field = 1.0;
  env.temp_lattice = env.temp_nuclear = rates.temp;
  const auto start = thermal_populations(phosphorus31(), env, rates.temp);
  const auto traj = integrate_dnp(start, rates, 20.0, 1e-8);
  const auto fixed = dnp_steady_state(rates);
  r.seconds = since(t0);
  double drift = 0.0;
  for (const auto& p : traj.p) drift = std::max(drift, std::abs(p.sum() - 1.0));
  const auto& end = traj.p.back();
  const double gap = (end.vec() - fixed.vec()).cwiseAbs().maxCoeff();
  r.details = {line("W T_A", rates.w_pump * rates.t_par_a), line("initial P_I", start.p_i()),
               line("terminal P_I", end.p_i()), line("max |sum - 1|", drift), line("max |p - fixed point|", gap),
               line("steps", static_cast<double>(traj.t.size() - 1)),
               "target = P_I >= 0.99, sum drift <= 1e-10, fixed point within 1e-6, under 5 s"};
  r.pass = end.p_i() >= 0.99 && drift <= 1e-10 && gap <= 1e-6 && r.seconds < 5.0;
  return r;
}

CriterionResult c7_power() {
  CriterionResult r{7, "microwave saturation power", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto s = saturation_power(phosphorus31(), 100e9, 1.0, 1000.0, 1e8, 1e3, 1e-3);
  r.seconds = since(t0);
  r.details = {line("P [W]", s.power), line("b_mw [T]", s.b_mw), flag("saturates", s.saturates),
               "target = 1e-3 W within a factor 3"};
  r.pass = within_factor(s.power, 1e-3, 3.0);
  return r;
}

CriterionResult c8_threshold() {
  CriterionResult r{8, "hyperfine dephasing threshold", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto sp = phosphorus31();
  const auto th = required_field_over_temp(sp, 1.0);
  Environment env;
  env.b_field = 2.0;
  env.temp_lattice = 0.06;
  const double rate = std::sqrt(hyperfine_variance(sp, env));
  r.seconds = since(t0);
  r.details = {line("B/T threshold exact [T/K]", th.exact), line("B/T threshold exponential [T/K]", th.approx),
               line("rate at 2 T, 0.06 K [1/s]", rate), "target = threshold in [27, 34] T/K and rate <= 1/s"};
  r.pass = th.exact >= 27.0 && th.exact <= 34.0 && rate <= 1.0;
  return r;
}

CriterionResult c9_impurity(const AcceptanceOptions& o) {
  CriterionResult r{9, "isotopic impurity bound", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto sp = phosphorus31();
  ImpuritySpec imp;
  imp.temp_nuclear_imp = 0.8e-3;
  Environment env;
  env.b_field = 2.0;
  const double allowed = allowed_concentration(sp, imp, env, 1.0);
  const auto mc = impurity_moment_monte_carlo(imp, 1'000'000, o.seed, o.workers);
  r.seconds = since(t0);
  const double violation = imp.concentration / allowed;
  r.details = {line("allowed concentration [%]", 100.0 * allowed), line("thermal factor", impurity_thermal_factor(imp, env)),
               line("natural abundance / allowed", violation), line("moment Monte Carlo / analytic", mc.ratio()),
               line("Monte Carlo standard error / analytic", mc.std_error / mc.analytic),
               "target = 4.5e-2 % within a factor 2, moment ratio within a factor 2, violation > 50"};
  r.pass = within_factor(allowed, 4.5e-4, 2.0) && within_factor(mc.ratio(), 1.0, 2.0) && violation > 50.0 &&
           r.seconds < 30.0;
  return r;
}

// direct double integral of the correlation function over the square [0, t]^2
double decrement_quadrature(const NoiseChannel& ch, double t) {
  using boost::math::quadrature::gauss_kronrod;
  if (t == 0.0) return 0.0;
  auto inner = [&](double t1) {
    auto k = [&](double t2) { return ch.variance * std::exp(-(t1 - t2) / ch.corr_time); };
    return gauss_kronrod<double, 31>::integrate(k, 0.0, t1, 10, 1e-12);
  };
  return gauss_kronrod<double, 31>::integrate(inner, 0.0, t, 10, 1e-12);
}

CriterionResult c10_decrement() {
  CriterionResult r{10, "decrement closed form vs quadrature", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const NoiseChannel ch{4.0, 2.5, NoiseKind::custom};
  double worst = 0.0;
  for (int i = 1; i <= 200; ++i) {
    const double t = 10.0 * ch.corr_time * i / 200.0;
    const double ref = decrement_quadrature(ch, t);
    worst = std::max(worst, std::abs(decrement(ch, t) - ref) / ref);
  }
  const double ts = ch.corr_time / 100.0;
  const double quad_err = std::abs(decrement_quadratic(ch, ts) / decrement(ch, ts) - 1.0);
  r.seconds = since(t0);
  r.details = {line("max relative error on [0, 10 tau]", worst), line("quadratic form error at tau/100", quad_err),
               "target = < 1e-8 and < 1%"};
  r.pass = worst < 1e-8 && quad_err < 0.01;
  return r;
}

CriterionResult c11_entangled(const AcceptanceOptions& o) {
  CriterionResult r{11, "entangled-state decrements", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const double s2 = 0.7;
  const double g1 = single_qubit_decrement(s2);
  const auto full = CorrelatedPhaseModel::constant(s2, s2, 1.0);
  const auto none = CorrelatedPhaseModel::constant(s2, s2, 0.0);
  const double epr_full = epr_decrement(full, 0.0);
  const double bell_ratio = bell_decrement(full, 0.0) / g1;
  const double epr_ratio = epr_decrement(none, 0.0) / g1;

  const auto model = CorrelatedPhaseModel::constant(0.5, 0.8, 0.4, 0.3);
  const std::uint64_t n = 1'000'000;
  const auto epr_mc = monte_carlo_average(epr_triplet(), model, 0.0, n, o.seed, o.workers);
  const auto bell_mc = monte_carlo_average(bell_state(+1), model, 0.0, n, o.seed + 1, o.workers);
  const auto epr_an = averaged_epr(model, 0.0);
  const auto bell_an = averaged_bell(model, 0.0, +1);
  const double z_epr = std::abs(epr_mc.mean(1, 2) - epr_an(1, 2)) / epr_mc.std_error(1, 2);
  const double z_bell = std::abs(bell_mc.mean(0, 3) - bell_an(0, 3)) / bell_mc.std_error(0, 3);
  r.seconds = since(t0);
  r.details = {line("EPR decrement at rho = 1", epr_full), line("Bell / single at rho = 1", bell_ratio),
               line("EPR / single at rho = 0", epr_ratio), line("EPR coherence deviation [std errors]", z_epr),
               line("Bell coherence deviation [std errors]", z_bell),
               "target = 0, 4, 2 exactly and deviations within 3 standard errors"};
  r.pass = epr_full == 0.0 && bell_ratio == 4.0 && epr_ratio == 2.0 && z_epr <= 3.0 && z_bell <= 3.0 &&
           r.seconds < 20.0;
  return r;
}

// flip iff the site frequency lies within the linewidth of the pulse frequency
ChainState reference_pulse(const ChainState& chain, const PulseSpec& p, const ChainCouplings& c) {
  ChainState out = chain;
  const double wp = resonance_frequency(c, p.sublattice, p.twice_sum);
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const Site& s = chain.sites[i];
    if (s.marker == Marker::dopant_port) continue;
    const double ws = resonance_frequency(c, s.sublattice, twice_neighbor_sum(chain, i));
    if (std::abs(ws - wp) < c.linewidth) out.sites[i].spin = s.spin == Spin::ground ? Spin::excited : Spin::ground;
  }
  return out;
}

CriterionResult c12_automaton() {
  CriterionResult r{12, "cellular automaton pulses", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto c = ChainCouplings::defaults();
  const auto ground = ChainState::ground(8);
  const auto enc = apply_program(ground, {pi_pulse(Sublattice::A, -1), pi_pulse(Sublattice::B, 0)}, c);
  std::array<Spin, 4> window{};
  for (std::size_t k = 0; k < 4; ++k) window[k] = enc.sites[k].spin;
  bool rest_ground = true;
  for (std::size_t k = 4; k < 8; ++k) rest_ground = rest_ground && enc.sites[k] == ground.sites[k];
  const bool zero_ok = window == logical_pattern(0) && rest_ground;

  std::size_t mismatches = 0, checks = 0;
  for (unsigned mask = 0; mask < 256; ++mask) {
    ChainState s = ground;
    for (std::size_t i = 0; i < 8; ++i)
      if (mask >> i & 1u) s.sites[i].spin = Spin::excited;
    for (Sublattice sub : {Sublattice::A, Sublattice::B})
      for (int t = -2; t <= 2; ++t) {
        const auto p = pi_pulse(sub, t);
        mismatches += !(apply_pulse(s, p, c) == reference_pulse(s, p, c));
        ++checks;
      }
  }
  const int distance = check_code_distance(logical_pattern(0), logical_pattern(1));
  r.seconds = since(t0);
  r.details = {"two-pulse result = " + enc.to_string(), flag("window equals logical 0", zero_ok),
               line("selectivity mismatches", static_cast<double>(mismatches)),
               line("state-pulse pairs checked", static_cast<double>(checks)), line("code distance", distance),
               "target = exact window, no mismatches in 1 s, distance 4"};
  r.pass = zero_ok && mismatches == 0 && distance == 4 && r.seconds < 1.0;
  return r;
}

CriterionResult c13_appendix() {
  CriterionResult r{13, "discrete vs continuum coil signal", false, {}, 0.0};
  const auto t0 = clock_type::now();
  const auto sp = phosphorus31();
  RegisterGeometry g;
  g.blocks_n = 8;
  g.blocks_p = 8;
  g.molecules_per_block = 8;
  g.qubits_per_molecule = 16;
  const double x_cm = g.blocks_n * g.qubits_per_molecule * g.pitch_x * 1e-7;
  const double d_cm = g.blocks_p * g.molecules_per_block * g.pitch_y * 1e-7;
  CoilCircuit coil;
  coil.quality_q = 1e3;
  coil.turns_k = 10.0;
  Environment env;
  coil.resonance_omega = transition_frequencies(sp, env).omega_a_plus;
  bool lattice_ok = true;
  for (double frac : {1.0 / 100.0, 1.0 / 30.0, 1.0 / 12.0}) {
    g.plate_thickness = x_cm * frac;
    const double vd = discrete_signal(g, sp, coil, x_cm, d_cm);
    const double vc = continuum_signal(g, sp, coil, x_cm, d_cm);
    const double ratio = vd / vc;
    lattice_ok = lattice_ok && std::abs(ratio - 1.0) <= 0.1;
    r.details.push_back(line("discrete / continuum at delta = X * " + num(frac), ratio));
  }
  // plate-scale geometry: X = 0.032 cm, D = 0.0315 cm, delta = 0.1 cm
  bool factor_ok = false;
  try {
    const double f = continuum_factor(0.032, 0.0315, 0.1);
    r.details.push_back(line("edge factor", f));
    factor_ok = f >= 0.5 && f <= 20.0;
  } catch (const DomainError& e) {
    r.details.push_back(std::string("edge factor = undefined (") + e.what() + ")");
  }
  r.details.push_back(line("edge factor with log(delta sqrt(e) / X)",
                           0.032 / (pi * 0.0315) * std::log(0.1 * std::sqrt(std::exp(1.0)) / 0.032)));
  r.seconds = since(t0);
  r.details.push_back("target = ratios within 10% and edge factor in [0.5, 20], under 60 s");
  r.pass = lattice_ok && factor_ok && r.seconds < 60.0;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& o) {
  try {
    switch (id) {
      case 1: return c1_transitions();
      case 2: return c2_breit_rabi(o);
      case 3: return c3_gain();
      case 4: return c4_bulk();
      case 5: return c5_ensemble();
      case 6: return c6_dnp();
      case 7: return c7_power();
      case 8: return c8_threshold();
      case 9: return c9_impurity(o);
      case 10: return c10_decrement();
      case 11: return c11_entangled(o);
      case 12: return c12_automaton();
      case 13: return c13_appendix();
      default: break;
    }
  } catch (const std::exception& e) {
    return {id, "criterion " + std::to_string(id), false, {std::string("error = ") + e.what()}, 0.0};
  }
  throw DomainError("run_criterion: criteria 1 to 13 are individually runnable");
}

CriterionResult final_criterion(const std::vector<CriterionResult>& earlier, const AcceptanceOptions& o) {
  CriterionResult r{14, "verify and seeded reproducibility", false, {}, 0.0};
  const auto t0 = clock_type::now();
  int failed = 0;
  for (const auto& e : earlier) failed += !e.pass;

  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / ("nmrqc-repro-" + std::to_string(::getpid()));
  bool identical = false;
  std::size_t files = 0;
  try {
    fs::remove_all(base);
    const auto cfg = parse_config(
        "[epr-mc]\nsamples = 20000\nrho = 0.3\n[impurity-bound]\ndraws = 20000\n", "<reproducibility>");
    for (const char* run : {"a", "b"}) {
      RunOptions ro;
      ro.out_dir = base / run;
      ro.seed = o.seed;
      ro.workers = o.workers;
      ro.jobs = run[0] == 'a' ? 1 : 2;
      run_config(cfg, ro);
    }
    identical = true;
    for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
      if (!entry.is_regular_file() || entry.path().filename() == "timing.json") continue;
      const auto rel = fs::relative(entry.path(), base / "a");
      identical = identical && fs::exists(base / "b" / rel) && read_file(entry.path()) == read_file(base / "b" / rel);
      ++files;
    }
    identical = identical && files > 0;
  } catch (const std::exception& e) {
    r.details.push_back(std::string("error = ") + e.what());
  }
  std::error_code ec;
  fs::remove_all(base, ec);
  r.seconds = since(t0);
  r.details.push_back(line("failing criteria among 1-13", failed));
  r.details.push_back(line("files compared", static_cast<double>(files)));
  r.details.push_back(flag("byte-identical reruns", identical));
  r.pass = failed == 0 && earlier.size() == 13 && identical;
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, bool include_final) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 13; ++id) out.push_back(run_criterion(id, o));
  if (include_final) out.push_back(final_criterion(out, o));
  return out;
}

std::string format_result(const CriterionResult& r, bool with_time) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << ' ' << (r.id < 10 ? " " : "") << r.id << ' ' << r.title;
  if (with_time) {
    char buf[32];
    std::snprintf(buf, sizeof buf, " (%.3f s)", r.seconds);
    s << buf;
  }
  s << ':';
  for (std::size_t i = 0; i < r.details.size(); ++i) s << (i ? "; " : " ") << r.details[i];
  return s.str();
}

}  // namespace nmrqc
