#include "nmrqc/scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "nmrqc/acceptance.hpp"
#include "nmrqc/automaton.hpp"
#include "nmrqc/constants.hpp"
#include "nmrqc/core_model.hpp"
#include "nmrqc/decoherence.hpp"
#include "nmrqc/dnp.hpp"
#include "nmrqc/entangled.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/nmr_readout.hpp"
#include "nmrqc/rng.hpp"

namespace nmrqc {

using namespace constants;
namespace fs = std::filesystem;

CsvWriter::CsvWriter(const fs::path& path, std::vector<std::string> header)
    : path_(path), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) buf_ += (i ? "," : "") + header[i];
  buf_ += '\n';
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_number(v)); }
CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

CsvWriter& CsvWriter::cell(const std::string& v) {
  if (in_row_ == columns_) throw ScenarioError("csv: too many cells in row of " + path_.string());
  if (v.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : v) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    buf_ += (in_row_ ? "," : "") + q + "\"";
  } else {
    buf_ += (in_row_ ? "," : "") + v;
  }
  ++in_row_;
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw ScenarioError("csv: incomplete row in " + path_.string());
  buf_ += '\n';
  in_row_ = 0;
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream f(path_, std::ios::binary);
  f << buf_;
  if (!f) throw ScenarioError("csv: cannot write " + path_.string());
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

std::uint64_t scenario_seed(std::uint64_t run_seed, const std::string& name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(run_seed ^ h);
}

namespace {

ParamSpec qty(std::string key, Dimension d, std::string def, std::string help) {
  return {std::move(key), ParamKind::quantity, d, std::move(def), std::move(help)};
}
ParamSpec real(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamKind::real, Dimension::none, std::move(def), std::move(help)};
}
ParamSpec integer(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamKind::integer, Dimension::none, std::move(def), std::move(help)};
}
ParamSpec text(std::string key, std::string def, std::string help) {
  return {std::move(key), ParamKind::text, Dimension::none, std::move(def), std::move(help)};
}

std::vector<double> grid(double lo, double hi, long long points, bool log_spaced) {
  if (points < 1) throw DomainError("grid: at least one point required");
  if (!(hi >= lo)) throw DomainError("grid: upper end below lower end");
  if (log_spaced && !(lo > 0.0)) throw DomainError("grid: logarithmic spacing needs a positive range");
  std::vector<double> out;
  for (long long i = 0; i < points; ++i) {
    const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
    out.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return out;
}

bool spacing_is_log(const std::string& s) {
  if (s == "log") return true;
  if (s == "linear") return false;
  throw DomainError("spacing must be 'log' or 'linear'");
}

fs::path out(const ScenarioContext& ctx, const char* name) { return ctx.out_dir / name; }

void breit_rabi_sweep(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  CsvWriter w(out(ctx, "breit_rabi.csv"),
              {"b_field_T", "e_00_J", "e_1m1_J", "e_10_J", "e_11_J", "omega_a_plus", "omega_a_minus", "omega_b",
               "omega_c", "omega_d", "omega_s"});
  for (double b : grid(p.number("b_min"), p.number("b_max"), p.integer("points"), spacing_is_log(p.text("spacing")))) {
    Environment env;
    env.b_field = b;
    const auto lv = breit_rabi_levels(sp, env);
    const auto tr = transition_frequencies(sp, env);
    w.cell(b).cell(level_energy(lv, 0, 0)).cell(level_energy(lv, 1, -1)).cell(level_energy(lv, 1, 0))
        .cell(level_energy(lv, 1, 1)).cell(tr.omega_a_plus).cell(tr.omega_a_minus).cell(tr.omega_b)
        .cell(tr.omega_c).cell(tr.omega_d).cell(tr.omega_s);
    w.end_row();
  }
}

RegisterGeometry geometry_from(const ParamSet& p) {
  RegisterGeometry g;
  g.pitch_x = p.number("pitch_x") / nm;
  g.pitch_y = p.number("pitch_y") / nm;
  g.plate_thickness = p.number("plate_thickness") / cm;
  g.qubits_per_molecule = p.integer("qubits_per_molecule");
  g.molecules_per_block = p.integer("molecules_per_block");
  return g;
}

void snr_ensemble_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  RegisterGeometry g = geometry_from(p);
  g.validate();
  const double q = p.number("quality_q");
  Environment env;
  env.b_field = p.number("b_field");
  env.temp_lattice = env.temp_nuclear = p.number("temp_noise");
  const double v = g.molecule_volume_cm3();
  CsvWriter w(out(ctx, "snr_ensemble.csv"), {"molecules", "snr_estimate", "snr_coil_path"});
  for (double n : grid(p.number("n_min"), p.number("n_max"), p.integer("points"), true)) {
    // the estimate scales with sqrt(N); evaluate it through a block count of one
    const double est = std::sqrt(q * n / v) * 1e-10;
    RegisterGeometry gn = g;
    gn.blocks_n = 1;
    gn.blocks_p = 1;
    gn.molecules_per_block = 1;
    const double coil = snr_ensemble_from_coil(sp, env, gn, q, p.number("bandwidth")) * std::sqrt(n);
    w.cell(n).cell(est).cell(coil);
    w.end_row();
  }
  const double n_min = snr_ensemble_min_molecules(g, q);
  const auto b = solve_blocks(n_min, g.molecules_per_block, g.pitch_x, g.pitch_y, g.qubits_per_molecule);
  CsvWriter bw(out(ctx, "blocks.csv"), {"min_molecules", "n_exact", "p_exact", "n", "p", "side_x_um", "side_y_um"});
  bw.cell(n_min).cell(b.n_exact).cell(b.p_exact).cell(b.n).cell(b.p).cell(b.side_x_um).cell(b.side_y_um);
  bw.end_row();
}

void snr_bulk_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  // the Johnson-noise resistance cancels against the coil's K A, so one ohm is used
  const auto coil = CoilCircuit::from_circuit(1.0, p.number("quality_q"), p.number("omega"),
                                              p.number("coil_volume") / cm3, p.number("turns"),
                                              p.number("bandwidth"));
  Environment env;
  env.temp_lattice = env.temp_nuclear = p.number("temp");
  const long long l = p.integer("qubits");
  CsvWriter w(out(ctx, "snr_bulk.csv"), {"molecules", "snr_component", "snr_closed_form", "snr_estimate"});
  for (double n : grid(p.number("n_min"), p.number("n_max"), p.integer("points"), true)) {
    w.cell(n).cell(snr_bulk(sp, env, coil, n, l)).cell(snr_bulk_closed_form(sp, env, coil, n, l))
        .cell(snr_bulk_estimate(sp, env, coil, n, l));
    w.end_row();
  }
  CsvWriter t(out(ctx, "threshold.csv"), {"epsilon", "min_molecules"});
  t.cell(epsilon_pseudo_pure(l, coil.resonance_omega, env.temp_nuclear)).cell(min_molecules_bulk(sp, env, coil, l));
  t.end_row();
}

void dnp_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  RelaxationRates rates;
  rates.tau_b = p.number("tau_b");
  rates.tau_c = p.number("tau_c");
  rates.tau_d = p.number("tau_d");
  rates.t_par_a = p.number("t_par_a");
  rates.w_pump = p.number("w_pump");
  rates.temp = p.number("temp");
  Environment env;
  env.b_field = p.number("b_field");
  env.temp_lattice = env.temp_nuclear = rates.temp;
  const auto tr = transition_frequencies(sp, env);
  const auto start = thermal_populations(sp, env, rates.temp);
  const std::string& model = p.text("model");
  DnpTrajectory traj;
  Populations fixed;
  if (model == "reduced") {
    traj = integrate_dnp(start, rates, p.number("duration"), p.number("tol"));
    fixed = dnp_steady_state(rates);
  } else if (model == "full") {
    traj = integrate_dnp_full(start, rates, tr, p.number("duration"), p.number("tol"));
    fixed = dnp_steady_state_full(rates, tr);
  } else {
    throw DomainError("model must be 'reduced' or 'full'");
  }
  CsvWriter w(out(ctx, "dnp_trajectory.csv"), {"t_s", "p11", "p10", "p1m1", "p00", "p_s", "p_i", "sum"});
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const auto& q = traj.p[i];
    w.cell(traj.t[i]).cell(q.p11).cell(q.p10).cell(q.p1m1).cell(q.p00).cell(q.p_s()).cell(q.p_i()).cell(q.sum());
    w.end_row();
  }
  CsvWriter s(out(ctx, "steady_state.csv"), {"p11", "p10", "p1m1", "p00", "p_s", "p_i"});
  s.cell(fixed.p11).cell(fixed.p10).cell(fixed.p1m1).cell(fixed.p00).cell(fixed.p_s()).cell(fixed.p_i());
  s.end_row();
}

void decoherence_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  const double a0 = p.number("a0");
  CsvWriter t(out(ctx, "thresholds.csv"), {"target_rate", "field_over_temp_exact", "field_over_temp_exponential"});
  for (double target : grid(p.number("target_min"), p.number("target_max"), p.integer("points"), true)) {
    const auto th = required_field_over_temp(sp, target, a0);
    t.cell(target).cell(th.exact).cell(th.approx);
    t.end_row();
  }
  Environment env;
  env.b_field = p.number("b_field");
  env.temp_lattice = p.number("temp_lattice");
  const auto ch = hyperfine_channel(sp, env, p.number("tau1"), a0);
  CsvWriter d(out(ctx, "decrement.csv"), {"t_s", "gamma", "gamma_quadratic", "gamma_linear"});
  for (double tt : grid(p.number("t_min"), p.number("t_max"), p.integer("points"), true)) {
    d.cell(tt).cell(decrement(ch, tt)).cell(decrement_quadratic(ch, tt)).cell(decrement_linear(ch, tt));
    d.end_row();
  }
}

void impurity_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  ImpuritySpec imp;
  imp.concentration = p.number("concentration");
  imp.gamma_imp = p.number("gamma_imp");
  imp.lattice_density = p.number("lattice_density");
  imp.temp_nuclear_imp = p.number("temp_nuclear");
  Environment env;
  env.b_field = p.number("b_field");
  const double target = p.number("target_rate");
  const double allowed = allowed_concentration(sp, imp, env, target);
  CsvWriter w(out(ctx, "impurity.csv"),
              {"allowed_concentration", "concentration", "violation_factor", "thermal_factor", "variance"});
  w.cell(allowed).cell(imp.concentration).cell(imp.concentration / allowed).cell(impurity_thermal_factor(imp, env))
      .cell(impurity_variance(sp, imp, env));
  w.end_row();
  const auto mc = impurity_moment_monte_carlo(imp, static_cast<std::uint64_t>(p.integer("draws")), ctx.seed, ctx.workers);
  CsvWriter m(out(ctx, "moment_check.csv"), {"monte_carlo", "std_error", "analytic", "ratio"});
  m.cell(mc.monte_carlo).cell(mc.std_error).cell(mc.analytic).cell(mc.ratio());
  m.end_row();
}

void write_density_csv(const fs::path& path, const MonteCarloDensity& mc, const TwoQubitDensity& an) {
  CsvWriter w(path, {"row", "col", "mc_re", "mc_im", "std_error", "analytic_re", "analytic_im"});
  for (long long i = 0; i < 4; ++i)
    for (long long j = 0; j < 4; ++j) {
      w.cell(i).cell(j).cell(mc.mean(i, j).real()).cell(mc.mean(i, j).imag()).cell(mc.std_error(i, j))
          .cell(an(i, j).real()).cell(an(i, j).imag());
      w.end_row();
    }
}

CorrelatedPhaseModel phase_model(const ParamSet& p) {
  return CorrelatedPhaseModel::constant(p.number("sigma1_sq"), p.number("sigma2_sq"), p.number("rho"),
                                        p.number("sigma_i_sq"));
}

void epr_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto model = phase_model(p);
  const int sign = p.integer("sign") >= 0 ? 1 : -1;
  const auto rho0 = sign > 0 ? epr_triplet() : epr_singlet();
  const auto mc = monte_carlo_average(rho0, model, 0.0, static_cast<std::uint64_t>(p.integer("samples")), ctx.seed,
                                      ctx.workers);
  write_density_csv(out(ctx, "epr_density.csv"), mc, averaged_epr(model, 0.0, sign));
}

void bell_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto model = phase_model(p);
  const int sign = p.integer("sign") >= 0 ? 1 : -1;
  const auto mc = monte_carlo_average(bell_state(sign), model, 0.0, static_cast<std::uint64_t>(p.integer("samples")),
                                      ctx.seed, ctx.workers);
  write_density_csv(out(ctx, "bell_density.csv"), mc, averaged_bell(model, 0.0, sign));
}

void chain_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto c = ChainCouplings::defaults();
  const std::string& init = p.text("chain");
  const ChainState chain =
      init == "ground" ? ChainState::ground(static_cast<std::size_t>(p.integer("length"))) : ChainState::parse(init);
  const auto enc = encode_logical(chain, static_cast<std::size_t>(p.integer("position")), static_cast<int>(p.integer("bit")), c);
  CsvWriter w(out(ctx, "chain_steps.csv"), {"step", "pulse", "frequency_rad_s", "state"});
  ChainState s = chain;
  w.cell(0LL).cell(std::string("start")).cell(0.0).cell(s.to_string());
  w.end_row();
  long long step = 0;
  for (const auto& pulse : enc.program) {
    s = apply_pulse(s, pulse, c);
    std::string label = serialize_program({pulse});
    label.pop_back();
    w.cell(++step).cell(label).cell(resonance_frequency(c, pulse.sublattice, pulse.twice_sum)).cell(s.to_string());
    w.end_row();
  }
  std::ofstream f(out(ctx, "program.txt"), std::ios::binary);
  f << serialize_program(enc.program);
  if (!f) throw ScenarioError("cannot write program.txt");
}

void discrete_signal_scenario(const ParamSet& p, const ScenarioContext& ctx) {
  const auto sp = species_preset(p.text("species"));
  RegisterGeometry g;
  g.pitch_x = p.number("pitch_x") / nm;
  g.pitch_y = p.number("pitch_y") / nm;
  g.blocks_n = p.integer("blocks_n");
  g.blocks_p = p.integer("blocks_p");
  g.molecules_per_block = p.integer("molecules_per_block");
  g.qubits_per_molecule = p.integer("qubits_per_molecule");
  const double x_cm = g.blocks_n * g.qubits_per_molecule * g.pitch_x * 1e-7;
  const double d_cm = g.blocks_p * g.molecules_per_block * g.pitch_y * 1e-7;
  CoilCircuit coil;
  coil.quality_q = p.number("quality_q");
  coil.turns_k = p.number("turns");
  Environment env;
  env.b_field = p.number("b_field");
  coil.resonance_omega = transition_frequencies(sp, env).omega_a_plus;
  CsvWriter w(out(ctx, "a1_signal.csv"),
              {"delta_over_x", "delta_cm", "discrete_V", "bulk_V", "continuum_V", "discrete_over_continuum"});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double frac : grid(p.number("ratio_min"), p.number("ratio_max"), p.integer("points"), true)) {
    g.plate_thickness = frac * x_cm;
    const double vd = discrete_signal(g, sp, coil, x_cm, d_cm);
    double vc = nan;
    try {
      vc = continuum_signal(g, sp, coil, x_cm, d_cm);
    } catch (const DomainError&) {
    }
    w.cell(frac).cell(g.plate_thickness).cell(vd).cell(bulk_signal(g, sp, coil, x_cm)).cell(vc).cell(vd / vc);
    w.end_row();
  }
}

void paper_numbers_scenario(const ParamSet&, const ScenarioContext& ctx) {
  AcceptanceOptions o;
  o.seed = ctx.seed;
  o.workers = ctx.workers;
  CsvWriter w(out(ctx, "paper_numbers.csv"), {"criterion", "title", "pass", "details"});
  for (const auto& r : run_acceptance(o, false)) {
    std::string d;
    for (std::size_t i = 0; i < r.details.size(); ++i) d += (i ? "; " : "") + r.details[i];
    w.cell(static_cast<long long>(r.id)).cell(r.title).cell(std::string(r.pass ? "pass" : "fail")).cell(d);
    w.end_row();
  }
}

const ParamSpec species_param = text("species", "P31-in-Si28", "donor species preset");

std::vector<ScenarioInfo> build_registry() {
  using D = Dimension;
  std::vector<ScenarioInfo> r;
  r.push_back({"breit-rabi-sweep", "level energies and transition frequencies over a field range",
               {species_param, qty("b_min", D::field, "0.01 T", "lowest field"),
                qty("b_max", D::field, "10 T", "highest field"), integer("points", "200", "number of fields"),
                text("spacing", "log", "log or linear")},
               {"breit_rabi.csv"},
               breit_rabi_sweep});
  r.push_back({"snr-ensemble", "planar register S/N versus molecule count and block layout",
               {species_param, real("quality_q", "1e6", "coil quality factor"),
                qty("pitch_x", D::length, "20 nm", "qubit pitch along a molecule"),
                qty("pitch_y", D::length, "50 nm", "molecule pitch"),
                qty("plate_thickness", D::length, "0.1 cm", "plate thickness"),
                integer("qubits_per_molecule", "1000", "L"), integer("molecules_per_block", "100", "N0"),
                qty("b_field", D::field, "1 T", "static field"),
                qty("temp_noise", D::temperature, "8.7 mK", "noise temperature of the coil path"),
                qty("bandwidth", D::frequency, "1 Hz", "detection bandwidth"),
                real("n_min", "1e3", "smallest molecule count"), real("n_max", "1e7", "largest molecule count"),
                integer("points", "41", "number of counts")},
               {"snr_ensemble.csv", "blocks.csv"},
               snr_ensemble_scenario});
  r.push_back({"snr-bulk", "liquid-state S/N versus molecule count",
               {species_param, real("quality_q", "1e3", "coil quality factor"),
                qty("omega", D::angular_rate, "7.8543e8 rad/s", "resonance frequency"),
                qty("temp", D::temperature, "300 K", "sample and coil temperature"),
                qty("coil_volume", D::volume, "1 cm3", "solenoid volume"), real("turns", "10", "coil turns"),
                qty("bandwidth", D::frequency, "1 Hz", "detection bandwidth"), integer("qubits", "2", "L"),
                real("n_min", "1e12", "smallest molecule count"), real("n_max", "1e20", "largest molecule count"),
                integer("points", "33", "number of counts")},
               {"snr_bulk.csv", "threshold.csv"},
               snr_bulk_scenario});
  r.push_back({"dnp-trajectory", "population dynamics under forbidden-transition pumping",
               {species_param, text("model", "reduced", "reduced or full rate model"),
                qty("tau_b", D::time, "1 ms", "electron relaxation time"),
                qty("tau_c", D::time, "1 ms", "second electron relaxation time (full model)"),
                qty("tau_d", D::time, "1e5 s", "flip-flop relaxation time (full model)"),
                qty("t_par_a", D::time, "10 s", "nuclear relaxation time"),
                qty("w_pump", D::angular_rate, "100 1/s", "pump rate"),
                qty("temp", D::temperature, "0.1 K", "lattice temperature"),
                qty("b_field", D::field, "1 T", "static field"), qty("duration", D::time, "20 s", "integration time"),
                real("tol", "1e-8", "local error tolerance")},
               {"dnp_trajectory.csv", "steady_state.csv"},
               dnp_scenario});
  r.push_back({"decoherence-thresholds", "field-over-temperature thresholds and decrement curves",
               {species_param, qty("a0", D::angular_rate, "725e6 rad/s", "hyperfine modulation amplitude"),
                qty("target_min", D::angular_rate, "1e-3 1/s", "smallest target rate"),
                qty("target_max", D::angular_rate, "1e3 1/s", "largest target rate"),
                qty("b_field", D::field, "2 T", "static field for the decrement curve"),
                qty("temp_lattice", D::temperature, "0.06 K", "lattice temperature for the decrement curve"),
                qty("tau1", D::time, "1e4 s", "electron correlation time"),
                qty("t_min", D::time, "1e-3 s", "first time"), qty("t_max", D::time, "1e6 s", "last time"),
                integer("points", "61", "points per table")},
               {"thresholds.csv", "decrement.csv"},
               decoherence_scenario});
  r.push_back({"impurity-bound", "allowed isotopic impurity concentration and moment check",
               {species_param, real("concentration", "0.047", "impurity fraction"),
                qty("gamma_imp", D::angular_rate, "-53e6 rad/s", "impurity gyromagnetic ratio per tesla"),
                real("lattice_density", "5e22", "lattice sites per cm^3"),
                qty("temp_nuclear", D::temperature, "0.8 mK", "impurity nuclear temperature"),
                qty("b_field", D::field, "2 T", "static field"),
                qty("target_rate", D::angular_rate, "1 1/s", "allowed dephasing rate"),
                integer("draws", "1000000", "Monte Carlo impurity positions")},
               {"impurity.csv", "moment_check.csv"},
               impurity_scenario});
  const std::vector<ParamSpec> phase = {real("sigma1_sq", "0.5", "phase variance of qubit 1"),
                                        real("sigma2_sq", "0.5", "phase variance of qubit 2"),
                                        real("rho", "0.0", "phase correlation"),
                                        real("sigma_i_sq", "0.0", "variance of the coupling phase"),
                                        integer("samples", "1000000", "Monte Carlo samples"),
                                        integer("sign", "1", "+1 or -1 superposition")};
  r.push_back({"epr-mc", "Monte Carlo dephasing of the zero-projection triplet", phase, {"epr_density.csv"},
               epr_scenario});
  r.push_back({"bell-mc", "Monte Carlo dephasing of a Bell state", phase, {"bell_density.csv"}, bell_scenario});
  r.push_back({"chain-demo", "pulse program writing a logical bit into a spin chain",
               {text("chain", "ground", "'ground' or a chain string such as ^v^v"),
                integer("length", "8", "sites of the ground chain"), integer("position", "0", "first window site"),
                integer("bit", "0", "logical value")},
               {"chain_steps.csv", "program.txt"},
               chain_scenario});
  r.push_back({"discrete-signal", "lattice-summed coil signal against the continuum estimate",
               {species_param, qty("pitch_x", D::length, "20 nm", "qubit pitch"),
                qty("pitch_y", D::length, "50 nm", "molecule pitch"), integer("blocks_n", "8", "n"),
                integer("blocks_p", "8", "p"), integer("molecules_per_block", "8", "N0"),
                integer("qubits_per_molecule", "16", "L"), real("quality_q", "1e3", "coil quality factor"),
                real("turns", "10", "coil turns"), qty("b_field", D::field, "1 T", "static field"),
                real("ratio_min", "0.01", "smallest thickness over coil length"),
                real("ratio_max", "0.09", "largest thickness over coil length"),
                integer("points", "9", "number of thicknesses")},
               {"a1_signal.csv"},
               discrete_signal_scenario});
  r.push_back({"paper-numbers", "table of headline values with pass or fail", {}, {"paper_numbers.csv"},
               paper_numbers_scenario});
  return r;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_registry() {
  static const std::vector<ScenarioInfo> registry = build_registry();
  return registry;
}

const ScenarioInfo& find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

RunSummary run_config(const Config& config, const RunOptions& opts) {
  if (config.sections.empty()) throw ConfigError(config.source + ": no scenario sections");
  struct Job {
    const ScenarioInfo* info;
    ParamSet params;
  };
  std::vector<Job> jobs;
  for (const auto& sec : config.sections) {
    const ScenarioInfo* info = nullptr;
    for (const auto& s : scenario_registry())
      if (s.name == sec.name) info = &s;
    if (!info)
      throw ConfigError(config.source + ":" + std::to_string(sec.line) + ": unknown scenario [" + sec.name + "]");
    jobs.push_back({info, resolve_params(sec, info->params, config.source)});
  }

  RunSummary summary;
  summary.seed = opts.seed.value_or(config.seed.value_or(default_seed));
  fs::create_directories(opts.out_dir);
  summary.timings.resize(jobs.size());
  std::vector<std::string> errors(jobs.size());

  auto run_one = [&](std::size_t i) {
    const Job& j = jobs[i];
    ScenarioContext ctx;
    ctx.seed = scenario_seed(summary.seed, j.info->name);
    ctx.workers = opts.workers;
    ctx.out_dir = opts.out_dir / j.info->name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fs::create_directories(ctx.out_dir);
      j.info->run(j.params, ctx);
      for (const auto& f : j.info->outputs)
        if (!fs::exists(ctx.out_dir / f)) throw ScenarioError("declared output " + f + " was not written");
    } catch (const std::exception& e) {
      errors[i] = "scenario '" + j.info->name + "': " + e.what();
    }
    summary.timings[i] = {j.info->name,
                          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(jobs.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < jobs.size();) run_one(i);
      });
    for (auto& t : pool) t.join();
  }

  nlohmann::ordered_json manifest;
  manifest["tool"] = "nmrqc";
  manifest["version"] = tool_version;
  manifest["seed"] = summary.seed;
  manifest["seed_derivation"] = "splitmix64(seed ^ fnv1a64(scenario name))";
  manifest["scenarios"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    nlohmann::ordered_json s;
    s["name"] = jobs[i].info->name;
    s["seed"] = scenario_seed(summary.seed, jobs[i].info->name);
    nlohmann::ordered_json in = nlohmann::ordered_json::object();
    for (const auto& [k, v] : jobs[i].params.canonical()) in[k] = v;
    s["inputs"] = in;
    s["outputs"] = jobs[i].info->outputs;
    s["status"] = errors[i].empty() ? "ok" : "failed";
    manifest["scenarios"].push_back(s);
    summary.scenarios.push_back(jobs[i].info->name);
  }
  {
    std::ofstream f(opts.out_dir / "manifest.json", std::ios::binary);
    f << manifest.dump(2) << '\n';
  }
  nlohmann::ordered_json timing = nlohmann::ordered_json::array();
  for (const auto& t : summary.timings) timing.push_back({{"name", t.name}, {"wall_seconds", t.seconds}});
  {
    std::ofstream f(opts.out_dir / "timing.json", std::ios::binary);
    f << timing.dump(2) << '\n';
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ScenarioError(e);
  return summary;
}

}  // namespace nmrqc
