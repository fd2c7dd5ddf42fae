#include "nmrqc/decoherence.hpp"

#include <cmath>
#include <complex>

#include <boost/math/tools/roots.hpp>

#include "nmrqc/constants.hpp"
#include "nmrqc/errors.hpp"
#include "nmrqc/parallel.hpp"
#include "nmrqc/rng.hpp"

namespace nmrqc {

using namespace constants;

void NoiseChannel::validate() const {
  if (!(variance >= 0.0)) throw DomainError("noise channel: variance must be non-negative");
  if (!(corr_time > 0.0)) throw DomainError("noise channel: correlation time must be positive");
}

double BlochVector::length() const { return std::sqrt(px * px + py * py + pz * pz); }

void BlochVector::validate() const {
  if (!(length() <= 1.0 + 1e-12)) throw DomainError("Bloch vector longer than one");
}

namespace {

// x - 1 + exp(-x) without cancellation at small x
double ramp(double x) {
  if (x < 0.5) {
    double term = x * x / 2.0, sum = 0.0;
    for (int k = 3; k < 40 && std::abs(term) > 1e-18 * std::abs(sum); ++k) {
      sum += term;
      term *= -x / k;
    }
    return sum;
  }
  return x - 1.0 + std::exp(-x);
}

}  // namespace

double decrement(const NoiseChannel& channel, double t) {
  channel.validate();
  if (!(t >= 0.0)) throw DomainError("decrement: t must be non-negative");
  const double tau = channel.corr_time;
  return channel.variance * tau * tau * ramp(t / tau);
}

double decrement_quadratic(const NoiseChannel& channel, double t) {
  return 0.5 * channel.variance * t * t;
}

double decrement_linear(const NoiseChannel& channel, double t) {
  return channel.variance * channel.corr_time * t;
}

double decoherence_time(const NoiseChannel& channel) {
  channel.validate();
  if (!(channel.variance > 0.0)) throw DomainError("decoherence_time: noiseless channel never dephases");
  auto f = [&](double t) { return decrement(channel, t) - 0.5; };
  double hi = 1.0 / std::sqrt(channel.variance);
  while (f(hi) < 0.0) hi *= 2.0;
  double lo = hi;
  while (lo > 0.0 && f(lo) > 0.0) lo *= 0.5;
  boost::math::tools::eps_tolerance<double> tol(50);
  boost::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

DephasingRegime classify_regime(const NoiseChannel& channel, double t) {
  channel.validate();
  const double x = t / channel.corr_time;
  // relative error of t^2/2 is about x/3; of the linear form about 1/(x - 1)
  if (x <= 0.03) return DephasingRegime::quadratic;
  if (x >= 101.0) return DephasingRegime::linear;
  return DephasingRegime::intermediate;
}

Eigen::Matrix2cd dephase_density(const BlochVector& rho0, double gamma_t) {
  rho0.validate();
  if (!(gamma_t >= 0.0)) throw DomainError("dephase_density: decrement must be non-negative");
  const double d = std::exp(-gamma_t);
  const std::complex<double> off(0.5 * rho0.px * d, -0.5 * rho0.py * d);
  Eigen::Matrix2cd rho;
  rho << 0.5 * (1.0 + rho0.pz), off,
         std::conj(off), 0.5 * (1.0 - rho0.pz);
  return rho;
}

Eigen::Vector2d dephased_eigenvalues(const BlochVector& rho0, double gamma_t) {
  const double p2 = rho0.px * rho0.px + rho0.py * rho0.py + rho0.pz * rho0.pz;
  const double perp = rho0.px * rho0.px + rho0.py * rho0.py;
  const double s = std::sqrt(std::max(0.0, p2 - perp * (-std::expm1(-2.0 * gamma_t))));
  return {0.5 * (1.0 - s), 0.5 * (1.0 + s)};
}

double hyperfine_variance(const DonorSpecies& species, const Environment& env, double a0) {
  env.validate();
  const double y = species.gamma_e * hbar * env.b_field / (2.0 * k_b * env.temp_lattice);
  // 1 - tanh^2(y) written to survive large y
  const double e = std::exp(-2.0 * std::abs(y));
  return a0 * a0 * e / ((1.0 + e) * (1.0 + e));
}

double hyperfine_variance_approx(const DonorSpecies& species, const Environment& env, double a0) {
  env.validate();
  return 2.0 * a0 * a0 * std::exp(-species.gamma_e * hbar * env.b_field / (k_b * env.temp_lattice));
}

NoiseChannel hyperfine_channel(const DonorSpecies& species, const Environment& env, double tau1,
                               double a0) {
  return {hyperfine_variance(species, env, a0), tau1, NoiseKind::hyperfine_electron};
}

FieldOverTemp required_field_over_temp(const DonorSpecies& species, double target_rate, double a0) {
  if (!(target_rate > 0.0)) throw DomainError("required_field_over_temp: target must be positive");
  const double target2 = target_rate * target_rate;
  auto variance_at = [&](double y) {
    Environment env;
    env.b_field = y;
    env.temp_lattice = 1.0;
    return hyperfine_variance(species, env, a0);
  };
  FieldOverTemp out;
  if (variance_at(1e-300) > target2) {
    double lo = 0.0, hi = 1.0;
    while (variance_at(hi) > target2) hi *= 2.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (variance_at(mid) > target2 ? lo : hi) = mid;
    }
    out.exact = hi;
  }
  const double ratio = 2.0 * a0 * a0 / target2;
  out.approx = ratio > 1.0 ? k_b * std::log(ratio) / (species.gamma_e * hbar) : 0.0;
  return out;
}

void ImpuritySpec::validate() const {
  if (!(concentration >= 0.0 && concentration <= 1.0))
    throw DomainError("impurity: concentration must lie in [0, 1]");
  if (!(lattice_density > 0.0)) throw DomainError("impurity: lattice density must be positive");
  if (!(temp_nuclear_imp > 0.0)) throw DomainError("impurity: nuclear temperature must be positive");
  if (!(corr_time > 0.0)) throw DomainError("impurity: correlation time must be positive");
  if (min_distance < 0.0) throw DomainError("impurity: negative minimal distance");
}

double ImpuritySpec::min_distance_m() const {
  if (min_distance > 0.0) return min_distance * cm;
  return std::cbrt(1.0 / lattice_density) * cm;
}

double impurity_thermal_factor(const ImpuritySpec& imp, const Environment& env) {
  const double y = std::abs(imp.gamma_imp) * hbar * env.b_field / (2.0 * k_b * imp.temp_nuclear_imp);
  const double e = std::exp(-2.0 * y);
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// second moment per unit concentration: n (mu0 g_i g_imp hbar)^2 / (60 pi a^3) times thermal factor
static double impurity_coefficient(const DonorSpecies& species, const ImpuritySpec& imp,
                                   const Environment& env) {
  imp.validate();
  env.validate();
  const double n = imp.lattice_density / cm3;
  const double a = imp.min_distance_m();
  const double g = mu0 * species.gamma_i * imp.gamma_imp * hbar;
  return n * g * g / (60.0 * pi * a * a * a) * impurity_thermal_factor(imp, env);
}

double impurity_variance(const DonorSpecies& species, const ImpuritySpec& imp, const Environment& env) {
  return imp.concentration * impurity_coefficient(species, imp, env);
}

double allowed_concentration(const DonorSpecies& species, const ImpuritySpec& imp,
                             const Environment& env, double target_rate) {
  if (!(target_rate > 0.0)) throw DomainError("allowed_concentration: target must be positive");
  return target_rate * target_rate / impurity_coefficient(species, imp, env);
}

DipoleMomentCheck impurity_moment_monte_carlo(const ImpuritySpec& imp, std::uint64_t draws,
                                              std::uint64_t seed, unsigned workers) {
  imp.validate();
  if (draws < 2) throw DomainError("impurity_moment_monte_carlo: need at least two draws");
  const double a = imp.min_distance_m();
  const double r_max = 20.0 * a;
  const double a3 = a * a * a, r3 = r_max * r_max * r_max;
  const double shell = 4.0 * pi / 3.0 * (r3 - a3);
  const CounterRng rng{seed};
  constexpr std::size_t batches = 64;

  struct Acc {
    double sum = 0.0, sum2 = 0.0;
  };
  auto parts = run_batches<Acc>(batches, workers, [&](std::size_t b) {
    Acc acc;
    const std::uint64_t lo = draws * b / batches, hi = draws * (b + 1) / batches;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const double rr3 = a3 + rng.uniform(0, 2 * i) * (r3 - a3);
      const double c = 2.0 * rng.uniform(0, 2 * i + 1) - 1.0;
      const double ang = 1.0 - 3.0 * c * c;
      const double f = ang * ang / (rr3 * rr3);
      acc.sum += f;
      acc.sum2 += f * f;
    }
    return acc;
  });
  Acc tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sum2 += p.sum2;
  }
  const double nd = static_cast<double>(draws);
  const double mean = tot.sum / nd;
  const double var = std::max(0.0, tot.sum2 / nd - mean * mean) * nd / (nd - 1.0);
  DipoleMomentCheck out;
  out.monte_carlo = shell * mean;
  out.std_error = shell * std::sqrt(var / nd);
  out.analytic = 16.0 * pi / (15.0 * a3);
  return out;
}

bool adiabaticity_check(const NoiseChannel& channel, double omega_carrier, double tau2) {
  channel.validate();
  if (!(omega_carrier > 0.0) || !(tau2 > 0.0))
    throw DomainError("adiabaticity_check: inputs must be positive");
  return omega_carrier * tau2 > 1.0 && channel.corr_time / tau2 > 10.0;
}

}  // namespace nmrqc
