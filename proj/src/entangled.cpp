#include "nmrqc/entangled.hpp"

#include <cmath>
#include <complex>

#include "nmrqc/errors.hpp"
#include "nmrqc/parallel.hpp"
#include "nmrqc/rng.hpp"

namespace nmrqc {

using cd = std::complex<double>;

CorrelatedPhaseModel CorrelatedPhaseModel::constant(double s1_sq, double s2_sq, double rho, double si_sq) {
  return {[s1_sq](double) { return s1_sq; }, [s2_sq](double) { return s2_sq; },
          [rho](double) { return rho; }, [si_sq](double) { return si_sq; }};
}

void CorrelatedPhaseModel::validate(double t) const {
  if (!sigma1_sq || !sigma2_sq || !rho12) throw DomainError("phase model: missing variance or correlation");
  const double a = sigma1_sq(t), b = sigma2_sq(t), r = rho12(t);
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("phase model: variances must be non-negative");
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("phase model: correlation must lie in [0, 1]");
  if (sigma_i_sq && !(sigma_i_sq(t) >= 0.0)) throw DomainError("phase model: negative coupling variance");
}

Eigen::Matrix4cd phase_unitary(double phi1, double phi2, double phi_i) {
  const cd i(0.0, 1.0);
  Eigen::Matrix2cd sz;
  sz << 1.0, 0.0, 0.0, -1.0;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd u1 = std::cos(phi1 / 2) * id + i * std::sin(phi1 / 2) * sz;
  const Eigen::Matrix2cd u2 = std::cos(phi2 / 2) * id + i * std::sin(phi2 / 2) * sz;
  auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd k;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) k.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
    return k;
  };
  const Eigen::Matrix4cd zz = kron(sz, sz);
  const Eigen::Matrix4cd ui = std::cos(phi_i) * Eigen::Matrix4cd::Identity() + i * std::sin(phi_i) * zz;
  return kron(u1, u2) * ui;
}

namespace {

// diagonal of the phase unitary
Eigen::Vector4cd phase_diagonal(double phi1, double phi2, double phi_i) {
  const cd i(0.0, 1.0);
  return {std::exp(i * (0.5 * (phi1 + phi2) + phi_i)), std::exp(i * (0.5 * (phi1 - phi2) - phi_i)),
          std::exp(i * (0.5 * (phi2 - phi1) - phi_i)), std::exp(i * (-0.5 * (phi1 + phi2) + phi_i))};
}

TwoQubitDensity projector(const Eigen::Vector4cd& psi) { return psi * psi.adjoint(); }

}  // namespace

TwoQubitDensity conjugate_by_phases(const TwoQubitDensity& rho, double phi1, double phi2, double phi_i) {
  const Eigen::Vector4cd u = phase_diagonal(phi1, phi2, phi_i);
  TwoQubitDensity out;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) out(j, k) = std::conj(u(j)) * rho(j, k) * u(k);
  return out;
}

TwoQubitDensity epr_triplet() {
  const double s = 1.0 / std::sqrt(2.0);
  return projector(Eigen::Vector4cd(0.0, s, s, 0.0));
}

TwoQubitDensity epr_singlet() {
  const double s = 1.0 / std::sqrt(2.0);
  return projector(Eigen::Vector4cd(0.0, s, -s, 0.0));
}

TwoQubitDensity bell_state(int sign) {
  const double s = 1.0 / std::sqrt(2.0);
  return projector(Eigen::Vector4cd(s, 0.0, 0.0, sign >= 0 ? s : -s));
}

TwoQubitDensity partially_entangled(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("partially_entangled: alpha must lie in [0, 1]");
  return projector(Eigen::Vector4cd(0.0, std::sqrt(1.0 - alpha), std::sqrt(alpha), 0.0));
}

double single_qubit_decrement(double sigma_sq) { return 0.5 * sigma_sq; }

double epr_decrement(const CorrelatedPhaseModel& model, double t) {
  model.validate(t);
  const double a = model.sigma1_sq(t), b = model.sigma2_sq(t), r = model.rho12(t);
  // variance of phi1 - phi2, halved
  return 0.5 * std::max(0.0, a + b - 2.0 * r * std::sqrt(a * b));
}

double bell_decrement(const CorrelatedPhaseModel& model, double t) {
  model.validate(t);
  const double a = model.sigma1_sq(t), b = model.sigma2_sq(t), r = model.rho12(t);
  return 0.5 * (a + b + 2.0 * r * std::sqrt(a * b));
}

TwoQubitDensity averaged_epr(const CorrelatedPhaseModel& model, double t, int sign) {
  TwoQubitDensity rho = sign >= 0 ? epr_triplet() : epr_singlet();
  const double d = std::exp(-epr_decrement(model, t));
  rho(1, 2) *= d;
  rho(2, 1) *= d;
  return rho;
}

TwoQubitDensity averaged_bell(const CorrelatedPhaseModel& model, double t, int sign) {
  TwoQubitDensity rho = bell_state(sign);
  const double d = std::exp(-bell_decrement(model, t));
  rho(0, 3) *= d;
  rho(3, 0) *= d;
  return rho;
}

namespace {

struct PhaseDraw {
  double phi1, phi2, phi_i;
};

struct Sampler {
  CounterRng rng;
  double s1, s2, rho, si;

  PhaseDraw draw(std::uint64_t i) const {
    const auto [z1, z2] = rng.normal_pair(0, i);
    const double phi1 = s1 * z1;
    const double phi2 = s2 * (rho * z1 + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * z2);
    const double phi_i = si > 0.0 ? si * rng.normal_pair(1, i).first : 0.0;
    return {phi1, phi2, phi_i};
  }
};

Sampler make_sampler(const CorrelatedPhaseModel& model, double t, std::uint64_t seed) {
  model.validate(t);
  const double si = model.sigma_i_sq ? std::sqrt(model.sigma_i_sq(t)) : 0.0;
  return {CounterRng{seed}, std::sqrt(model.sigma1_sq(t)), std::sqrt(model.sigma2_sq(t)), model.rho12(t), si};
}

}  // namespace

PhaseSamples sample_correlated_phases(const CorrelatedPhaseModel& model, double t, std::uint64_t count,
                                      std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_correlated_phases: count must be positive");
  const Sampler s = make_sampler(model, t, seed);
  PhaseSamples out;
  out.phi1.resize(count);
  out.phi2.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto d = s.draw(i);
    out.phi1[i] = d.phi1;
    out.phi2[i] = d.phi2;
  }
  return out;
}

MonteCarloDensity monte_carlo_average(const TwoQubitDensity& rho0, const CorrelatedPhaseModel& model,
                                      double t, std::uint64_t count, std::uint64_t seed,
                                      unsigned workers) {
  if (count < 1) throw DomainError("monte_carlo_average: count must be positive");
  const Sampler s = make_sampler(model, t, seed);
  struct Acc {
    Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4d sum2 = Eigen::Matrix4d::Zero();
  };
  constexpr std::size_t batches = 64;
  auto parts = run_batches<Acc>(batches, workers, [&](std::size_t b) {
    Acc acc;
    const std::uint64_t lo = count * b / batches, hi = count * (b + 1) / batches;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const auto d = s.draw(i);
      const TwoQubitDensity r = conjugate_by_phases(rho0, d.phi1, d.phi2, d.phi_i);
      acc.sum += r;
      acc.sum2 += r.cwiseAbs2();
    }
    return acc;
  });
  Acc tot;
  for (const auto& p : parts) {
    tot.sum += p.sum;
    tot.sum2 += p.sum2;
  }
  const double n = static_cast<double>(count);
  MonteCarloDensity out;
  out.mean = tot.sum / n;
  // E|X - EX|^2 = E|X|^2 - |EX|^2
  const Eigen::Matrix4d var = (tot.sum2 / n - out.mean.cwiseAbs2()).cwiseMax(0.0);
  out.std_error = count > 1 ? (var * (n / (n - 1.0)) / n).cwiseSqrt().eval() : Eigen::Matrix4d::Zero().eval();
  return out;
}

double purity(const TwoQubitDensity& rho) { return (rho * rho).trace().real(); }

}  // namespace nmrqc
