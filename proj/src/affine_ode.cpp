#include "nmrqc/affine_ode.hpp"

#include <algorithm>
#include <cmath>

#include "nmrqc/errors.hpp"

namespace nmrqc {

namespace {

Eigen::VectorXd implicit_step(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                              const Eigen::VectorXd& y, const Eigen::VectorXd& c, double h) {
  return lu.solve(y + h * c);
}

}  // namespace

AffineTrajectory integrate_affine(const AffineSystem& sys, const Eigen::VectorXd& y0,
                                  double duration, const AffineOptions& opts) {
  const auto n = sys.m.rows();
  if (sys.m.cols() != n || sys.c.size() != n || y0.size() != n)
    throw DomainError("integrate_affine: dimension mismatch");
  if (!(duration > 0.0)) throw DomainError("integrate_affine: duration must be positive");
  if (!(opts.tol > 0.0)) throw DomainError("integrate_affine: tol must be positive");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  double h = opts.h_initial;
  if (!(h > 0.0)) {
    const double rate = sys.m.cwiseAbs().maxCoeff();
    h = rate > 0.0 ? std::sqrt(opts.tol) / rate : duration;
  }
  h = std::min(h, duration);

  AffineTrajectory out;
  out.t.push_back(0.0);
  out.y.push_back(y0);
  double t = 0.0;
  Eigen::VectorXd y = y0;
  long long steps = 0;
  while (t < duration) {
    if (++steps > opts.max_steps) throw StepFailure("integrate_affine: step budget exhausted");
    const bool last = t + h >= duration;
    const double hs = last ? duration - t : h;
    Eigen::PartialPivLU<Eigen::MatrixXd> full(eye - hs * sys.m);
    Eigen::PartialPivLU<Eigen::MatrixXd> half(eye - 0.5 * hs * sys.m);
    const Eigen::VectorXd y_full = implicit_step(full, y, sys.c, hs);
    const Eigen::VectorXd y_mid = implicit_step(half, y, sys.c, 0.5 * hs);
    const Eigen::VectorXd y_two = implicit_step(half, y_mid, sys.c, 0.5 * hs);
    const double err = (y_two - y_full).cwiseAbs().maxCoeff();
    // local error of backward Euler scales as h^2
    const double factor = err > 0.0 ? 0.9 * std::sqrt(opts.tol / err) : 4.0;
    if (err <= opts.tol) {
      t = last ? duration : t + hs;
      y = y_two;
      out.t.push_back(t);
      out.y.push_back(y);
      h = hs * std::clamp(factor, 0.2, 4.0);
    } else {
      h = hs * std::clamp(factor, 0.1, 0.9);
      if (h < opts.h_min) throw StepFailure("integrate_affine: step size underflow");
    }
  }
  return out;
}

Eigen::VectorXd affine_fixed_point(const AffineSystem& sys) {
  return sys.m.fullPivLu().solve(-sys.c);
}

Eigen::VectorXd affine_fixed_point(const AffineSystem& sys, const Eigen::VectorXd& w, double total) {
  const auto n = sys.m.rows();
  Eigen::MatrixXd a = sys.m;
  Eigen::VectorXd b = -sys.c;
  a.row(n - 1) = w.transpose();
  b(n - 1) = total;
  return a.fullPivLu().solve(b);
}

}  // namespace nmrqc
