#pragma once

#include <vector>

#include <Eigen/Dense>

namespace nmrqc {

// dy/dt = M y + c with constant M, c
struct AffineSystem {
  Eigen::MatrixXd m;
  Eigen::VectorXd c;
};

struct AffineTrajectory {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;
};

struct AffineOptions {
  double tol = 1e-8;        // max-norm local error per step
  double h_initial = 0.0;   // 0 picks a step from the fastest rate
  double h_min = 1e-300;
  long long max_steps = 10'000'000;
};

// Backward Euler with step doubling. Each accepted step keeps the two-half-step
// value; for rate matrices with non-negative off-diagonal entries the solution
// stays non-negative and the column sums of M are conserved to rounding.
AffineTrajectory integrate_affine(const AffineSystem& sys, const Eigen::VectorXd& y0,
                                  double duration, const AffineOptions& opts);

// y with M y + c = 0; when M is singular (conserved quantity) the caller supplies
// a normalization row w, w.y = total, which replaces the last equation
Eigen::VectorXd affine_fixed_point(const AffineSystem& sys);
Eigen::VectorXd affine_fixed_point(const AffineSystem& sys, const Eigen::VectorXd& w, double total);

}  // namespace nmrqc
