#pragma once

#include <Eigen/Dense>
#include <functional>

namespace ptkho {

struct LeastSquaresOptions {
  int max_iterations = 200;
  // Converged when every |dx_i| <= step_tolerance * (|x_i| + step_tolerance).
  double step_tolerance = 1e-8;
  // Also converged when an accepted step lowers the cost by less than this fraction.
  double cost_tolerance = 1e-14;
  double initial_damping = 1e-3;
};

struct LeastSquaresResult {
  Eigen::VectorXd x;
  double cost = 0.0;  // 0.5 * ||r||^2
  int iterations = 0;
  bool converged = false;
};

// Fills r (pre-sized to the residual count) for parameters x.
using ResidualFunction = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r)>;

// Levenberg-Marquardt with Marquardt diagonal scaling and a central
// difference Jacobian. Never throws on non-convergence; check `converged`.
LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, Eigen::VectorXd x0,
                                       Eigen::Index residual_count,
                                       const LeastSquaresOptions& options = {});

}  // namespace ptkho
