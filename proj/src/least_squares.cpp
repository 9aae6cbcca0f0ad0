#include "ptkho/least_squares.hpp"

#include <algorithm>
#include <cmath>

namespace ptkho {
namespace {

void jacobian(const ResidualFunction& residuals, const Eigen::VectorXd& x, Eigen::MatrixXd& jac,
              Eigen::VectorXd& lo, Eigen::VectorXd& hi) {
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 6e-6 * std::max(std::abs(x[i]), 1.0);
    probe[i] = x[i] + h;
    residuals(probe, hi);
    probe[i] = x[i] - h;
    residuals(probe, lo);
    probe[i] = x[i];
    jac.col(i) = (hi - lo) / (2.0 * h);
  }
}

bool small_step(const Eigen::VectorXd& step, const Eigen::VectorXd& x, double tol) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(step[i]) > tol * (std::abs(x[i]) + tol)) return false;
  }
  return true;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFunction& residuals, Eigen::VectorXd x0,
                                       Eigen::Index residual_count,
                                       const LeastSquaresOptions& options) {
  const Eigen::Index n = x0.size();
  LeastSquaresResult result;
  result.x = std::move(x0);

  Eigen::VectorXd r(residual_count), r_trial(residual_count), lo(residual_count), hi(residual_count);
  Eigen::MatrixXd jac(residual_count, n);
  residuals(result.x, r);
  result.cost = 0.5 * r.squaredNorm();
  if (!std::isfinite(result.cost)) return result;

  jacobian(residuals, result.x, jac, lo, hi);
  Eigen::MatrixXd normal = jac.transpose() * jac;
  Eigen::VectorXd gradient = jac.transpose() * r;

  // Dimensionless: the damping term is damping * diag(J^T J).
  double damping = options.initial_damping;
  double growth = 2.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    if (gradient.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + result.cost)) {
      result.converged = true;
      return result;
    }
    Eigen::VectorXd scale = normal.diagonal();
    const double floor = std::max(1e-12 * scale.maxCoeff(), 1e-300);
    for (Eigen::Index i = 0; i < n; ++i) scale[i] = std::max(scale[i], floor);

    Eigen::MatrixXd system = normal;
    system.diagonal() += damping * scale;
    const Eigen::VectorXd step = system.ldlt().solve(-gradient);
    if (!step.allFinite()) {
      damping *= growth;
      growth *= 2.0;
      continue;
    }

    const Eigen::VectorXd trial = result.x + step;
    residuals(trial, r_trial);
    const double trial_cost = 0.5 * r_trial.squaredNorm();
    const double predicted = 0.5 * step.dot(damping * scale.cwiseProduct(step) - gradient);
    const double rho = (result.cost - trial_cost) / predicted;

    if (std::isfinite(trial_cost) && predicted > 0.0 && rho > 0.0) {
      const double decrease = result.cost - trial_cost;
      result.x = trial;
      r = r_trial;
      result.cost = trial_cost;
      damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      growth = 2.0;
      if (small_step(step, result.x, options.step_tolerance) ||
          decrease <= options.cost_tolerance * result.cost) {
        result.converged = true;
        return result;
      }
      jacobian(residuals, result.x, jac, lo, hi);
      normal = jac.transpose() * jac;
      gradient = jac.transpose() * r;
    } else {
      // Rejected step already below the resolution of x: nothing left to gain.
      if (small_step(step, result.x, options.step_tolerance)) {
        result.converged = true;
        return result;
      }
      damping *= growth;
      growth *= 2.0;
      if (damping > 1e300) break;
    }
  }
  return result;
}

}  // namespace ptkho
