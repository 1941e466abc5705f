#pragma once

#include <Eigen/Dense>
#include <functional>

namespace tmlab::numerics {

struct ScalarMax {
  double x;
  double value;
  int iterations;
};

/// Golden-section search for the maximum of a unimodal f on [a, b].
ScalarMax golden_section_max(const std::function<double(double)>& f, double a, double b,
                             double tol = 1e-10, int max_iter = 200);

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method on a bracketing interval (f(a) f(b) <= 0 required).
RootResult find_root(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-14, int max_iter = 200);

/// Euclidean projection in the diag(w) metric onto
///   { y >= 0 : sum_j w_j y_j^p <= budget }.
/// Solves y_j + nu y_j^{p-1} = max(x_j, 0) with the scalar nu fitted to the
/// budget; this is the exact KKT point of the projection problem.
Eigen::VectorXd project_pball(const Eigen::VectorXd& x, const Eigen::VectorXd& w, double p,
                              double budget = 1.0);

struct PgOptions {
  int max_iterations = 4000;
  double tolerance = 1e-8;  ///< on the caller's stationarity residual
  double initial_step = 1.0;
  double max_step = 1e6;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct PgResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double initial_value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Objective callback: returns J(x) and writes the gradient into `grad`.
using GradObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;
using Projector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using Residual = std::function<double(const Eigen::VectorXd& x, const Eigen::VectorXd& grad)>;

/// Projected gradient ascent with a diagonal metric: steps along
/// P(x + tau * grad / metric) with Armijo backtracking on the projection arc.
PgResult projected_gradient_ascent(const GradObjective& J, const Projector& project,
                                   const Eigen::VectorXd& x0, const Eigen::VectorXd& metric,
                                   const Residual& residual, const PgOptions& opt = {});

}  // namespace tmlab::numerics
