#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace tmlab::numerics {

using OdeRhs = std::function<Eigen::VectorXd(double t, const Eigen::VectorXd& y)>;
/// Returning true halts integration after the current step.
using OdeStop = std::function<bool(double t, const Eigen::VectorXd& y)>;

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  ///< 0 selects a step from the local scale
  double max_step = std::numeric_limits<double>::infinity();
  int max_steps = 200000;
};

/// Accepted steps with derivatives, so that `at` can interpolate with cubic
/// Hermite polynomials between them.
struct OdeSolution {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::VectorXd> dy;
  bool success = false;
  bool stopped = false;  ///< halted by the stop predicate
  std::string message;

  Eigen::VectorXd at(double s) const;
  const Eigen::VectorXd& back() const { return y.back(); }
};

/// Dormand-Prince 5(4) with PI step control. Integrates in either direction.
OdeSolution dormand_prince(const OdeRhs& f, double t0, const Eigen::VectorXd& y0, double t1,
                           const OdeOptions& opt = {}, const OdeStop& stop = {});

}  // namespace tmlab::numerics
