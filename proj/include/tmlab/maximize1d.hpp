#pragma once

#include <cstdint>
#include <vector>

#include "tmlab/profile.hpp"

namespace tmlab {

/// The reduced problem M_p: maximize int_0^inf exp(a w^{p'} - t) dt over
/// w(0) = 0, w nondecreasing, int |w'|^p dt <= 1, with a = alpha/alpha_p.
struct MaxProblem {
  Params params;
  double alpha_ratio = 1.0;
  double horizon = 40.0;
  int nodes = 2000;
  double geometric_ratio = 1.02;  ///< cell growth near t = 0
  int gauss_points = 6;           ///< per cell, discretized objective
  int max_iterations = 4000;
  double tolerance = 1e-6;        ///< on the KKT residual / (1 + value)

  MaxProblem() = default;
  MaxProblem(Params p, double ratio) : params(p), alpha_ratio(ratio) {}
  void validate() const;
  /// Geometric cells near 0, uniform beyond; the first quarter of the cells is geometric.
  Eigen::VectorXd grid() const;
};

struct ObjectiveValue {
  double value;          ///< with the constant extension beyond the horizon
  double tail_value;     ///< the constant-extension part beyond max(T, horizon of w)
  double tail_envelope;  ///< Hoelder upper envelope with the unspent budget; may be inf
};

ObjectiveValue objective(const MaxProblem& problem, const Profile1D& w);

struct RestartRecord {
  std::string seed;  ///< "ramp k=1" or "random #i"
  double initial_value;
  double value;
  double residual;
  int iterations;
  int evaluations;
  bool converged;
};

struct MaxResult {
  double value = 0.0;
  double value_Trad = 0.0;  ///< (omega_p/p) value, or (omega_p/(p - beta)) value for the beta-problem
  Profile1D profile;
  double kkt_residual = 0.0;
  int restarts_used = 0;
  double tail_contribution = 0.0;
  double tail_envelope = 0.0;
  bool converged = false;
  double alpha_ratio = 1.0;
  std::vector<RestartRecord> restarts;
};

/// Projected ascent on the cell slopes from ramps k = 1, 2, 3 and `random`
/// random monotone seeds. Best value wins, then the smallest residual.
MaxResult solve(const MaxProblem& problem, int random_restarts = 2, std::uint64_t seed = 1);

struct ConcentrationGap {
  double value;
  double level;
  double gap;
  bool above_level;  ///< value >= level - 1e-6
  bool strict;       ///< value > level
  bool converged;
};

ConcentrationGap concentration_gap(const Params& params, int random_restarts = 2,
                                   std::uint64_t seed = 1);

/// beta-problem at exponent alpha via the beta-transplantation: the beta = 0
/// problem at ratio alpha p / ((p - beta) alpha_p).
MaxResult singular_variant(const Params& params, double alpha, int random_restarts = 2,
                           std::uint64_t seed = 1);

}  // namespace tmlab
