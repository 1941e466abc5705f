#pragma once

#include <memory>
#include <vector>

#include "tmlab/profile.hpp"
#include "tmlab/transforms.hpp"
#include "tmlab/weights.hpp"

namespace tmlab {

/// u_k = k^{(p-1)/p} omega_p^{-1/p} on (0, r_k], the p-harmonic decay
/// (r^{-kappa} - R^{-kappa}) scaled to reach 0 at R outside.
struct MoserElement {
  Params params;
  int k;
  double r_k;
  double plateau;
  /// Exact evaluator: the pullback of the ramp min(t, pk) (pk)^{-1/p}.
  std::shared_ptr<const PulledBackProfile> profile;
};

MoserElement build_moser(const Params& params, int k);

/// r_k from r_k^{-kappa} - R^{-kappa} = k ((N-p)/(p-1)) (omega_N/omega_p)^{1/(p-1)}.
double moser_radius(const Params& params, int k);

/// (omega_p/p) exp(k omega_p^{-1/(p-1)} (alpha - alpha_p)).
double moser_lower_bound(const Params& params, double alpha, int k);

struct BlowupRow {
  int k;
  double value;
  double log_value;
  double lower_bound;
  bool divergent;
};

struct BlowupScan {
  double alpha;
  std::vector<BlowupRow> rows;
  bool increasing;        ///< strictly increasing values in k
  int tenfold_k;          ///< first k whose value exceeds 10x the k = 1 value, 0 if none
  double min_bound_margin;  ///< min (value - bound)/bound; >= 0 means never violated
};

BlowupScan blowup_scan(const Params& params, double alpha, int k_max);

struct AnnulusRow {
  int j;
  double log_value;        ///< ln of the annulus integral over (delta 2^{-j-1}, delta 2^{-j})
  double log_lower_bound;  ///< ln of the power lower bound, when valid
  bool bound_valid;        ///< r^{-beta gamma} dominates the exponent of V_p on the annulus
  double log_partial_sum;
};

struct PowerCapReport {
  double gamma;
  double beta_exp;
  double delta;
  std::pair<double, double> beta_window;
  double gradient_energy;  ///< int |grad phi_beta|^p dx, finite
  std::vector<AnnulusRow> rows;
  bool diverges;  ///< value >= bound on every valid annulus and the bounds grow geometrically
};

/// phi_beta = |x|^{-beta} on B_delta, linear to 0 on (delta, 2 delta). Rejects
/// gamma <= p' (the functional is finite there). beta_exp <= 0 picks the
/// middle of the admissible window (kappa/gamma, (N-p)/p).
PowerCapReport power_cap_divergence(const Params& params, double gamma, double beta_exp = 0.0,
                                    int j_max = 30);

struct PerturbedRow {
  int k;
  double value;
};

struct PerturbedReport {
  double epsilon;
  double alpha;
  std::vector<PerturbedRow> rows;
  bool increasing;
  double growth;  ///< last value / first value
};

/// u_k against the weight V_p |x|^{-eps}.
PerturbedReport perturbed_weight_blowup(const Params& params, double epsilon, double alpha,
                                        int k_max = 6);

}  // namespace tmlab
