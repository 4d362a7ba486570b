#pragma once

#include "calib/losses.hpp"
#include "calib/pld.hpp"
#include "calib/postprocessing.hpp"
#include "calib/smoothing.hpp"

namespace calib {

// Explicit constants standing in for the asymptotic inequalities: the upper
// bounds are checked with factor `upper`, the lower-bound scaling with `lower`.
struct OmniConstants {
  double upper = 20.0;
  double lower = 0.05;
};

inline constexpr OmniConstants kOmniConstants{};

struct OmniReport {
  double lhs = 0.0;     // loss of the smoothed predictor
  double rhs = 0.0;     // loss of the benchmark
  double regret = 0.0;  // lhs - rhs
  double smce = 0.0;
  double w = 0.0;
  double sigma = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // regret / bound, 0 when bound is 0
};

// Smoothed mu against the post-processed, smoothed benchmark nu (equal tau).
// bound = C (sigma + (smce(mu) + W_label_preserving(mu, nu)) / sigma).
OmniReport omni_regret(const Pld& mu, const Pld& nu, const VMixtureLoss& loss,
                       const PostProcessing& kappa, double sigma,
                       const OmniConstants& constants = kOmniConstants);

// Smoothed mu against an unsmoothed calibrated benchmark nu (equal tau).
// bound = C (sigma + smce(mu) / sigma + W(mu, nu)).
OmniReport omni_regret_calibrated(const Pld& mu, const Pld& nu, const VMixtureLoss& loss,
                                  double sigma, const OmniConstants& constants = kOmniConstants);

struct BestPostRegret {
  double value = 0.0;
  PostProcessing kappa = PostProcessing::identity();
};

// Improvement from post-processing the smoothed predictor by its posterior mean.
BestPostRegret best_post_regret(const SmoothedPld& spld, const VMixtureLoss& loss);

// Report for the best post-processing: rhs is the loss after applying the
// posterior step map, bound = C (sigma + smce / sigma).
OmniReport best_post_report(const Pld& mu, const VMixtureLoss& loss, double sigma,
                            const OmniConstants& constants = kOmniConstants);

// E[loss(p_z, y')] with y' ~ Bernoulli(p_z) drawn afresh: the smoothed
// predictor evaluated as if it were calibrated.
double relabeled_smoothed_loss(const SmoothedPld& spld, const VMixtureLoss& loss);

// Post-processing sending t to the posterior mean of y given smoothed prediction t.
PostProcessing posterior_step(const SmoothedPld& spld);

}  // namespace calib
