#include "calib/omni.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"
#include "calib/metrics.hpp"
#include "calib/transport.hpp"

namespace calib {

namespace {

void check_tau(const Pld& mu, const Pld& nu) {
  if (std::abs(tau(mu) - tau(nu)) > kMassTolerance) {
    throw Error(ErrorCode::TauMismatch, "benchmark has a different label-1 mass");
  }
}

void finish(OmniReport& r) {
  r.regret = r.lhs - r.rhs;
  r.ratio = r.bound > 0.0 ? r.regret / r.bound : 0.0;
}

// Integral of |t - v| over [a, b].
double abs_integral(double a, double b, double v) {
  auto antider = [v](double t) { return t < v ? -(v - t) * (v - t) / 2.0 : (t - v) * (t - v) / 2.0; };
  return antider(b) - antider(a);
}

}  // namespace

OmniReport omni_regret(const Pld& mu, const Pld& nu, const VMixtureLoss& loss,
                       const PostProcessing& kappa, double sigma,
                       const OmniConstants& constants) {
  check_tau(mu, nu);
  OmniReport r;
  r.sigma = sigma;
  r.lhs = expected_loss_smoothed(smooth(mu, sigma), loss);
  r.rhs = expected_loss_smoothed_post(smooth(nu, sigma), kappa, loss);
  r.w = wasserstein_label_preserving(mu, nu).value;
  r.smce = smce(mu).value;
  r.bound = constants.upper * (sigma + (r.smce + r.w) / sigma);
  finish(r);
  return r;
}

OmniReport omni_regret_calibrated(const Pld& mu, const Pld& nu, const VMixtureLoss& loss,
                                  double sigma, const OmniConstants& constants) {
  if (!is_calibrated(nu, 1e-8)) {
    throw Error(ErrorCode::NotCalibratedBenchmark, "benchmark PLD is not calibrated");
  }
  check_tau(mu, nu);
  OmniReport r;
  r.sigma = sigma;
  r.lhs = expected_loss_smoothed(smooth(mu, sigma), loss);
  r.rhs = expected_loss(nu, loss);
  r.w = wasserstein(mu, nu).value;
  r.smce = smce(mu).value;
  r.bound = constants.upper * (sigma + r.smce / sigma + r.w);
  finish(r);
  return r;
}

PostProcessing posterior_step(const SmoothedPld& spld) {
  PosteriorFunction post = posterior(spld);
  std::vector<Piece> pieces;
  double edge = 0.0;
  for (const auto& pc : post.pieces) {
    if (pc.lo > edge) pieces.push_back({edge, pc.lo, 0.0, pc.value});
    pieces.push_back({pc.lo, pc.hi, 0.0, pc.value});
    edge = pc.hi;
  }
  if (edge < 1.0) {
    double last = post.pieces.empty() ? 0.5 : post.pieces.back().value;
    pieces.push_back({edge, 1.0, 0.0, last});
  }
  if (post.at0) pieces.push_back({0.0, 0.0, 0.0, *post.at0});
  if (post.at1) pieces.push_back({1.0, 1.0, 0.0, *post.at1});
  return PostProcessing::make(std::move(pieces));
}

BestPostRegret best_post_regret(const SmoothedPld& spld, const VMixtureLoss& loss) {
  BestPostRegret out;
  out.kappa = posterior_step(spld);
  out.value = expected_loss_smoothed(spld, loss) - expected_loss_smoothed_post(spld, out.kappa, loss);
  return out;
}

OmniReport best_post_report(const Pld& mu, const VMixtureLoss& loss, double sigma,
                            const OmniConstants& constants) {
  SmoothedPld spld = smooth(mu, sigma);
  BestPostRegret best = best_post_regret(spld, loss);
  OmniReport r;
  r.sigma = sigma;
  r.lhs = expected_loss_smoothed(spld, loss);
  r.rhs = r.lhs - best.value;
  r.smce = smce(mu).value;
  r.bound = constants.upper * (sigma + r.smce / sigma);
  finish(r);
  return r;
}

double relabeled_smoothed_loss(const SmoothedPld& spld, const VMixtureLoss& loss) {
  PiecewisePrediction law = smoothed_law(spld);
  double mean = law.atom1;
  for (const auto& pc : law.pieces) mean += pc.density * (pc.hi * pc.hi - pc.lo * pc.lo) / 2.0;
  double value = loss.affine().a * mean + loss.affine().b * law.total_mass();
  // Under y ~ Bernoulli(t): E[-(y - v) sgn(t - v)] = -|t - v|.
  for (const auto& c : loss.components()) {
    double dist = law.atom0 * c.v + law.atom1 * (1.0 - c.v);
    for (const auto& pc : law.pieces) dist += pc.density * abs_integral(pc.lo, pc.hi, c.v);
    value -= c.lambda * dist;
  }
  return value;
}

}  // namespace calib
