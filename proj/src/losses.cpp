#include "calib/losses.hpp"

#include <algorithm>
#include <cmath>

#include "calib/error.hpp"

namespace calib {

namespace {

// Length of {t in [a,b] : slope t + intercept > v} minus the length where it is < v.
double signed_length(double a, double b, double slope, double intercept, double v) {
  if (b <= a) return 0.0;
  if (slope == 0.0) return sgn(intercept - v) * (b - a);
  double root = std::clamp((v - intercept) / slope, a, b);
  double above = slope > 0.0 ? b - root : root - a;
  double below = (b - a) - above;
  return above - below;
}

// E[sgn(kappa(X) - v)] for X with the given law.
double expected_sign(const PiecewisePrediction& law, const PostProcessing& kappa, double v) {
  double total = law.atom0 * sgn(kappa(0.0) - v) + law.atom1 * sgn(kappa(1.0) - v);
  for (const auto& dp : law.pieces) {
    for (const auto& kp : kappa.pieces()) {
      if (kp.is_point()) continue;
      double a = std::max(dp.lo, kp.lo);
      double b = std::min(dp.hi, kp.hi);
      total += dp.density * signed_length(a, b, kp.slope, kp.intercept, v);
    }
  }
  return total;
}

}  // namespace

VMixtureLoss VMixtureLoss::make(std::vector<VComponent> components, Affine affine) {
  double total = 0.0;
  for (const auto& c : components) {
    if (!std::isfinite(c.v) || !std::isfinite(c.lambda)) {
      throw Error(ErrorCode::NonFinite, "non-finite loss component");
    }
    if (!(c.v >= 0.0 && c.v <= 1.0)) throw Error(ErrorCode::AtomOutOfRange, "v not in [0,1]");
    if (c.lambda < 0.0) throw Error(ErrorCode::NegativeMass, "negative lambda");
    total += c.lambda;
  }
  if (total > kMaxLambdaTotal + 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "lambda weights sum above 2");
  }
  if (!std::isfinite(affine.a) || !std::isfinite(affine.b)) {
    throw Error(ErrorCode::NonFinite, "non-finite affine term");
  }
  return VMixtureLoss(std::move(components), affine);
}

VMixtureLoss VMixtureLoss::v_shaped(double v, double lambda) { return make({{v, lambda}}); }

VMixtureLoss VMixtureLoss::zero_one() { return make({{0.5, 1.0}}, {0.0, 0.5}); }

double VMixtureLoss::lambda_total() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.lambda;
  return total;
}

double VMixtureLoss::operator()(double p, int y) const {
  double value = affine_.a * y + affine_.b;
  for (const auto& c : components_) value += c.lambda * v_loss(c.v, p, y);
  return value;
}

double expected_loss(const Pld& pld, const VMixtureLoss& loss) {
  double total = 0.0;
  for (const auto& a : pld.atoms()) total += a.mass * loss(a.p, a.y);
  return total;
}

double expected_loss_smoothed(const SmoothedPld& spld, const VMixtureLoss& loss) {
  double total = 0.0;
  for (const auto& a : spld.base.atoms()) {
    PiecewisePrediction law = smooth_point(a.p, spld.sigma);
    double value = loss.affine().a * a.y + loss.affine().b;
    for (const auto& c : loss.components()) {
      double sign = law.prob_greater(c.v) - law.prob_less(c.v);
      value += c.lambda * -(a.y - c.v) * sign;
    }
    total += a.mass * value;
  }
  return total;
}

double expected_loss_smoothed_post(const SmoothedPld& spld, const PostProcessing& kappa,
                                   const VMixtureLoss& loss) {
  double total = 0.0;
  for (const auto& a : spld.base.atoms()) {
    PiecewisePrediction law = smooth_point(a.p, spld.sigma);
    double value = loss.affine().a * a.y + loss.affine().b;
    for (const auto& c : loss.components()) {
      value += c.lambda * -(a.y - c.v) * expected_sign(law, kappa, c.v);
    }
    total += a.mass * value;
  }
  return total;
}

double bayes_response(const VMixtureLoss& loss, double qbar) {
  (void)loss;
  if (!(qbar >= 0.0 && qbar <= 1.0)) throw Error(ErrorCode::AtomOutOfRange, "qbar not in [0,1]");
  return qbar;
}

bool properness_check(const VMixtureLoss& loss, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid step not in (0,1]");
  }
  auto n = static_cast<long>(std::floor(1.0 / grid_step + 1e-9));
  std::vector<double> grid;
  for (long k = 0; k <= n; ++k) grid.push_back(std::min(1.0, static_cast<double>(k) * grid_step));
  if (grid.back() < 1.0) grid.push_back(1.0);
  auto risk = [&](double truth, double report) {
    return truth * loss(report, 1) + (1.0 - truth) * loss(report, 0);
  };
  for (double p : grid) {
    double own = risk(p, p);
    for (double q : grid) {
      if (own > risk(p, q) + 1e-9) return false;
    }
  }
  return true;
}

}  // namespace calib
