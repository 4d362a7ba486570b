#include "calib/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "calib/error.hpp"
#include "calib/omni.hpp"
#include "calib/rng.hpp"

namespace calib {

namespace {

void check_open_half(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw Error(ErrorCode::ParameterConstraint, "eps must lie in (0, 1/2)");
  }
}

ConstructionOutput from_task(std::string name, FinitePredictionTask task) {
  Pld pld = pushforward(task);
  return {std::move(name), std::move(task), std::move(pld), {}, {}};
}

struct JitterParams {
  double eps;
  double eps_prime;
  int k;
  int half;
  int deterministic;  // points per side with a deterministic label in case (d)
  double width;
};

JitterParams check_jitter(double eps, int k, std::optional<double> jitter_halfwidth) {
  check_open_half(eps);
  if (k < 2 || k % 2 != 0) throw Error(ErrorCode::ParameterConstraint, "k must be even and >= 2");
  double eps_prime = eps / (1.0 + 2.0 * eps);
  double count = eps_prime * k;
  if (std::abs(count - std::round(count)) > 1e-9) {
    throw Error(ErrorCode::ParameterConstraint,
                "eps k / (1 + 2 eps) = " + std::to_string(count) + " is not an integer");
  }
  double width = jitter_halfwidth.value_or(default_jitter_halfwidth(eps));
  if (!(width > 0.0 && width <= eps / 2.0)) {
    throw Error(ErrorCode::ParameterConstraint, "jitter half-width must lie in (0, eps/2]");
  }
  return {eps, eps_prime, k, k / 2, static_cast<int>(std::lround(count)), width};
}

// Distinct jitters per side, side 0 first; a draw repeating an earlier one on
// its side is redrawn.
std::vector<double> draw_jitter(const JitterParams& jp, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out;
  out.reserve(2 * static_cast<std::size_t>(jp.half));
  for (int side = 0; side < 2; ++side) {
    std::set<double> seen;
    for (int j = 0; j < jp.half; ++j) {
      while (true) {
        double d = rng.uniform(-jp.width, jp.width);
        auto it = seen.lower_bound(d - kValueTolerance);
        if (it != seen.end() && *it <= d + kValueTolerance) continue;
        seen.insert(d);
        out.push_back(d);
        break;
      }
    }
  }
  return out;
}

FinitePredictionTask jittered_task(const JitterParams& jp, const std::vector<double>& jitter,
                                   bool case_d) {
  double w = 1.0 / jp.k;
  std::vector<TaskPoint> pts;
  pts.reserve(static_cast<std::size_t>(jp.k));
  for (int j = 0; j < jp.half; ++j) {
    double bayes = !case_d ? 0.5 : (j < jp.deterministic ? 1.0 : 0.5 - jp.eps);
    pts.push_back({w, bayes, 0.5 - jp.eps + jitter[j]});
  }
  for (int j = 0; j < jp.half; ++j) {
    double bayes = !case_d ? 0.5 : (j < jp.deterministic ? 0.0 : 0.5 + jp.eps);
    pts.push_back({w, bayes, 0.5 + jp.eps + jitter[jp.half + j]});
  }
  return make_task(std::move(pts));
}

}  // namespace

ConstructionOutput almost_balanced(double eps) {
  check_open_half(eps);
  Pld pld = Pld::make({{0.5 - eps, 0, 0.25}, {0.5 - eps, 1, 0.25},
                       {0.5 + eps, 0, 0.25}, {0.5 + eps, 1, 0.25}});
  ConstructionOutput out{"almost_balanced", std::nullopt, std::move(pld), {}, {}};
  out.expected["ece"] = {eps, "every prediction is off by eps from the label mean 1/2"};
  out.expected["smce"] = {eps * eps, "best witness spreads by 2 eps against bias mass eps/2"};
  out.expected["tau"] = {0.5, "labels are balanced"};
  out.expected["udce"] = {eps, "both values have label mean 1/2, so kappa must be 1/2"};
  return out;
}

ConstructionOutput two_point_family(double eps) {
  check_open_half(eps);
  // Domain {x0, x1}, uniform, with y(x0) = 0 and y(x1) = 1.
  auto task_for = [](double p0, double p1) {
    return make_task({{0.5, 0.0, p0}, {0.5, 1.0, p1}});
  };
  ConstructionOutput out = from_task("two_point_family", task_for(0.5 - eps, 0.5 + eps));
  FinitePredictionTask bad = task_for(0.5 + eps, 0.5 - eps);
  FinitePredictionTask uniform = task_for(0.5, 0.5);
  out.companions.emplace("bad_pld", pushforward(bad));
  out.companions.emplace("uniform_pld", pushforward(uniform));
  out.companions.emplace("bad_task", std::move(bad));
  out.companions.emplace("uniform_task", std::move(uniform));
  out.companions.emplace("zero_one_loss", VMixtureLoss::zero_one());
  out.expected["loss_good"] = {0.0, "zero-one loss of the good predictor"};
  out.expected["loss_bad"] = {1.0, "zero-one loss of the bad predictor"};
  out.expected["loss_uniform"] = {0.5, "zero-one loss of the constant-1/2 predictor"};
  return out;
}

ConstructionOutput smoothing_necessity(double eps) {
  check_open_half(eps);
  Pld mu = Pld::make({{0.5 + eps, 0, 0.5}, {0.5 - eps, 1, 0.5}});
  Pld nu = Pld::make({{0.5 - eps, 0, 0.5}, {0.5 + eps, 1, 0.5}});
  ConstructionOutput out{"smoothing_necessity", std::nullopt, mu, {}, {}};
  out.companions.emplace("nu", std::move(nu));
  out.companions.emplace("kappa", PostProcessing::make({{0.0, 1.0, -1.0, 1.0}}));
  out.companions.emplace("loss", VMixtureLoss::v_shaped(0.5));
  out.companions.emplace("coupling", CouplingTable{{{0.5 + eps, 0.5 - eps, 0, 0.5},
                                                     {0.5 - eps, 0.5 + eps, 1, 0.5}}});
  out.expected["loss_p"] = {0.5, "p is always on the wrong side of 1/2"};
  out.expected["loss_q"] = {-0.5, "q = 1 - p is always on the right side"};
  out.expected["mean_abs_q_minus_p"] = {2.0 * eps, "|q - p| = 2 eps everywhere"};
  out.expected["smce_upper"] = {2.0 * eps, "upper bound on smce"};
  return out;
}

ConstructionOutput lb1(double eps, std::optional<double> sigma) {
  if (!(eps > 0.0 && eps <= 0.5)) {
    throw Error(ErrorCode::ParameterConstraint, "eps must lie in (0, 1/2]");
  }
  Pld mu = Pld::make({{0.5, 0, 0.5}, {0.5, 1, 0.5}});
  Pld nu = Pld::make({{0.5 - eps, 0, 0.5}, {0.5 + eps, 1, 0.5}});
  ConstructionOutput out{"lb1", std::nullopt, mu, {}, {}};
  out.companions.emplace("nu", std::move(nu));
  out.companions.emplace("loss", VMixtureLoss::v_shaped(0.5));
  out.companions.emplace("kappa", PostProcessing::identity());
  out.expected["w_label_preserving"] = {eps, "every atom moves eps horizontally"};
  if (sigma) {
    if (!(*sigma >= eps && *sigma <= 1.0)) {
      throw Error(ErrorCode::ParameterOrder, "regret formula needs eps <= sigma <= 1");
    }
    out.expected["regret"] = {eps / (2.0 * *sigma), "smoothed mu scores 0, smoothed nu -eps/(2 sigma)"};
  }
  return out;
}

ConstructionOutput lb2(double eps, double sigma) {
  if (!(eps > 0.0 && eps <= sigma && sigma <= 1.0 / 12.0)) {
    throw Error(ErrorCode::ParameterOrder, "need 0 < eps <= sigma <= 1/12");
  }
  double delta = eps / sigma;
  Pld mu0 = Pld::make({{0.5, 0, (1.0 - delta) / 2.0},
                       {0.5, 1, (1.0 - delta) / 2.0},
                       {0.5 - 2.0 * sigma, 1, delta / 2.0},
                       {0.5 + 2.0 * sigma, 0, delta / 2.0}});
  Pld mu1 = Pld::make({{1.0, 1, 1.0}});
  ConstructionOutput out{"lb2", std::nullopt, mix(mu0, mu1, 0.5), {}, {}};
  out.companions.emplace("mu0", std::move(mu0));
  out.companions.emplace("mu1", std::move(mu1));
  out.companions.emplace("loss", VMixtureLoss::make({{0.5, 0.5}, {1.0 - sigma / 2.0, 0.5}}));
  out.companions.emplace("kappa", PostProcessing::make({{0.0, 0.5 - sigma, 0.0, 0.5 + sigma},
                                                        {0.5 - sigma, 0.5 + sigma, 0.0, 0.5},
                                                        {0.5 + sigma, 0.75, 0.0, 0.5 - sigma},
                                                        {0.75, 1.0, 0.0, 1.0}}));
  out.expected["smce_upper"] = {2.0 * eps, "upper bound on smce"};
  out.expected["kappa_regret"] = {eps / (4.0 * sigma) + sigma / 16.0,
                                  "regret of the companion kappa, exact"};
  out.expected["regret_lower_bound"] = {kOmniConstants.lower * (sigma + eps / sigma),
                                        "lower bound on the best post-processing regret"};
  return out;
}

FinitePredictionTask udce_jittered_task(double eps, int k, std::uint64_t seed, bool case_d,
                                        std::optional<double> jitter_halfwidth) {
  JitterParams jp = check_jitter(eps, k, jitter_halfwidth);
  return jittered_task(jp, draw_jitter(jp, seed), case_d);
}

UdceCases udce_cases(double eps, int k, std::uint64_t seed, std::optional<double> jitter_halfwidth) {
  JitterParams jp = check_jitter(eps, k, jitter_halfwidth);
  double ep = jp.eps_prime;
  double lo = 0.5 - eps;
  double hi = 0.5 + eps;

  ConstructionOutput a = from_task("udce_case_a", make_task({{0.5, 0.5, lo}, {0.5, 0.5, hi}}));
  a.expected["true_dce"] = {eps, "both points are already calibrated at 1/2"};
  a.expected["udce"] = {eps, "only the constant 1/2 calibrates"};

  ConstructionOutput b = from_task("udce_case_b", make_task({{ep, 1.0, lo},
                                                             {0.5 - ep, lo, lo},
                                                             {ep, 0.0, hi},
                                                             {0.5 - ep, hi, hi}}));
  b.expected["true_dce"] = {2.0 * eps * eps / (1.0 + 2.0 * eps),
                            "move the deterministic points to 1/2"};

  std::vector<double> jitter = draw_jitter(jp, seed);
  ConstructionOutput c = from_task("udce_case_c", jittered_task(jp, jitter, false));
  c.companions.emplace("kappa", PostProcessing::constant(0.5));
  c.expected["udce_lower"] = {eps / 2.0, "predictions stay eps/2 away from 1/2"};
  c.expected["udce_upper"] = {1.5 * eps, "cost of the constant-1/2 witness"};

  ConstructionOutput d = from_task("udce_case_d", jittered_task(jp, jitter, true));
  std::vector<std::pair<double, double>> map;
  for (int j = 0; j < jp.half; ++j) {
    bool det = j < jp.deterministic;
    map.emplace_back(lo + jitter[j], det ? 0.5 : lo);
    map.emplace_back(hi + jitter[jp.half + j], det ? 0.5 : hi);
  }
  std::sort(map.begin(), map.end());
  std::vector<double> points, values;
  for (auto [p, v] : map) {
    points.push_back(p);
    values.push_back(v);
  }
  d.companions.emplace("kappa", PostProcessing::nearest_step(points, values));
  d.expected["witness_cost_upper"] = {3.0 * ep * eps, "cost bound for the companion kappa"};

  return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

}  // namespace calib
