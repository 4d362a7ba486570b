#include "calib/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "calib/constructions.hpp"
#include "calib/error.hpp"
#include "calib/metrics.hpp"
#include "calib/rng.hpp"

namespace calib {

namespace {

struct TrialOutcome {
  bool case_d = false;
  bool said_d = false;
  bool collision = false;
  int ones = 0;
};

bool decide_case_d(const DistinguishConfig& cfg, std::vector<std::pair<double, int>>& draws) {
  std::sort(draws.begin(), draws.end());
  double eps = cfg.eps;
  double det = 2.0 * eps / (1.0 + 2.0 * eps);  // share of deterministic points per side
  double llr = 0.0;
  for (std::size_t i = 0; i < draws.size();) {
    std::size_t j = i;
    int ones = 0;
    while (j < draws.size() && draws[j].first == draws[i].first) ones += draws[j++].second;
    int n = static_cast<int>(j - i);
    int zeros = n - ones;
    bool left = draws[i].first < 0.5;
    i = j;
    // A lone sample has probability 1/2 for either label under both cases.
    if (n < 2) continue;
    if (cfg.rule == Distinguisher::PatternMatch) {
      if ((left && zeros == 0) || (!left && ones == 0)) return true;
      continue;
    }
    double toward = left ? 0.5 - eps : 0.5 + eps;  // P(y = 1) on a random-label point
    bool pattern = left ? zeros == 0 : ones == 0;
    double p_d = (pattern ? det : 0.0) +
                 (1.0 - det) * std::pow(toward, ones) * std::pow(1.0 - toward, zeros);
    llr += std::log(p_d) + n * std::log(2.0);
  }
  return llr > 0.0;
}

TrialOutcome run_trial(const DistinguishConfig& cfg, int t) {
  SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t)));
  TrialOutcome out;
  out.case_d = rng.bernoulli(0.5);
  std::uint64_t task_seed = rng.next();
  FinitePredictionTask task =
      udce_jittered_task(cfg.eps, cfg.k, task_seed, out.case_d, cfg.jitter_halfwidth);
  std::vector<std::pair<double, int>> draws;
  draws.reserve(static_cast<std::size_t>(cfg.s));
  for (int i = 0; i < cfg.s; ++i) {
    const TaskPoint& pt = task.points[rng.below(static_cast<std::uint64_t>(cfg.k))];
    int y = rng.bernoulli(pt.bayes) ? 1 : 0;
    draws.emplace_back(pt.prediction, y);
    out.ones += y;
  }
  out.said_d = decide_case_d(cfg, draws);
  out.collision = std::adjacent_find(draws.begin(), draws.end(), [](const auto& a, const auto& b) {
                    return a.first == b.first;
                  }) != draws.end();
  return out;
}

void check_config(const DistinguishConfig& cfg) {
  if (cfg.s < 1 || cfg.trials < 1) {
    throw Error(ErrorCode::ParameterConstraint, "need at least one sample and one trial");
  }
  // Surface parameter errors here rather than inside the parallel loop.
  udce_jittered_task(cfg.eps, cfg.k, cfg.seed, false, cfg.jitter_halfwidth);
}

DistinguishReport summarize(const DistinguishConfig& cfg, const std::vector<TrialOutcome>& outs) {
  DistinguishReport r;
  r.trials = cfg.trials;
  long collisions = 0;
  for (const auto& o : outs) {
    r.correct += o.said_d == o.case_d ? 1 : 0;
    collisions += o.collision ? 1 : 0;
    if (o.case_d && !o.collision) {
      r.clean_d_samples += cfg.s;
      r.clean_d_ones += o.ones;
    }
  }
  double n = static_cast<double>(cfg.trials);
  double acc = static_cast<double>(r.correct) / n;
  r.advantage = std::abs(2.0 * acc - 1.0);
  r.collision_rate = static_cast<double>(collisions) / n;
  r.ci_halfwidth = 1.96 * 2.0 * std::sqrt(acc * (1.0 - acc) / n);
  return r;
}

}  // namespace

SampleSet sample(const Pld& pld, std::size_t n, std::uint64_t seed) {
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& a : pld.atoms()) cumulative.push_back(total += a.mass);
  SplitMix64 rng(seed);
  SampleSet out;
  out.seed = seed;
  out.source = "pld";
  out.draws.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min<std::size_t>(it - cumulative.begin(), pld.size() - 1);
    out.draws.emplace_back(pld.atoms()[idx].p, pld.atoms()[idx].y);
  }
  return out;
}

Pld empirical_pld(const SampleSet& samples) {
  if (samples.draws.empty()) throw Error(ErrorCode::InvalidArgument, "no samples");
  std::map<std::pair<double, int>, long> counts;
  for (const auto& d : samples.draws) ++counts[d];
  double n = static_cast<double>(samples.draws.size());
  std::vector<Atom> atoms;
  for (const auto& [key, count] : counts) atoms.push_back({key.first, key.second, count / n});
  return Pld::make(std::move(atoms));
}

double smce_estimate(const SampleSet& samples) { return smce(empirical_pld(samples)).value; }

DistinguishReport udce_distinguish_experiment(const DistinguishConfig& config) {
  check_config(config);
  std::vector<TrialOutcome> outs(static_cast<std::size_t>(config.trials));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < config.trials; ++t) outs[t] = run_trial(config, t);
  return summarize(config, outs);
}

DistinguishReport udce_distinguish_experiment_serial(const DistinguishConfig& config) {
  check_config(config);
  std::vector<TrialOutcome> outs(static_cast<std::size_t>(config.trials));
  for (int t = 0; t < config.trials; ++t) outs[t] = run_trial(config, t);
  return summarize(config, outs);
}

}  // namespace calib
