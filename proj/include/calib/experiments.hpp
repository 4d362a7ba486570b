#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calib/pld.hpp"

namespace calib {

struct SampleSet {
  std::vector<std::pair<double, int>> draws;  // (prediction, label)
  std::uint64_t seed = 0;
  std::string source;
};

// n i.i.d. draws by inverse CDF over the PLD's canonical atom order.
SampleSet sample(const Pld& pld, std::size_t n, std::uint64_t seed);

Pld empirical_pld(const SampleSet& samples);
double smce_estimate(const SampleSet& samples);

enum class Distinguisher {
  // Sign of the log-likelihood ratio of case (d) against case (c), computed
  // from the labels of every group of samples sharing a prediction.
  LikelihoodRatio,
  // Says (d) as soon as a group's labels look like a deterministic row of
  // case (d): all ones below 1/2 or all zeros above it.
  PatternMatch,
};

struct DistinguishConfig {
  double eps = 0.125;
  int k = 100;
  int s = 10;
  int trials = 100;
  std::uint64_t seed = 0;
  std::optional<double> jitter_halfwidth;
  Distinguisher rule = Distinguisher::LikelihoodRatio;
};

struct DistinguishReport {
  double advantage = 0.0;       // |2 P(correct) - 1|
  double collision_rate = 0.0;  // fraction of trials with a repeated prediction
  int trials = 0;
  double ci_halfwidth = 0.0;    // 95% normal interval on the advantage
  long correct = 0;
  // Label counts over collision-free case (d) trials.
  long clean_d_samples = 0;
  long clean_d_ones = 0;
};

// Each trial flips a fair coin between the case (c) and (d) tasks, draws fresh
// jitter, takes s samples and asks the distinguisher which case produced them.
// Trials run in parallel; the result is identical to the serial version.
DistinguishReport udce_distinguish_experiment(const DistinguishConfig& config);
DistinguishReport udce_distinguish_experiment_serial(const DistinguishConfig& config);

}  // namespace calib
