#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "calib/losses.hpp"
#include "calib/pld.hpp"
#include "calib/postprocessing.hpp"

namespace calib {

// Joint law of two predictions sharing one label.
struct CouplingEntry {
  double p = 0.0;
  double q = 0.0;
  int y = 0;
  double mass = 0.0;
};

struct CouplingTable {
  std::vector<CouplingEntry> entries;
};

using Companion = std::variant<Pld, FinitePredictionTask, VMixtureLoss, PostProcessing, CouplingTable>;

struct ExpectedValue {
  double value = 0.0;
  std::string note;
};

struct ConstructionOutput {
  std::string name;
  std::optional<FinitePredictionTask> task;
  Pld pld;
  std::map<std::string, Companion> companions;
  std::map<std::string, ExpectedValue> expected;
};

// Mass 1/4 on each of (1/2 -+ eps, 0) and (1/2 -+ eps, 1).
ConstructionOutput almost_balanced(double eps);

// Two equally likely points with labels 0 and 1; a good, a bad and a constant-1/2 predictor.
ConstructionOutput two_point_family(double eps);

// p predicts 1/2 +- eps on the wrong side, q = 1 - p on the right side.
ConstructionOutput smoothing_necessity(double eps);

// Calibrated constant-1/2 predictor against a benchmark at 1/2 +- eps matched to y.
ConstructionOutput lb1(double eps, std::optional<double> sigma = std::nullopt);

// Mixture where every post-processing of the smoothed predictor leaves regret
// of order sigma + eps / sigma. Requires 0 < eps <= sigma <= 1/12.
ConstructionOutput lb2(double eps, double sigma);

struct UdceCases {
  ConstructionOutput a, b, c, d;
};

// Default half-width of the jitter added to the case (c)/(d) predictions.
inline double default_jitter_halfwidth(double eps) { return eps * eps / 2.0; }

// Four tasks with identical prediction-label marginals in pairs (a, b) and,
// absent repeated samples, (c, d). Requires eps in (0, 1/2), k even and
// eps k / (1 + 2 eps) an integer; jitter half-width in (0, eps / 2].
UdceCases udce_cases(double eps, int k, std::uint64_t seed,
                     std::optional<double> jitter_halfwidth = std::nullopt);

// Only the case (c) or case (d) task, as drawn by udce_cases with the same arguments.
FinitePredictionTask udce_jittered_task(double eps, int k, std::uint64_t seed, bool case_d,
                                        std::optional<double> jitter_halfwidth = std::nullopt);

}  // namespace calib
