#pragma once

#include <cstddef>
#include <vector>

#include "calib/pld.hpp"

namespace calib {

struct PlanEntry {
  std::size_t source = 0;  // index into the source PLD's atoms
  std::size_t target = 0;  // index into the target PLD's atoms
  double mass = 0.0;
};

struct TransportResult {
  double value = 0.0;
  std::vector<PlanEntry> plan;
};

// Ground metric on prediction-label pairs.
inline double ground_cost(const Atom& a, const Atom& b) {
  return (a.p > b.p ? a.p - b.p : b.p - a.p) + (a.y != b.y ? 1.0 : 0.0);
}

// Optimal transport cost between two PLDs under ground_cost.
TransportResult wasserstein(const Pld& mu, const Pld& nu);

// Same, with couplings restricted to keep labels fixed. Requires equal tau.
TransportResult wasserstein_label_preserving(const Pld& mu, const Pld& nu);

}  // namespace calib
