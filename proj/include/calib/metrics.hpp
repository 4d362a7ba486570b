#pragma once

#include <cstddef>
#include <vector>

#include "calib/pld.hpp"
#include "calib/postprocessing.hpp"

namespace calib {

inline constexpr std::size_t kMaxBruteForceSupport = 6;
inline constexpr double kDefaultGridStep = 1e-3;

struct SmceResult {
  double value = 0.0;
  std::vector<double> support;  // distinct predictions, increasing
  std::vector<double> witness;  // Lipschitz test function on the support
};

// Smooth calibration error: max over 1-Lipschitz psi: [0,1] -> [-1,1] of
// E[psi(p) (y - p)], solved as an LP over psi's values on the support.
SmceResult smce(const Pld& pld);

// Maximum of the same objective over psi restricted to the grid
// {-1, -1 + step, ..., 1}^n. Throws SupportTooLarge above kMaxBruteForceSupport.
double smce_bruteforce(const Pld& pld, double step);

enum class GridSolve { ColumnGeneration, Full };

// Lower distance to calibration via a grid of candidate target predictions
// {0, h, ..., 1} plus the support. The returned value v satisfies
// dEMC <= v <= dEMC + h.
double demc(const Pld& pld, double h = kDefaultGridStep,
            GridSolve mode = GridSolve::ColumnGeneration);

// As demc, with the target's label-1 mass pinned to tau(pld).
double ldce(const Pld& pld, double h = kDefaultGridStep,
            GridSolve mode = GridSolve::ColumnGeneration);

// Transport cost from pld to its Bernoulli relabeling.
double dce_marginal_preserving(const Pld& pld);

struct UdceResult {
  double value = 0.0;
  PostProcessing kappa = PostProcessing::identity();
  bool exact = true;
};

// Minimum of E|kappa(p) - p| over post-processings kappa making the PLD
// calibrated, by exhaustive enumeration of groupings of the support
// (at most kMaxPartitionItems distinct predictions).
UdceResult udce_exact(const Pld& pld);

// Upper bound from greedily merging adjacent support values. Not exact.
UdceResult udce_greedy_upper(const Pld& pld);

// E|kappa(p) - p| for a kappa that must calibrate the PLD (tolerance 1e-8).
double udce_witness_cost(const Pld& pld, const PostProcessing& kappa);

// Distance from the predictor to the nearest calibrated predictor on the same
// domain, by enumerating groupings of domain points (at most kMaxPartitionItems).
double true_dce(const FinitePredictionTask& task);

}  // namespace calib
