#pragma once

#include <optional>
#include <vector>

#include "calib/pld.hpp"

namespace calib {

struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  double density = 0.0;
};

// Law on [0,1] made of atoms at 0 and 1 plus a piecewise-constant density.
struct PiecewisePrediction {
  double atom0 = 0.0;
  double atom1 = 0.0;
  std::vector<DensityPiece> pieces;  // disjoint, increasing

  double total_mass() const;
  double cdf(double t) const;  // P(X <= t)
  double prob_greater(double t) const;
  double prob_less(double t) const;
};

// Law of clip(p + z) with z uniform on [-sigma, sigma].
PiecewisePrediction smooth_point(double p, double sigma);

// P(round(p) <= t) where p is rounded to the nearest point of the grid
// {w + 2 i sigma : i integer}, w uniform on [0, 2 sigma), and the result is
// projected onto [0,1]. Computed by case analysis on the grid cell holding p.
double grid_round_cdf(double p, double sigma, double t);

struct SmoothedPld {
  Pld base;
  double sigma = 0.0;
};

SmoothedPld smooth(const Pld& pld, double sigma);

// Law of the smoothed prediction, over all labels or restricted to label y.
PiecewisePrediction smoothed_law(const SmoothedPld& s);
PiecewisePrediction smoothed_law(const SmoothedPld& s, int y);

struct PosteriorPiece {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

// t -> E[y | smoothed prediction = t], piecewise constant and right-continuous.
struct PosteriorFunction {
  std::optional<double> at0;  // posterior on the atom at 0, when it carries mass
  std::optional<double> at1;
  std::vector<PosteriorPiece> pieces;  // only where the density is positive

  std::optional<double> operator()(double t) const;
};

PosteriorFunction posterior(const SmoothedPld& s);

}  // namespace calib
