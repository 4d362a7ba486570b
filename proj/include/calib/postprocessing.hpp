#pragma once

#include <vector>

namespace calib {

// One linear piece of a post-processing map, active on [lo, hi).
// A piece with lo == hi pins the value at a single point and takes
// precedence over the interval pieces around it.
struct Piece {
  double lo = 0.0;
  double hi = 1.0;
  double slope = 0.0;
  double intercept = 0.0;

  double at(double t) const { return slope * t + intercept; }
  bool is_point() const { return lo == hi; }
};

// Piecewise-linear map [0,1] -> [0,1]. Interval pieces tile [0,1] in order;
// the last one is closed on the right.
class PostProcessing {
 public:
  static PostProcessing make(std::vector<Piece> pieces);
  static PostProcessing identity();
  static PostProcessing constant(double value);

  // Piecewise-constant map sending each of the sorted `points` to the matching
  // entry of `values`; breaks sit halfway between consecutive points.
  static PostProcessing nearest_step(const std::vector<double>& points,
                                     const std::vector<double>& values);

  double operator()(double t) const;
  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  explicit PostProcessing(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {}
  std::vector<Piece> pieces_;
};

}  // namespace calib
