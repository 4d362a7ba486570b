#include "calib/postprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"
#include "calib/pld.hpp"

namespace calib {

namespace {

void check_value(double v) {
  if (!(v >= -kValueTolerance && v <= 1.0 + kValueTolerance)) {
    throw Error(ErrorCode::RangeViolation,
                "post-processing value " + std::to_string(v) + " outside [0,1]");
  }
}

}  // namespace

PostProcessing PostProcessing::make(std::vector<Piece> pieces) {
  if (pieces.empty()) throw Error(ErrorCode::InvalidArgument, "no pieces");
  for (const auto& pc : pieces) {
    if (!std::isfinite(pc.lo) || !std::isfinite(pc.hi) || !std::isfinite(pc.slope) ||
        !std::isfinite(pc.intercept)) {
      throw Error(ErrorCode::NonFinite, "non-finite piece");
    }
    if (pc.lo > pc.hi || pc.lo < -kValueTolerance || pc.hi > 1.0 + kValueTolerance) {
      throw Error(ErrorCode::InvalidArgument, "piece bounds must satisfy 0 <= lo <= hi <= 1");
    }
    check_value(pc.at(pc.lo));
    check_value(pc.at(pc.hi));
  }
  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.is_point() && !b.is_point();
  });

  double edge = 0.0;
  bool any_interval = false;
  for (auto& pc : pieces) {
    if (pc.is_point()) {
      pc.lo = pc.hi = std::clamp(pc.lo, 0.0, 1.0);
      continue;
    }
    if (std::abs(pc.lo - edge) > kValueTolerance) {
      throw Error(ErrorCode::InvalidArgument, "pieces do not tile [0,1]");
    }
    pc.lo = edge;
    edge = pc.hi;
    any_interval = true;
  }
  if (!any_interval || std::abs(edge - 1.0) > kValueTolerance) {
    throw Error(ErrorCode::InvalidArgument, "pieces do not reach 1");
  }
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
    if (!it->is_point()) {
      it->hi = 1.0;
      break;
    }
  }
  return PostProcessing(std::move(pieces));
}

PostProcessing PostProcessing::identity() { return make({{0.0, 1.0, 1.0, 0.0}}); }

PostProcessing PostProcessing::constant(double value) { return make({{0.0, 1.0, 0.0, value}}); }

PostProcessing PostProcessing::nearest_step(const std::vector<double>& points,
                                            const std::vector<double>& values) {
  if (points.empty() || points.size() != values.size()) {
    throw Error(ErrorCode::DimensionMismatch, "points and values differ in length");
  }
  std::vector<Piece> pieces;
  double lo = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0 && !(points[i] > points[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "step points must be strictly increasing");
    }
    double hi = i + 1 < points.size() ? 0.5 * (points[i] + points[i + 1]) : 1.0;
    pieces.push_back({lo, hi, 0.0, values[i]});
    lo = hi;
  }
  // A break can collapse onto 0 when the first two points straddle it tightly.
  std::erase_if(pieces, [](const Piece& pc) { return pc.lo == pc.hi; });
  return make(std::move(pieces));
}

double PostProcessing::operator()(double t) const {
  for (const auto& pc : pieces_) {
    if (pc.is_point() && pc.lo == t) return std::clamp(pc.at(t), 0.0, 1.0);
  }
  const Piece* hit = nullptr;
  for (const auto& pc : pieces_) {
    if (pc.is_point()) continue;
    if (t >= pc.lo || hit == nullptr) hit = &pc;
    if (t < pc.hi) break;
  }
  return std::clamp(hit->at(t), 0.0, 1.0);
}

}  // namespace calib
