#include "calib/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "calib/error.hpp"

namespace calib {

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "sigma must lie in (0, 1]");
  }
}

std::vector<double> breakpoints(const std::vector<Atom>& atoms, double sigma) {
  std::vector<double> pts{0.0, 1.0};
  for (const auto& a : atoms) {
    pts.push_back(std::clamp(a.p - sigma, 0.0, 1.0));
    pts.push_back(std::clamp(a.p + sigma, 0.0, 1.0));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool covers(const Atom& a, double sigma, double t) { return std::abs(t - a.p) < sigma; }

PiecewisePrediction mixture_law(const std::vector<Atom>& atoms, double sigma) {
  PiecewisePrediction law;
  for (const auto& a : atoms) {
    law.atom0 += a.mass * std::max(0.0, sigma - a.p) / (2.0 * sigma);
    law.atom1 += a.mass * std::max(0.0, a.p + sigma - 1.0) / (2.0 * sigma);
  }
  auto pts = breakpoints(atoms, sigma);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double mid = 0.5 * (pts[k] + pts[k + 1]);
    double density = 0.0;
    for (const auto& a : atoms) {
      if (covers(a, sigma, mid)) density += a.mass / (2.0 * sigma);
    }
    if (density > 0.0) law.pieces.push_back({pts[k], pts[k + 1], density});
  }
  return law;
}

}  // namespace

double PiecewisePrediction::total_mass() const {
  double total = atom0 + atom1;
  for (const auto& pc : pieces) total += pc.density * (pc.hi - pc.lo);
  return total;
}

double PiecewisePrediction::cdf(double t) const {
  if (t < 0.0) return 0.0;
  double total = atom0;
  for (const auto& pc : pieces) total += pc.density * (std::clamp(t, pc.lo, pc.hi) - pc.lo);
  if (t >= 1.0) total += atom1;
  return total;
}

double PiecewisePrediction::prob_greater(double t) const { return total_mass() - cdf(t); }

double PiecewisePrediction::prob_less(double t) const {
  if (t <= 0.0) return 0.0;
  double total = atom0;
  for (const auto& pc : pieces) total += pc.density * (std::clamp(t, pc.lo, pc.hi) - pc.lo);
  if (t > 1.0) total += atom1;
  return total;
}

PiecewisePrediction smooth_point(double p, double sigma) {
  check_sigma(sigma);
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::AtomOutOfRange, "prediction not in [0,1]");
  PiecewisePrediction law;
  law.atom0 = std::max(0.0, sigma - p) / (2.0 * sigma);
  law.atom1 = std::max(0.0, p + sigma - 1.0) / (2.0 * sigma);
  law.pieces.push_back({std::max(0.0, p - sigma), std::min(1.0, p + sigma), 1.0 / (2.0 * sigma)});
  return law;
}

double grid_round_cdf(double p, double sigma, double t) {
  check_sigma(sigma);
  if (t < 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // With u = (p - w) mod 2 sigma, p lies u above the cell's lower grid point.
  // It rounds down by u when u < sigma, and up by 2 sigma - u otherwise.
  // Projection onto [0,1] preserves the event {rounded <= t} for t in [0,1).
  double s = t - p;
  double round_down = sigma - std::clamp(-s, 0.0, sigma);
  double round_up = 2.0 * sigma - std::clamp(2.0 * sigma - s, sigma, 2.0 * sigma);
  return (round_down + round_up) / (2.0 * sigma);
}

SmoothedPld smooth(const Pld& pld, double sigma) {
  check_sigma(sigma);
  return {pld, sigma};
}

PiecewisePrediction smoothed_law(const SmoothedPld& s) {
  return mixture_law(s.base.atoms(), s.sigma);
}

PiecewisePrediction smoothed_law(const SmoothedPld& s, int y) {
  std::vector<Atom> atoms;
  for (const auto& a : s.base.atoms()) {
    if (a.y == y) atoms.push_back(a);
  }
  return mixture_law(atoms, s.sigma);
}

std::optional<double> PosteriorFunction::operator()(double t) const {
  if (t == 0.0 && at0) return at0;
  if (t == 1.0 && at1) return at1;
  for (const auto& pc : pieces) {
    if (t >= pc.lo && (t < pc.hi || (t == 1.0 && pc.hi == 1.0))) return pc.value;
  }
  return std::nullopt;
}

PosteriorFunction posterior(const SmoothedPld& s) {
  const auto& atoms = s.base.atoms();
  double sigma = s.sigma;
  PosteriorFunction post;
  double edge_mass[2][2] = {{0.0, 0.0}, {0.0, 0.0}};  // [edge][label]
  for (const auto& a : atoms) {
    edge_mass[0][a.y] += a.mass * std::max(0.0, sigma - a.p);
    edge_mass[1][a.y] += a.mass * std::max(0.0, a.p + sigma - 1.0);
  }
  for (int e = 0; e < 2; ++e) {
    double total = edge_mass[e][0] + edge_mass[e][1];
    if (total > 0.0) (e == 0 ? post.at0 : post.at1) = edge_mass[e][1] / total;
  }
  auto pts = breakpoints(atoms, sigma);
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double mid = 0.5 * (pts[k] + pts[k + 1]);
    double total = 0.0, ones = 0.0;
    for (const auto& a : atoms) {
      if (!covers(a, sigma, mid)) continue;
      total += a.mass;
      if (a.y == 1) ones += a.mass;
    }
    if (total > 0.0) post.pieces.push_back({pts[k], pts[k + 1], ones / total});
  }
  return post;
}

}  // namespace calib
