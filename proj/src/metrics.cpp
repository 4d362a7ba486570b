#include "calib/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "calib/error.hpp"
#include "calib/lp.hpp"
#include "calib/partition.hpp"
#include "calib/transport.hpp"

namespace calib {

namespace {

constexpr double kPricingTolerance = 1e-10;
constexpr std::size_t kColumnsPerRound = 10;

// E[y - p] mass at each distinct prediction.
std::vector<double> bias_masses(const std::vector<ValueMass>& values) {
  std::vector<double> c;
  for (const auto& v : values) c.push_back(v.mass1 * (1.0 - v.p) - v.mass0 * v.p);
  return c;
}

std::vector<double> candidate_grid(const Pld& pld, double h) {
  if (!(h > 0.0 && h <= 0.1)) {
    throw Error(ErrorCode::InvalidArgument, "grid step must lie in (0, 0.1]");
  }
  std::vector<double> grid;
  auto steps = static_cast<long>(std::ceil(1.0 / h - 1e-9));
  for (long k = 0; k <= steps; ++k) grid.push_back(std::min(1.0, static_cast<double>(k) * h));
  for (const auto& a : pld.atoms()) grid.push_back(a.p);
  std::sort(grid.begin(), grid.end());
  std::vector<double> out;
  for (double g : grid) {
    if (out.empty() || g - out.back() > kValueTolerance) out.push_back(g);
  }
  return out;
}

// Source-to-(g, b) transport with a calibration row for every active grid point,
// optionally fixing the target's label-1 mass.
class GridTransport {
 public:
  GridTransport(const Pld& pld, double h, bool fix_tau)
      : atoms_(pld.atoms()), grid_(candidate_grid(pld, h)), fix_tau_(fix_tau) {
    double total = pld.total_mass();
    for (const auto& a : atoms_) mass_.push_back(a.mass / total);
    target_tau_ = tau(pld) / total;
    active_.assign(grid_.size(), 0);
  }

  double solve(GridSolve mode) {
    if (mode == GridSolve::Full) {
      std::fill(active_.begin(), active_.end(), 1);
    } else {
      for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (grid_[k] == 0.0 || grid_[k] == 1.0 || is_support(grid_[k])) active_[k] = 1;
      }
    }
    while (true) {
      LpSolution sol = solve_master();
      if (mode == GridSolve::Full) return sol.objective;
      if (!add_violated_columns(sol.duals)) return sol.objective;
    }
  }

 private:
  bool is_support(double g) const {
    return std::any_of(atoms_.begin(), atoms_.end(), [&](const Atom& a) { return a.p == g; });
  }

  static double calibration_coef(double g, int b) { return b == 1 ? 1.0 - g : -g; }

  LpSolution solve_master() {
    LpProblem lp;
    for (double m : mass_) lp.add_row(m);
    std::vector<int> cal_row(grid_.size(), -1);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (active_[k]) cal_row[k] = lp.add_row(0.0);
    }
    int tau_row = fix_tau_ ? lp.add_row(target_tau_) : -1;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (!active_[k]) continue;
      double g = grid_[k];
      for (std::size_t i = 0; i < atoms_.size(); ++i) {
        for (int b = 0; b <= 1; ++b) {
          std::vector<std::pair<int, double>> entries{{static_cast<int>(i), 1.0}};
          double coef = calibration_coef(g, b);
          if (coef != 0.0) entries.emplace_back(cal_row[k], coef);
          if (fix_tau_ && b == 1) entries.emplace_back(tau_row, 1.0);
          lp.add_column(ground_cost(atoms_[i], {g, b, 0.0}), std::move(entries));
        }
      }
    }
    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      throw Error(ErrorCode::NumericalFailure, "grid transport LP did not reach an optimum");
    }
    rho_ = fix_tau_ ? sol.duals[tau_row] : 0.0;
    return sol;
  }

  // Smallest t such that some multiplier lambda for g's calibration row keeps
  // every reduced cost of g's columns >= -t.
  double pricing_violation(double g, const std::vector<double>& phi) const {
    struct Line {
      double r;
      double k;
    };
    std::vector<Line> lines;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      for (int b = 0; b <= 1; ++b) {
        double r = ground_cost(atoms_[i], {g, b, 0.0}) - phi[i] - (b == 1 ? rho_ : 0.0);
        lines.push_back({r, calibration_coef(g, b)});
      }
    }
    auto feasible = [&](double t) {
      double lo = -kInfinity;
      double hi = kInfinity;
      for (const auto& ln : lines) {
        double r = ln.r + t;
        if (ln.k > 0.0) {
          hi = std::min(hi, r / ln.k);
        } else if (ln.k < 0.0) {
          lo = std::max(lo, r / ln.k);
        } else if (r < 0.0) {
          return false;
        }
      }
      return lo <= hi;
    };
    if (feasible(kPricingTolerance)) return 0.0;
    double lo = kPricingTolerance;
    double hi = kPricingTolerance;
    for (const auto& ln : lines) hi = std::max(hi, -ln.r + kPricingTolerance);
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
      double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
  }

  bool add_violated_columns(const std::vector<double>& duals) {
    std::vector<double> phi(duals.begin(), duals.begin() + static_cast<long>(atoms_.size()));
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      if (active_[k]) continue;
      double v = pricing_violation(grid_[k], phi);
      if (v > 0.0) violated.emplace_back(v, k);
    }
    if (violated.empty()) return false;
    std::size_t take = std::min(kColumnsPerRound, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + static_cast<long>(take), violated.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t j = 0; j < take; ++j) active_[violated[j].second] = 1;
    return true;
  }

  const std::vector<Atom>& atoms_;
  std::vector<double> grid_;
  bool fix_tau_;
  std::vector<double> mass_;
  double target_tau_ = 0.0;
  std::vector<char> active_;
  double rho_ = 0.0;
};

std::vector<PartitionItem> value_items(const std::vector<ValueMass>& values) {
  std::vector<PartitionItem> items;
  for (const auto& v : values) items.push_back({v.mass(), v.conditional_mean(), v.p});
  return items;
}

PostProcessing step_from_blocks(const std::vector<ValueMass>& values,
                                const std::vector<int>& block_of,
                                const std::vector<double>& block_target) {
  std::vector<double> points, targets;
  for (std::size_t i = 0; i < values.size(); ++i) {
    points.push_back(values[i].p);
    targets.push_back(std::clamp(block_target[block_of[i]], 0.0, 1.0));
  }
  return PostProcessing::nearest_step(points, targets);
}

}  // namespace

SmceResult smce(const Pld& pld) {
  auto values = by_value(pld);
  std::vector<double> c = bias_masses(values);
  std::size_t n = values.size();
  LpProblem lp;
  for (std::size_t i = 0; i < n; ++i) lp.add_column(-c[i], {}, -1.0, 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double gap = values[i + 1].p - values[i].p;
    int up = lp.add_row(gap);
    int down = lp.add_row(gap);
    lp.columns[i + 1].entries.emplace_back(up, 1.0);
    lp.columns[i].entries.emplace_back(up, -1.0);
    lp.columns[i].entries.emplace_back(down, 1.0);
    lp.columns[i + 1].entries.emplace_back(down, -1.0);
    lp.add_column(0.0, {{up, 1.0}});
    lp.add_column(0.0, {{down, 1.0}});
  }
  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw Error(ErrorCode::NumericalFailure, "smooth calibration LP did not reach an optimum");
  }
  SmceResult out;
  for (std::size_t i = 0; i < n; ++i) {
    out.support.push_back(values[i].p);
    out.witness.push_back(sol.x[i]);
  }
  out.value = std::max(0.0, -sol.objective);
  return out;
}

double smce_bruteforce(const Pld& pld, double step) {
  auto values = by_value(pld);
  if (values.size() > kMaxBruteForceSupport) {
    throw Error(ErrorCode::SupportTooLarge,
                std::to_string(values.size()) + " support points exceeds the brute-force limit");
  }
  if (!(step > 0.0 && step <= 1.0)) throw Error(ErrorCode::InvalidArgument, "step not in (0,1]");
  std::vector<double> c = bias_masses(values);
  auto count = static_cast<std::size_t>(std::floor(2.0 / step + 1e-9)) + 1;
  auto level = [&](std::size_t k) { return -1.0 + static_cast<double>(k) * step; };

  // best[k]: maximum over feasible grid tuples of the prefix with psi_i = level(k).
  std::vector<double> best(count);
  for (std::size_t k = 0; k < count; ++k) best[k] = c[0] * level(k);
  for (std::size_t i = 1; i < values.size(); ++i) {
    auto reach = static_cast<std::size_t>(
        std::floor((values[i].p - values[i - 1].p) / step + 1e-9));
    std::vector<double> next(count);
    std::deque<std::size_t> window;  // indices with decreasing best[]
    std::size_t right = 0;
    for (std::size_t k = 0; k < count; ++k) {
      while (right < count && right <= k + reach) {
        while (!window.empty() && best[window.back()] <= best[right]) window.pop_back();
        window.push_back(right++);
      }
      while (window.front() + reach < k) window.pop_front();
      next[k] = best[window.front()] + c[i] * level(k);
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

double demc(const Pld& pld, double h, GridSolve mode) {
  GridTransport lp(pld, h, false);
  return std::max(0.0, lp.solve(mode));
}

double ldce(const Pld& pld, double h, GridSolve mode) {
  GridTransport lp(pld, h, true);
  return std::max(0.0, lp.solve(mode));
}

double dce_marginal_preserving(const Pld& pld) {
  return wasserstein(pld, relabel_bernoulli(pld)).value;
}

UdceResult udce_exact(const Pld& pld) {
  auto values = by_value(pld);
  auto items = value_items(values);
  PartitionResult best = min_cost_partition(items);
  return {best.cost, step_from_blocks(values, best.block_of, best.block_target), true};
}

UdceResult udce_greedy_upper(const Pld& pld) {
  auto values = by_value(pld);
  auto items = value_items(values);
  // Contiguous runs over the sorted support, described by their start indices.
  std::vector<std::size_t> starts(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) starts[i] = i;
  auto run_target = [&](std::size_t lo, std::size_t hi) {
    double weight = 0.0, moment = 0.0;
    for (std::size_t j = lo; j < hi; ++j) {
      weight += items[j].weight;
      moment += items[j].weight * items[j].target;
    }
    return weight > 0.0 ? moment / weight : items[lo].target;
  };
  auto run_cost = [&](std::size_t lo, std::size_t hi) {
    double t = run_target(lo, hi);
    double cost = 0.0;
    for (std::size_t j = lo; j < hi; ++j) cost += items[j].weight * std::abs(items[j].value - t);
    return cost;
  };
  auto end_of = [&](std::size_t r) { return r + 1 < starts.size() ? starts[r + 1] : items.size(); };
  while (starts.size() > 1) {
    double best_gain = 1e-15;
    std::size_t best = 0;
    for (std::size_t r = 0; r + 1 < starts.size(); ++r) {
      double split = run_cost(starts[r], end_of(r)) + run_cost(starts[r + 1], end_of(r + 1));
      double gain = split - run_cost(starts[r], end_of(r + 1));
      if (gain > best_gain) {
        best_gain = gain;
        best = r + 1;
      }
    }
    if (best == 0) break;
    starts.erase(starts.begin() + static_cast<long>(best));
  }
  std::vector<int> block_of(items.size());
  std::vector<double> targets;
  double cost = 0.0;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    for (std::size_t j = starts[r]; j < end_of(r); ++j) block_of[j] = static_cast<int>(r);
    targets.push_back(run_target(starts[r], end_of(r)));
    cost += run_cost(starts[r], end_of(r));
  }
  return {cost, step_from_blocks(values, block_of, targets), false};
}

double udce_witness_cost(const Pld& pld, const PostProcessing& kappa) {
  if (!is_calibrated(apply_postprocessing(pld, kappa), 1e-8)) {
    throw Error(ErrorCode::NotCalibratedWitness, "kappa does not calibrate the PLD");
  }
  double cost = 0.0;
  for (const auto& a : pld.atoms()) cost += a.mass * std::abs(kappa(a.p) - a.p);
  return cost;
}

double true_dce(const FinitePredictionTask& task) {
  std::vector<PartitionItem> items;
  for (const auto& pt : task.points) items.push_back({pt.weight, pt.bayes, pt.prediction});
  return min_cost_partition(items).cost;
}

}  // namespace calib
