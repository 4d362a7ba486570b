#include "calib/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "calib/error.hpp"

namespace calib {

namespace {

// How an original variable is expressed through non-negative tableau columns.
enum class VarKind { Shifted, Reflected, Split };

struct VarMap {
  VarKind kind = VarKind::Shifted;
  int column = -1;
  int second = -1;  // negative part for Split
  double offset = 0.0;
};

class Simplex {
 public:
  Simplex(const LpProblem& problem, const LpOptions& options)
      : problem_(problem), options_(options) {}

  LpSolution run();

 private:
  double& cell(std::size_t r, std::size_t c) { return tab_[r * stride_ + c]; }
  double& rhs(std::size_t r) { return tab_[r * stride_ + cols_]; }

  void build();
  void pivot(std::size_t r, std::size_t s);
  // Returns false if the phase is unbounded.
  bool optimize(std::size_t allowed_cols);
  int choose_entering(std::size_t allowed_cols, bool bland);
  int ratio_test(std::size_t s, bool bland);
  void load_objective(const std::vector<double>& cost);

  const LpProblem& problem_;
  const LpOptions& options_;

  std::vector<VarMap> vars_;
  std::vector<double> std_cost_;
  std::vector<double> row_sign_;
  std::size_t orig_rows_ = 0;
  std::size_t rows_ = 0;
  std::size_t std_cols_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<double> tab_;
  std::vector<double> obj_;  // reduced costs, last entry is -objective
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<std::size_t> nz_;
  int iterations_ = 0;
  double rhs_scale_ = 1.0;
};

void Simplex::build() {
  orig_rows_ = problem_.num_rows();
  std::vector<double> b = problem_.rhs;
  for (auto& col : problem_.columns) {
    for (auto [r, a] : col.entries) {
      if (r < 0 || static_cast<std::size_t>(r) >= orig_rows_) {
        throw Error(ErrorCode::DimensionMismatch, "column entry refers to a missing row");
      }
      (void)a;
    }
  }

  struct StdCol {
    double cost;
    std::vector<std::pair<std::size_t, double>> entries;
  };
  std::vector<StdCol> std_cols;
  std::vector<std::pair<std::size_t, double>> bound_rows;  // (std column, rhs)

  auto entries_of = [](const LpColumn& col, double sign) {
    std::vector<std::pair<std::size_t, double>> e;
    for (auto [r, a] : col.entries) e.emplace_back(static_cast<std::size_t>(r), sign * a);
    return e;
  };
  auto shift_rhs = [&](const LpColumn& col, double value) {
    for (auto [r, a] : col.entries) b[r] -= a * value;
  };

  for (const auto& col : problem_.columns) {
    if (std::isnan(col.lower) || std::isnan(col.upper) || col.lower == kInfinity ||
        col.upper == -kInfinity) {
      throw Error(ErrorCode::InvalidArgument, "invalid variable bounds");
    }
    VarMap vm;
    if (std::isfinite(col.lower)) {
      vm.kind = VarKind::Shifted;
      vm.offset = col.lower;
      vm.column = static_cast<int>(std_cols.size());
      std_cols.push_back({col.cost, entries_of(col, 1.0)});
      shift_rhs(col, col.lower);
      if (std::isfinite(col.upper)) bound_rows.emplace_back(vm.column, col.upper - col.lower);
    } else if (std::isfinite(col.upper)) {
      vm.kind = VarKind::Reflected;
      vm.offset = col.upper;
      vm.column = static_cast<int>(std_cols.size());
      std_cols.push_back({-col.cost, entries_of(col, -1.0)});
      shift_rhs(col, col.upper);
    } else {
      vm.kind = VarKind::Split;
      vm.column = static_cast<int>(std_cols.size());
      std_cols.push_back({col.cost, entries_of(col, 1.0)});
      vm.second = static_cast<int>(std_cols.size());
      std_cols.push_back({-col.cost, entries_of(col, -1.0)});
    }
    vars_.push_back(vm);
  }

  // Upper-bound rows x' + s = u - l; the slack s starts basic.
  std::vector<std::size_t> slack_of_bound;
  for (auto& [column, width] : bound_rows) {
    if (width < -options_.feasibility_tolerance) {
      throw Error(ErrorCode::InvalidArgument, "lower bound exceeds upper bound");
    }
    std::size_t row = orig_rows_ + slack_of_bound.size();
    std_cols[column].entries.emplace_back(row, 1.0);
    slack_of_bound.push_back(std_cols.size());
    std_cols.push_back({0.0, {{row, 1.0}}});
    b.push_back(std::max(width, 0.0));
  }

  rows_ = b.size();
  std_cols_ = std_cols.size();
  cols_ = std_cols_ + orig_rows_;
  stride_ = cols_ + 1;
  tab_.assign(rows_ * stride_, 0.0);
  row_sign_.assign(orig_rows_, 1.0);
  for (std::size_t r = 0; r < orig_rows_; ++r) {
    if (b[r] < 0.0) row_sign_[r] = -1.0;
  }
  std_cost_.resize(cols_, 0.0);
  for (std::size_t j = 0; j < std_cols_; ++j) {
    std_cost_[j] = std_cols[j].cost;
    for (auto [r, a] : std_cols[j].entries) {
      cell(r, j) += r < orig_rows_ ? row_sign_[r] * a : a;
    }
  }
  rhs_scale_ = 1.0;
  basis_.assign(rows_, 0);
  in_basis_.assign(cols_, 0);
  for (std::size_t r = 0; r < rows_; ++r) {
    rhs(r) = r < orig_rows_ ? row_sign_[r] * b[r] : b[r];
    rhs_scale_ = std::max(rhs_scale_, std::abs(rhs(r)));
    std::size_t basic = r < orig_rows_ ? std_cols_ + r : slack_of_bound[r - orig_rows_];
    if (r < orig_rows_) cell(r, basic) = 1.0;
    basis_[r] = basic;
    in_basis_[basic] = 1;
  }
}

void Simplex::load_objective(const std::vector<double>& cost) {
  obj_.assign(stride_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j) obj_[j] = cost[j];
  for (std::size_t r = 0; r < rows_; ++r) {
    double cb = cost[basis_[r]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols_; ++j) obj_[j] -= cb * tab_[r * stride_ + j];
  }
  for (std::size_t r = 0; r < rows_; ++r) obj_[basis_[r]] = 0.0;
}

void Simplex::pivot(std::size_t r, std::size_t s) {
  double* prow = &tab_[r * stride_];
  double inv = 1.0 / prow[s];
  nz_.clear();
  for (std::size_t j = 0; j <= cols_; ++j) {
    if (prow[j] != 0.0) {
      prow[j] *= inv;
      nz_.push_back(j);
    }
  }
  prow[s] = 1.0;
  auto eliminate = [&](double* row) {
    double f = row[s];
    if (f == 0.0) return;
    for (std::size_t j : nz_) row[j] -= f * prow[j];
    row[s] = 0.0;
  };
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i != r) eliminate(&tab_[i * stride_]);
  }
  eliminate(obj_.data());
  in_basis_[basis_[r]] = 0;
  basis_[r] = s;
  in_basis_[s] = 1;
}

int Simplex::choose_entering(std::size_t allowed_cols, bool bland) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t j = 0; j < allowed_cols; ++j) {
    if (in_basis_[j] || obj_[j] >= -options_.optimality_tolerance) continue;
    if (bland) return static_cast<int>(j);
    double norm = 1.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      double t = tab_[r * stride_ + j];
      norm += t * t;
    }
    double score = obj_[j] * obj_[j] / norm;
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(j);
    }
  }
  return best;
}

int Simplex::ratio_test(std::size_t s, bool bland) {
  int best = -1;
  double best_ratio = 0.0;
  double best_pivot = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double t = tab_[r * stride_ + s];
    if (t <= options_.pivot_tolerance) continue;
    double ratio = std::max(rhs(r), 0.0) / t;
    if (best < 0 || ratio < best_ratio - 1e-12 * (1.0 + best_ratio)) {
      best = static_cast<int>(r);
      best_ratio = ratio;
      best_pivot = t;
      continue;
    }
    if (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio)) {
      bool better = bland ? basis_[r] < basis_[best] : t > best_pivot;
      if (better) {
        best = static_cast<int>(r);
        best_ratio = std::min(best_ratio, ratio);
        best_pivot = t;
      }
    }
  }
  return best;
}

bool Simplex::optimize(std::size_t allowed_cols) {
  bool bland = false;
  int degenerate_run = 0;
  while (true) {
    if (++iterations_ > options_.max_iterations) {
      throw Error(ErrorCode::NumericalFailure,
                  "simplex exceeded " + std::to_string(options_.max_iterations) + " iterations");
    }
    int s = choose_entering(allowed_cols, bland);
    if (s < 0) return true;
    int r = ratio_test(static_cast<std::size_t>(s), bland);
    if (r < 0) return false;
    double step = std::max(rhs(r), 0.0) / cell(r, s);
    degenerate_run = step <= options_.feasibility_tolerance ? degenerate_run + 1 : 0;
    if (degenerate_run > options_.degenerate_limit) bland = true;
    pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
  }
}

LpSolution Simplex::run() {
  build();
  LpSolution sol;

  std::vector<double> phase1(cols_, 0.0);
  for (std::size_t j = std_cols_; j < cols_; ++j) phase1[j] = 1.0;
  load_objective(phase1);
  optimize(std_cols_);  // phase 1 is bounded below by zero
  double infeasibility = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    if (basis_[r] >= std_cols_) infeasibility += std::max(rhs(r), 0.0);
  }
  if (infeasibility > options_.feasibility_tolerance * rhs_scale_) {
    sol.status = LpStatus::Infeasible;
    sol.iterations = iterations_;
    return sol;
  }

  // Pivot zero-level artificials out; rows where that is impossible are redundant.
  for (std::size_t r = 0; r < rows_; ++r) {
    if (basis_[r] < std_cols_) continue;
    int best = -1;
    double best_abs = options_.pivot_tolerance;
    for (std::size_t j = 0; j < std_cols_; ++j) {
      double a = std::abs(cell(r, j));
      if (!in_basis_[j] && a > best_abs) {
        best_abs = a;
        best = static_cast<int>(j);
      }
    }
    if (best >= 0) pivot(r, static_cast<std::size_t>(best));
  }

  load_objective(std_cost_);
  bool bounded = optimize(std_cols_);
  sol.iterations = iterations_;
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  std::vector<double> xs(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) xs[basis_[r]] = std::max(rhs(r), 0.0);
  sol.status = LpStatus::Optimal;
  sol.x.resize(problem_.num_columns());
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& vm = vars_[j];
    const auto& col = problem_.columns[j];
    double v = 0.0;
    switch (vm.kind) {
      case VarKind::Shifted: v = vm.offset + xs[vm.column]; break;
      case VarKind::Reflected: v = vm.offset - xs[vm.column]; break;
      case VarKind::Split: v = xs[vm.column] - xs[vm.second]; break;
    }
    sol.x[j] = std::clamp(v, col.lower, col.upper);
    sol.objective += col.cost * sol.x[j];
  }
  sol.duals.resize(orig_rows_);
  for (std::size_t r = 0; r < orig_rows_; ++r) {
    sol.duals[r] = -obj_[std_cols_ + r] * row_sign_[r];
  }
  return sol;
}

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  Simplex simplex(problem, options);
  return simplex.run();
}

}  // namespace calib
