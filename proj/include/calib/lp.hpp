#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace calib {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpColumn {
  double cost = 0.0;
  double lower = 0.0;
  double upper = kInfinity;
  std::vector<std::pair<int, double>> entries;  // (row, coefficient)
};

// minimize c.x subject to A x = b and lower <= x <= upper, with A stored by column.
struct LpProblem {
  std::vector<double> rhs;
  std::vector<LpColumn> columns;

  int add_row(double b) {
    rhs.push_back(b);
    return static_cast<int>(rhs.size()) - 1;
  }
  int add_column(double cost, std::vector<std::pair<int, double>> entries, double lower = 0.0,
                 double upper = kInfinity) {
    columns.push_back({cost, lower, upper, std::move(entries)});
    return static_cast<int>(columns.size()) - 1;
  }
  std::size_t num_rows() const { return rhs.size(); }
  std::size_t num_columns() const { return columns.size(); }
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  // one per equality row, valid when Optimal
  int iterations = 0;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double feasibility_tolerance = 1e-9;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_limit = 50;
  int max_iterations = 200000;
};

// Two-phase dense tableau simplex. Steepest-edge pricing, with Bland's rule
// taking over after a run of degenerate pivots. Throws NumericalFailure when
// the iteration cap is hit.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace calib
