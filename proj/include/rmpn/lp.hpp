#pragma once
// Linear programs in inequality/equality form and a self-contained
// two-phase simplex solver that always returns vertex solutions.

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rmpn {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SparseRow {
  std::vector<int> idx;
  std::vector<double> val;
  void push(int j, double v) {
    if (v == 0.0) return;
    idx.push_back(j);
    val.push_back(v);
  }
  int size() const { return static_cast<int>(idx.size()); }
};

struct LinearConstraint {
  SparseRow row;
  double rhs = 0.0;
};

struct VarBound {
  double lower = 0.0;
  double upper = kInf;
};

struct LpStandardForm {
  int num_vars = 0;
  std::vector<double> objective;          // minimized
  std::vector<LinearConstraint> eq;
  std::vector<LinearConstraint> le;
  std::vector<VarBound> bounds;           // lower finite for every variable

  void resize(int n) {
    num_vars = n;
    objective.assign(n, 0.0);
    bounds.assign(n, VarBound{});
  }
  void add_eq(SparseRow row, double rhs) { eq.push_back({std::move(row), rhs}); }
  void add_le(SparseRow row, double rhs) { le.push_back({std::move(row), rhs}); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective_value = 0.0;
  std::vector<int> basis;      // standardized column indices, one per row
  long long iterations = 0;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver tolerances. The constraint data here is almost entirely in
// {-1, 0, 1}, so conditioning is benign and these are never tuned per call.
constexpr double kFeasTol = 1e-7;
constexpr double kIntegralityTol = 1e-6;
constexpr double kPivotTol = 1e-11;

LpSolution solve_lp(const LpStandardForm& p);

/// Same problem with some variable bounds replaced (used by branch and
/// bound, avoids copying the constraint matrix per node).
LpSolution solve_lp(const LpStandardForm& p, const std::vector<VarBound>& bounds_override);

/// Solves p with equality pins var = value appended as extra unit rows.
LpSolution solve_lp_with_fixed(const LpStandardForm& p,
                               const std::vector<std::pair<int, double>>& pins);

/// Text dump of the standardized system, for diagnosis.
std::string lp_debug_string(const LpStandardForm& p);

}  // namespace rmpn
