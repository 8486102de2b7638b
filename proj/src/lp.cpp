#include "rmpn/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rmpn {
namespace {

constexpr double kOptTol = 1e-9;
constexpr int kDegenerateStreakLimit = 500;

// Dense-tableau two-phase simplex. Entering variables are priced with
// Dantzig's rule and fall back to Bland's rule after a degenerate streak,
// which restores the termination guarantee. The leaving row always breaks
// ratio ties by the smallest basis index, so runs are deterministic.
class Simplex {
 public:
  Simplex(const LpStandardForm& p, const std::vector<VarBound>& bounds)
      : problem_(p), bounds_(bounds) {}

  LpSolution run() {
    LpSolution sol;
    if (!standardize(sol)) return sol;  // trivially infeasible bounds

    if (art_begin_ < num_cols_ && !phase1()) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = iterations_;
      return sol;
    }
    int phase2 = phase2_run();
    sol.iterations = iterations_;
    sol.basis = basis_;
    if (phase2 < 0) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.x.assign(problem_.num_vars, 0.0);
    for (int i = 0; i < num_rows_; ++i)
      if (basis_[i] < problem_.num_vars) sol.x[basis_[i]] = rhs(i);
    for (int j = 0; j < problem_.num_vars; ++j) sol.x[j] += bounds_[j].lower;
    double obj = 0.0;
    for (int j = 0; j < problem_.num_vars; ++j)
      obj += problem_.objective[j] * sol.x[j];
    sol.objective_value = obj;
    return sol;
  }

 private:
  const LpStandardForm& problem_;
  const std::vector<VarBound>& bounds_;

  int num_rows_ = 0;
  int num_cols_ = 0;   // structural + slack + artificial
  int art_begin_ = 0;  // first artificial column
  std::vector<double> tab_;  // (num_rows_+1) x (num_cols_+1), row-major
  std::vector<int> basis_;
  long long iterations_ = 0;
  bool bland_ = false;
  int degenerate_streak_ = 0;

  double* row(int i) { return tab_.data() + static_cast<size_t>(i) * (num_cols_ + 1); }
  double& at(int i, int j) { return row(i)[j]; }
  double& rhs(int i) { return row(i)[num_cols_]; }
  double* cost_row() { return row(num_rows_); }

  // Builds the tableau: shifted variables, slacks on <= rows and on finite
  // upper bounds, rows sign-normalized to rhs >= 0, artificials where no
  // slack can seed the basis. Returns false if bounds are contradictory.
  bool standardize(LpSolution& sol) {
    const int n = problem_.num_vars;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(bounds_[j].lower))
        throw NumericalFailure("variable lower bounds must be finite");
      if (bounds_[j].lower > bounds_[j].upper + kFeasTol) {
        sol.status = LpStatus::Infeasible;
        return false;
      }
    }

    struct RawRow {
      const SparseRow* sparse = nullptr;
      int ub_var = -1;   // unit row y_j + t = ub when >= 0
      double rhs = 0.0;
      bool has_slack = false;
    };
    std::vector<RawRow> rows;
    for (const auto& c : problem_.eq) {
      double r = c.rhs;
      for (int k = 0; k < c.row.size(); ++k)
        r -= c.row.val[k] * bounds_[c.row.idx[k]].lower;
      rows.push_back({&c.row, -1, r, false});
    }
    for (const auto& c : problem_.le) {
      double r = c.rhs;
      for (int k = 0; k < c.row.size(); ++k)
        r -= c.row.val[k] * bounds_[c.row.idx[k]].lower;
      rows.push_back({&c.row, -1, r, true});
    }
    for (int j = 0; j < n; ++j)
      if (std::isfinite(bounds_[j].upper))
        rows.push_back({nullptr, j, bounds_[j].upper - bounds_[j].lower, true});

    num_rows_ = static_cast<int>(rows.size());
    int num_slacks = 0;
    int num_arts = 0;
    for (const RawRow& r : rows) {
      if (r.has_slack) ++num_slacks;
      if (!r.has_slack || r.rhs < 0) ++num_arts;  // slack unusable when row flips
    }
    art_begin_ = n + num_slacks;
    num_cols_ = art_begin_ + num_arts;
    tab_.assign(static_cast<size_t>(num_rows_ + 1) * (num_cols_ + 1), 0.0);
    basis_.assign(num_rows_, -1);

    int slack = n;
    int art = art_begin_;
    for (int i = 0; i < num_rows_; ++i) {
      const RawRow& rr = rows[i];
      double sign = rr.rhs < 0 ? -1.0 : 1.0;
      if (rr.sparse) {
        for (int k = 0; k < rr.sparse->size(); ++k)
          at(i, rr.sparse->idx[k]) += sign * rr.sparse->val[k];
      } else {
        at(i, rr.ub_var) = sign;
      }
      double slack_coef = 0.0;
      if (rr.has_slack) {
        slack_coef = sign;
        at(i, slack) = slack_coef;
        ++slack;
      }
      rhs(i) = sign * rr.rhs;
      if (slack_coef > 0.5) {
        basis_[i] = slack - 1;
      } else {
        at(i, art) = 1.0;
        basis_[i] = art;
        ++art;
      }
    }
    return true;
  }

  void canonicalize(const std::vector<double>& costs) {
    double* cr = cost_row();
    std::fill(cr, cr + num_cols_ + 1, 0.0);
    for (size_t j = 0; j < costs.size(); ++j) cr[j] = costs[j];
    for (int i = 0; i < num_rows_; ++i) {
      double cb = basis_[i] < static_cast<int>(costs.size()) ? costs[basis_[i]] : 0.0;
      if (cb == 0.0) continue;
      const double* ri = row(i);
      for (int j = 0; j <= num_cols_; ++j) cr[j] -= cb * ri[j];
    }
  }

  // artificial columns never enter the basis; once driven out they stay out
  int choose_entering() {
    const double* cr = cost_row();
    const int limit = art_begin_;
    if (bland_) {
      for (int j = 0; j < limit; ++j)
        if (cr[j] < -kOptTol) return j;
      return -1;
    }
    int best = -1;
    double best_val = -kOptTol;
    for (int j = 0; j < limit; ++j)
      if (cr[j] < best_val) {
        best_val = cr[j];
        best = j;
      }
    return best;
  }

  // Returns the pivot row, -1 when the column is nonpositive (unbounded
  // direction), or -2 when only sub-tolerance positive entries exist.
  int ratio_test(int j) {
    int best_row = -1;
    double best_ratio = 0.0;
    bool tiny_only = false;
    for (int i = 0; i < num_rows_; ++i) {
      double a = at(i, j);
      if (a <= 0.0) continue;
      if (a <= kPivotTol) {
        tiny_only = true;
        continue;
      }
      double ratio = rhs(i) / a;
      if (best_row < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && basis_[i] < basis_[best_row])) {
        best_row = i;
        best_ratio = ratio;
      }
    }
    if (best_row < 0) return tiny_only ? -2 : -1;
    return best_row;
  }

  void pivot(int r, int j) {
    double piv = at(r, j);
    double* pr = row(r);
    const double inv = 1.0 / piv;
    for (int k = 0; k <= num_cols_; ++k) pr[k] *= inv;
    pr[j] = 1.0;
    const int total_rows = num_rows_ + 1;
#pragma omp parallel for schedule(static) \
    if (static_cast<long long>(total_rows) * num_cols_ > 262144)
    for (int i = 0; i < total_rows; ++i) {
      if (i == r) continue;
      double* ri = row(i);
      double f = ri[j];
      if (f == 0.0) continue;
      for (int k = 0; k <= num_cols_; ++k) ri[k] -= f * pr[k];
      ri[j] = 0.0;
    }
    basis_[r] = j;
    ++iterations_;
  }

  // Runs pivots until optimality. Returns 0 on optimal, -1 on unbounded.
  int iterate() {
    const long long max_iter =
        200LL * (num_rows_ + num_cols_) + 20000;
    long long local_iter = 0;
    for (;;) {
      if (++local_iter > max_iter)
        throw NumericalFailure("simplex iteration limit exceeded");
      int j = choose_entering();
      if (j < 0) return 0;
      int r = ratio_test(j);
      if (r == -2) {
        if (!bland_) {
          bland_ = true;  // retry pricing before giving up
          continue;
        }
        throw NumericalFailure("pivot magnitude below tolerance persists");
      }
      if (r < 0) return -1;
      double before = rhs(num_rows_);
      pivot(r, j);
      double after = rhs(num_rows_);
      if (std::fabs(after - before) < 1e-12) {
        if (++degenerate_streak_ > kDegenerateStreakLimit) bland_ = true;
      } else {
        degenerate_streak_ = 0;
        bland_ = false;
      }
    }
  }

  bool phase1() {
    bool any_artificial = false;
    for (int i = 0; i < num_rows_; ++i)
      if (basis_[i] >= art_begin_) any_artificial = true;
    if (!any_artificial) return true;

    std::vector<double> costs(num_cols_, 0.0);
    for (int j = art_begin_; j < num_cols_; ++j) costs[j] = 1.0;
    canonicalize(costs);
    if (iterate() < 0)
      throw NumericalFailure("phase-1 objective reported unbounded");
    double infeasibility = -rhs(num_rows_);
    if (infeasibility > kFeasTol) return false;

    // pivot remaining artificials out where the row still has structure
    for (int i = 0; i < num_rows_; ++i) {
      if (basis_[i] < art_begin_) continue;
      int col = -1;
      for (int j = 0; j < art_begin_; ++j)
        if (std::fabs(at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      if (col >= 0) pivot(i, col);
      // else: redundant row, artificial stays basic at zero
    }
    return true;
  }

  int phase2_run() {
    std::vector<double> costs(art_begin_, 0.0);
    for (int j = 0; j < problem_.num_vars; ++j) costs[j] = problem_.objective[j];
    canonicalize(costs);
    bland_ = false;
    degenerate_streak_ = 0;
    return iterate();
  }
};

}  // namespace

LpSolution solve_lp(const LpStandardForm& p, const std::vector<VarBound>& bounds_override) {
  Simplex s(p, bounds_override);
  return s.run();
}

LpSolution solve_lp(const LpStandardForm& p) { return solve_lp(p, p.bounds); }

LpSolution solve_lp_with_fixed(const LpStandardForm& p,
                               const std::vector<std::pair<int, double>>& pins) {
  LpStandardForm q = p;
  for (auto [var, value] : pins) {
    if (var < 0 || var >= p.num_vars)
      throw NumericalFailure("pin index out of range");
    SparseRow r;
    r.push(var, 1.0);
    q.add_eq(std::move(r), value);
  }
  return solve_lp(q);
}

std::string lp_debug_string(const LpStandardForm& p) {
  std::ostringstream out;
  out << "vars=" << p.num_vars << " eq=" << p.eq.size() << " le=" << p.le.size() << "\n";
  auto dump_row = [&](const LinearConstraint& c, const char* rel) {
    for (int k = 0; k < c.row.size(); ++k)
      out << (k ? " + " : "") << c.row.val[k] << "*x" << c.row.idx[k];
    out << " " << rel << " " << c.rhs << "\n";
  };
  for (const auto& c : p.eq) dump_row(c, "=");
  for (const auto& c : p.le) dump_row(c, "<=");
  for (int j = 0; j < p.num_vars; ++j)
    out << "x" << j << " in [" << p.bounds[j].lower << ", " << p.bounds[j].upper << "]\n";
  return out.str();
}

}  // namespace rmpn
