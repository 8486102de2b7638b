#pragma once
// Total-unimodularity certification for the constraint stacks arising from
// state-machine nets: exact determinant scans (Bareiss) plus the
// constructive Ghouila-Houri row partitions.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rmpn/petri.hpp"

namespace rmpn {

struct NotStateMachine : PetriError {
  using PetriError::PetriError;
};
struct UnsupportedLayout : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooLarge : std::runtime_error {
  long long required = 0;
  TooLarge(const std::string& msg, long long req)
      : std::runtime_error(msg), required(req) {}
};

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::int8_t> a;  // row-major

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}
  std::int8_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  std::int8_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

/// Stacked constraint matrices with known block structure. SingleStep is
/// the token-flow matrix over the post matrix (columns are transitions);
/// Staged chains per-stage state-equation and capacity blocks over columns
/// (m_1, sigma_1, ..., m_k, sigma_k).
struct StackedMatrix {
  enum class Layout { SingleStep, Staged };
  Layout layout = Layout::SingleStep;
  int stages = 1;
  int num_places = 0;
  int num_transitions = 0;
  IntMatrix mat;

  // Row bookkeeping. Flow rows carry token-flow coefficients; capacity
  // rows carry post coefficients. Each capacity row pairs with the flow
  // row of the same stage and place.
  bool is_flow_row(int r) const;
  int paired_flow_row(int r) const;
};

struct RowPartition {
  std::vector<int> r1;
  std::vector<int> r2;
};

StackedMatrix make_single_step_stack(const Rmpn& net);
StackedMatrix make_staged_stack(const Rmpn& net, int stages);

/// Constructive partition of the selected rows: flow rows go to r1, a
/// capacity row goes to r2 exactly when its paired flow row is selected.
RowPartition ghouila_houri_partition(const StackedMatrix& m, const std::vector<int>& rows);

/// True when every column's signed sum over (r1 minus r2) is in {-1,0,1}.
bool verify_partition(const IntMatrix& m, const RowPartition& p);

struct TuCounterexample {
  std::vector<int> rows;
  std::vector<int> cols;
  long long det = 0;
};

/// Number of square submatrices of order 1..max_order (saturating).
long long count_submatrices(int rows, int cols, int max_order);

constexpr long long kDefaultDetBudget = 2'000'000;

/// Exhaustive scan of every square submatrix up to max_order; returns the
/// first offending minor in deterministic order, or nothing when all
/// determinants lie in {-1,0,1}. Throws TooLarge beyond the budget.
std::optional<TuCounterexample> find_non_unimodular_minor(
    const IntMatrix& m, int max_order, long long budget = kDefaultDetBudget);

bool is_tu_bruteforce(const IntMatrix& m, int max_order,
                      long long budget = kDefaultDetBudget);

/// Serial reference for the scan above; same answers, no threading.
bool is_tu_bruteforce_serial(const IntMatrix& m, int max_order,
                             long long budget = kDefaultDetBudget);

/// Randomized minor scan for matrices whose exhaustive enumeration would
/// blow the budget: samples row/column subsets uniformly per order.
bool is_tu_sampled(const IntMatrix& m, int max_order, long long samples,
                   std::uint64_t seed);

/// Exact integer determinant by fraction-free (Bareiss) elimination.
long long det_exact(const IntMatrix& m);

}  // namespace rmpn
