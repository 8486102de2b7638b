#pragma once
// Exact integer reference solver: best-first branch and bound over the LP
// module, used to certify planner optimality at desk scale.

#include <string>
#include <vector>

#include "rmpn/cnf.hpp"
#include "rmpn/lp.hpp"
#include "rmpn/petri.hpp"
#include "rmpn/planner.hpp"

namespace rmpn {

struct IlpProblem {
  LpStandardForm base;
  std::vector<int> integer_vars;
};

enum class IlpStatus { Optimal, Infeasible, Unbounded, BudgetExhausted };

struct IlpResult {
  IlpStatus status = IlpStatus::Infeasible;
  LpSolution best;          // incumbent (valid for Optimal and BudgetExhausted with incumbent)
  bool has_incumbent = false;
  double bound_gap = 0.0;   // incumbent objective minus best open bound
  long long nodes_explored = 0;
};

constexpr long long kDefaultNodeBudget = 100'000;

IlpResult solve_ilp(const IlpProblem& p, long long node_budget = kDefaultNodeBudget);

struct CompareReport {
  std::string planner_status;
  std::string ilp_status;
  double planner_cost = 0.0;   // firing count total, the reported cost term
  double ilp_cost = 0.0;
  double relative_error = 0.0;
  double planner_runtime = 0.0;
  double ilp_runtime = 0.0;
  bool budget_exhausted = false;
  int rounding_iterations = 0;
};

/// Runs the iterative planner and the exact integer solver on the same
/// mission lowering and reports both movement costs.
CompareReport compare(const Rmpn& net, const CnfFormula& f, const PlanConfig& cfg,
                      long long node_budget = kDefaultNodeBudget);

/// Certifies the planner's final solve against the integer optimum of the
/// identical lowering (selection and capacity pinned the same way). The
/// pinned constraint stack is unimodular, so the two must coincide; a
/// solver returning non-vertex optima would break the equality.
CompareReport compare_pinned(const Rmpn& net, const CnfFormula& f,
                             const PlanConfig& cfg,
                             long long node_budget = kDefaultNodeBudget);

std::string to_json(const CompareReport& r);

}  // namespace rmpn
