#include "rmpn/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include <json.hpp>

namespace rmpn {
namespace {

struct BoundDelta {
  int var;
  double lower, upper;
  std::shared_ptr<BoundDelta> parent;
};

struct Node {
  double bound = 0.0;
  int depth = 0;
  long long id = 0;
  std::shared_ptr<BoundDelta> deltas;
};

struct NodeOrder {
  // best bound first; deeper first on ties; insertion order last
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

void apply_deltas(const std::shared_ptr<BoundDelta>& d, std::vector<VarBound>& bounds) {
  // chained overrides are applied root-last, so walk first and replay
  std::vector<const BoundDelta*> chain;
  for (const BoundDelta* cur = d.get(); cur; cur = cur->parent.get())
    chain.push_back(cur);
  for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    bounds[(*it)->var] = {(*it)->lower, (*it)->upper};
}

// Most fractional integer variable, lowest index on ties; -1 when the
// solution is already integral on every integer variable.
int most_fractional(const LpSolution& sol, const std::vector<int>& integer_vars,
                    double tol) {
  int best = -1;
  double best_dist = tol;
  for (int v : integer_vars) {
    double frac = sol.x[v] - std::floor(sol.x[v]);
    double dist = std::min(frac, 1.0 - frac);
    if (dist > best_dist) {
      best_dist = dist;
      best = v;
    }
  }
  return best;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

IlpResult solve_ilp(const IlpProblem& p, long long node_budget) {
  IlpResult res;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long long next_id = 0;
  open.push({-kInf, 0, next_id++, nullptr});

  double incumbent_value = kInf;
  LpSolution incumbent;
  std::vector<VarBound> bounds;
  double best_open_bound = -kInf;
  bool root = true;

  while (!open.empty()) {
    if (res.nodes_explored >= node_budget) {
      res.status = IlpStatus::BudgetExhausted;
      res.best = incumbent;
      res.has_incumbent = incumbent_value < kInf;
      res.bound_gap = res.has_incumbent ? incumbent_value - open.top().bound : kInf;
      return res;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent_value - 1e-9) continue;  // pruned by bound

    bounds = p.base.bounds;
    apply_deltas(node.deltas, bounds);
    LpSolution sol = solve_lp(p.base, bounds);
    ++res.nodes_explored;
    if (sol.status == LpStatus::Unbounded) {
      if (root) {
        res.status = IlpStatus::Unbounded;
        return res;
      }
      // bounded subproblem reporting unbounded cannot happen with finite
      // incumbent pruning; treat as an open direction
      res.status = IlpStatus::Unbounded;
      return res;
    }
    root = false;
    if (sol.status != LpStatus::Optimal) continue;
    if (sol.objective_value >= incumbent_value - 1e-9) continue;

    int branch_var = most_fractional(sol, p.integer_vars, kIntegralityTol);
    if (branch_var < 0) {
      incumbent_value = sol.objective_value;
      incumbent = sol;
      continue;
    }
    double v = sol.x[branch_var];
    double lo = bounds[branch_var].lower, hi = bounds[branch_var].upper;
    auto down = std::make_shared<BoundDelta>(
        BoundDelta{branch_var, lo, std::floor(v), node.deltas});
    auto up = std::make_shared<BoundDelta>(
        BoundDelta{branch_var, std::ceil(v), hi, node.deltas});
    open.push({sol.objective_value, node.depth + 1, next_id++, down});
    open.push({sol.objective_value, node.depth + 1, next_id++, up});
  }

  if (incumbent_value < kInf) {
    res.status = IlpStatus::Optimal;
    res.best = incumbent;
    res.has_incumbent = true;
    res.bound_gap = 0.0;
  } else {
    res.status = IlpStatus::Infeasible;
  }
  return res;
}

namespace {

CompareReport compare_impl(const Rmpn& net, const CnfFormula& f,
                           const PlanConfig& cfg, long long node_budget,
                           bool pin_to_planner) {
  CompareReport rep;
  double t0 = now_seconds();
  PlanOutcome outcome = plan(net, f, cfg);
  rep.planner_runtime = now_seconds() - t0;
  rep.planner_status = outcome.status == PlanStatus::Solved ? "solved" : "infeasible";
  rep.planner_cost = outcome.cost_first_term;
  rep.rounding_iterations = outcome.rounding_iterations;

  MissionConstraints sc = encode_cnf(f);
  MissionLayout lay;
  IlpProblem ilp;
  ilp.base = build_mission_lowering(net, sc, cfg, &lay);
  ilp.integer_vars.resize(lay.num_vars);
  for (int i = 0; i < lay.num_vars; ++i) ilp.integer_vars[i] = i;
  if (pin_to_planner) {
    if (outcome.status != PlanStatus::Solved) {
      rep.ilp_status = "skipped";
      return rep;
    }
    for (int y = 0; y < net.num_symbols; ++y) {
      SparseRow pin;
      pin.push(lay.x_begin + y, 1.0);
      ilp.base.add_eq(std::move(pin), outcome.x_star[y]);
    }
    SparseRow pin_s;
    pin_s.push(lay.s_index, 1.0);
    ilp.base.add_eq(std::move(pin_s), outcome.s_bar);
  }

  t0 = now_seconds();
  IlpResult ires = solve_ilp(ilp, node_budget);
  rep.ilp_runtime = now_seconds() - t0;
  rep.budget_exhausted = ires.status == IlpStatus::BudgetExhausted;
  switch (ires.status) {
    case IlpStatus::Optimal: rep.ilp_status = "solved"; break;
    case IlpStatus::Infeasible: rep.ilp_status = "infeasible"; break;
    case IlpStatus::Unbounded: rep.ilp_status = "unbounded"; break;
    case IlpStatus::BudgetExhausted: rep.ilp_status = "budget-exhausted"; break;
  }
  if (ires.has_incumbent) {
    double moves = 0.0;
    for (int t = 0; t < net.num_transitions(); ++t)
      moves += ires.best.x[lay.sigma_begin + t];
    rep.ilp_cost = std::round(moves);
  }
  if (rep.planner_status == "solved" && ires.has_incumbent) {
    if (rep.ilp_cost > 0)
      rep.relative_error = (rep.planner_cost - rep.ilp_cost) / rep.ilp_cost;
    else
      rep.relative_error = rep.planner_cost > 0 ? kInf : 0.0;
  }
  return rep;
}

}  // namespace

CompareReport compare(const Rmpn& net, const CnfFormula& f, const PlanConfig& cfg,
                      long long node_budget) {
  return compare_impl(net, f, cfg, node_budget, false);
}

CompareReport compare_pinned(const Rmpn& net, const CnfFormula& f,
                             const PlanConfig& cfg, long long node_budget) {
  return compare_impl(net, f, cfg, node_budget, true);
}

std::string to_json(const CompareReport& r) {
  nlohmann::ordered_json j;
  j["planner_status"] = r.planner_status;
  j["ilp_status"] = r.ilp_status;
  j["planner_cost"] = r.planner_cost;
  j["ilp_cost"] = r.ilp_cost;
  j["relative_error"] = r.relative_error;
  j["planner_runtime"] = r.planner_runtime;
  j["ilp_runtime"] = r.ilp_runtime;
  j["iterations"] = r.rounding_iterations;
  j["budget_exhausted"] = r.budget_exhausted;
  return j.dump(2) + "\n";
}

}  // namespace rmpn
