#include "rmpn/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace rmpn {
namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double resolve_big_n(const Rmpn& net, double requested) {
  double n = requested;
  if (n == 0.0) n = net.num_robots() + 2.0;
  if (n <= net.num_robots() + 1.0)
    throw PlannerError("big N must exceed number of robots plus one");
  return n;
}

int resolve_stage_growth(const Rmpn& net, int requested) {
  int g = requested < 0 ? net.num_robots() : requested;
  if (g > net.num_robots())
    throw PlannerError("stage growth bound exceeds number of robots");
  return g;
}

int ceil_with_tol(double v, double tol) {
  return std::max(1, static_cast<int>(std::ceil(v - tol)));
}

}  // namespace

LpStandardForm build_mission_lowering(const Rmpn& net, const MissionConstraints& sc,
                              const PlanConfig& cfg, MissionLayout* layout) {
  if (sc.num_symbols != net.num_symbols)
    throw DimensionMismatch("constraint symbols do not match net symbols");
  const int P = net.num_places;
  const int T = net.num_transitions();
  const int Y = net.num_symbols;
  const double N = resolve_big_n(net, cfg.big_n);

  MissionLayout lay;
  lay.m_begin = 0;
  lay.sigma_begin = P;
  lay.x_begin = P + T;
  lay.s_index = P + T + Y;
  lay.num_vars = P + T + Y + 1;
  if (layout) *layout = lay;

  LpStandardForm p;
  p.resize(lay.num_vars);
  for (int t = 0; t < T; ++t) p.objective[lay.sigma_begin + t] = 1.0;
  p.objective[lay.s_index] = N;
  for (int y = 0; y < Y; ++y) p.bounds[lay.x_begin + y] = {0.0, 1.0};

  // (a) m - C sigma = m0
  for (int pl = 0; pl < P; ++pl) {
    SparseRow row;
    row.push(lay.m_begin + pl, 1.0);
    for (int t = 0; t < T; ++t) {
      double c = 0.0;
      for (int q : net.post_places[t])
        if (q == pl) c += 1.0;
      for (int q : net.pre_places[t])
        if (q == pl) c -= 1.0;
      if (c != 0.0) row.push(lay.sigma_begin + t, -c);
    }
    p.add_eq(std::move(row), net.initial_marking[pl]);
  }
  // (b) x <= V m <= N x
  for (int y = 0; y < Y; ++y) {
    SparseRow lower;  // x_y - V_y m <= 0
    lower.push(lay.x_begin + y, 1.0);
    for (int pl : net.symbol_places[y]) lower.push(lay.m_begin + pl, -1.0);
    p.add_le(std::move(lower), 0.0);
    SparseRow upper;  // V_y m - N x_y <= 0
    for (int pl : net.symbol_places[y]) upper.push(lay.m_begin + pl, 1.0);
    upper.push(lay.x_begin + y, -N);
    p.add_le(std::move(upper), 0.0);
  }
  // (c) clause rows
  for (int i = 0; i < sc.num_rows(); ++i) {
    SparseRow row;
    for (int y = 0; y < Y; ++y)
      if (sc.rows[i][y] != 0) row.push(lay.x_begin + y, sc.rows[i][y]);
    p.add_le(std::move(row), sc.rhs[i]);
  }
  // (d) Post sigma - s <= -m0
  for (int pl = 0; pl < P; ++pl) {
    SparseRow row;
    for (int t = 0; t < T; ++t) {
      double c = 0.0;
      for (int q : net.post_places[t])
        if (q == pl) c += 1.0;
      if (c != 0.0) row.push(lay.sigma_begin + t, c);
    }
    row.push(lay.s_index, -1.0);
    p.add_le(std::move(row), -static_cast<double>(net.initial_marking[pl]));
  }
  return p;
}

LpStandardForm build_reachability_lowering(const Rmpn& net, const Marking& m_f, int s_fixed,
                              double big_n) {
  const int P = net.num_places;
  const int T = net.num_transitions();
  if (static_cast<int>(m_f.size()) != P)
    throw DimensionMismatch("final marking size does not match places");
  if (std::accumulate(m_f.begin(), m_f.end(), 0) != net.num_robots())
    throw TokenCountMismatch("final marking token count differs from robots");
  const double N = resolve_big_n(net, big_n);

  LpStandardForm p;
  p.resize(T + 1);
  for (int t = 0; t < T; ++t) p.objective[t] = 1.0;
  const int s_index = T;
  p.objective[s_index] = N;

  for (int pl = 0; pl < P; ++pl) {
    SparseRow flow;
    SparseRow cap;
    for (int t = 0; t < T; ++t) {
      double c = 0.0, post = 0.0;
      for (int q : net.post_places[t])
        if (q == pl) {
          c += 1.0;
          post += 1.0;
        }
      for (int q : net.pre_places[t])
        if (q == pl) c -= 1.0;
      if (c != 0.0) flow.push(t, c);
      if (post != 0.0) cap.push(t, post);
    }
    p.add_eq(std::move(flow), m_f[pl] - net.initial_marking[pl]);
    cap.push(s_index, -1.0);
    p.add_le(std::move(cap), -static_cast<double>(net.initial_marking[pl]));
  }
  if (s_fixed >= 0) {
    SparseRow pin;
    pin.push(s_index, 1.0);
    p.add_eq(std::move(pin), s_fixed);
  }
  return p;
}

LpStandardForm build_staged_lowering(const Rmpn& net, const Marking& m_f, int s_bar,
                              const PlanConfig& cfg) {
  if (s_bar < 1) throw PlannerError("staged lowering needs at least one stage");
  const int P = net.num_places;
  const int T = net.num_transitions();
  if (static_cast<int>(m_f.size()) != P)
    throw DimensionMismatch("final marking size does not match places");

  // variables: (m_1, sigma_1, ..., m_sbar, sigma_sbar)
  LpStandardForm p;
  p.resize(s_bar * (P + T));
  auto m_var = [&](int stage, int pl) { return stage * (P + T) + pl; };
  auto sigma_var = [&](int stage, int t) { return stage * (P + T) + P + t; };

  for (int stage = 0; stage < s_bar; ++stage) {
    double w = cfg.weighted_stage_objective ? (s_bar - stage) : 1.0;
    for (int t = 0; t < T; ++t) p.objective[sigma_var(stage, t)] = w;
  }
  for (int stage = 0; stage < s_bar; ++stage) {
    for (int pl = 0; pl < P; ++pl) {
      SparseRow flow;  // m_i - m_{i-1} - C sigma_i = [m0 for i=1]
      flow.push(m_var(stage, pl), 1.0);
      if (stage > 0) flow.push(m_var(stage - 1, pl), -1.0);
      SparseRow cap;  // Post sigma_i + m_{i-1} <= 1
      for (int t = 0; t < T; ++t) {
        double c = 0.0, post = 0.0;
        for (int q : net.post_places[t])
          if (q == pl) {
            c += 1.0;
            post += 1.0;
          }
        for (int q : net.pre_places[t])
          if (q == pl) c -= 1.0;
        if (c != 0.0) flow.push(sigma_var(stage, t), -c);
        if (post != 0.0) cap.push(sigma_var(stage, t), post);
      }
      if (stage > 0) cap.push(m_var(stage - 1, pl), 1.0);
      double flow_rhs = stage == 0 ? net.initial_marking[pl] : 0.0;
      double cap_rhs = stage == 0 ? 1.0 - net.initial_marking[pl] : 1.0;
      p.add_eq(std::move(flow), flow_rhs);
      p.add_le(std::move(cap), cap_rhs);
    }
  }
  // terminal marking pins
  for (int pl = 0; pl < P; ++pl) {
    SparseRow pin;
    pin.push(m_var(s_bar - 1, pl), 1.0);
    p.add_eq(std::move(pin), m_f[pl]);
  }
  return p;
}

RoundingStep element_rounding(const std::vector<double>& x_star, double tol,
                              std::mt19937_64& rng) {
  RoundingStep step;
  std::vector<int> fractional;
  double best = -1.0;
  for (size_t i = 0; i < x_star.size(); ++i) {
    if (x_star[i] >= 1.0 - tol) {
      step.fixed_to_one.push_back(static_cast<int>(i));
    } else if (x_star[i] > tol) {
      fractional.push_back(static_cast<int>(i));
      best = std::max(best, x_star[i]);
    }
  }
  if (fractional.empty()) {
    step.done = true;
    return step;
  }
  std::vector<int> ties;
  for (int i : fractional)
    if (x_star[i] >= best - 1e-9) ties.push_back(i);
  int chosen = ties[rng() % ties.size()];
  step.fixed_to_one.push_back(chosen);
  std::sort(step.fixed_to_one.begin(), step.fixed_to_one.end());
  return step;
}

BooleanTaskResult solve_boolean_task(const Rmpn& net, const MissionConstraints& sc,
                                     const PlanConfig& cfg) {
  MissionLayout lay;
  LpStandardForm p6 = build_mission_lowering(net, sc, cfg, &lay);
  const int Y = net.num_symbols;
  std::mt19937_64 rng(cfg.rng_seed);

  BooleanTaskResult res;
  std::vector<std::pair<int, double>> pins;
  std::vector<char> pinned(Y, 0);
  for (int iter = 0; iter <= Y; ++iter) {
    double t0 = now_seconds();
    LpSolution sol = pins.empty() ? solve_lp(p6) : solve_lp_with_fixed(p6, pins);
    double dt = now_seconds() - t0;
    res.t_lps += dt;
    res.t_last_lp = dt;
    if (sol.status != LpStatus::Optimal) {
      res.status = sol.status;
      res.infeasible_at_iteration = iter;
      return res;
    }
    std::vector<double> x(sol.x.begin() + lay.x_begin, sol.x.begin() + lay.x_begin + Y);
    RoundingStep step = element_rounding(x, cfg.integrality_tol, rng);
    if (step.done) {
      res.status = LpStatus::Optimal;
      res.x_star.assign(Y, 0);
      for (int y = 0; y < Y; ++y) res.x_star[y] = x[y] >= 0.5 ? 1 : 0;
      res.s_star = sol.x[lay.s_index];
      res.s_bar = ceil_with_tol(res.s_star, cfg.integrality_tol);
      res.iterations = iter;
      return res;
    }
    bool grew = false;
    for (int idx : step.fixed_to_one)
      if (!pinned[idx]) {
        pinned[idx] = 1;
        pins.push_back({lay.x_begin + idx, 1.0});
        grew = true;
      }
    if (!grew)
      throw PlannerError("rounding loop made no progress");
  }
  throw PlannerError("rounding loop exceeded the symbol-count bound");
}

PlanOutcome plan(const Rmpn& net, const CnfFormula& f, const PlanConfig& cfg) {
  double t_start = now_seconds();
  PlanOutcome out;
  out.seed = cfg.rng_seed;
  const int growth = resolve_stage_growth(net, cfg.max_stage_growth);

  MissionConstraints sc = encode_cnf(f);
  BooleanTaskResult bt = solve_boolean_task(net, sc, cfg);
  out.timings.task_lps = bt.t_lps;
  out.timings.last_task_lp = bt.t_last_lp;
  out.rounding_iterations = bt.iterations;
  if (bt.status != LpStatus::Optimal) {
    out.status = PlanStatus::Infeasible;
    out.failed_phase = PlanPhase::BooleanTask;
    out.timings.total = now_seconds() - t_start;
    return out;
  }
  out.x_star = bt.x_star;
  out.s_bar = bt.s_bar;
  out.s_star = bt.s_star;

  // capacity pinned, selection pinned; the marking stays free so the
  // solver picks which labeled cell absorbs each robot
  MissionLayout lay;
  LpStandardForm p6 = build_mission_lowering(net, sc, cfg, &lay);
  std::vector<std::pair<int, double>> pins;
  for (int y = 0; y < net.num_symbols; ++y)
    pins.push_back({lay.x_begin + y, static_cast<double>(bt.x_star[y])});
  pins.push_back({lay.s_index, static_cast<double>(bt.s_bar)});
  double t0 = now_seconds();
  LpSolution fin = solve_lp_with_fixed(p6, pins);
  out.timings.final_lp = now_seconds() - t0;
  if (fin.status != LpStatus::Optimal) {
    out.status = PlanStatus::Infeasible;
    out.failed_phase = PlanPhase::Reachability;
    out.timings.total = now_seconds() - t_start;
    return out;
  }
  Marking m_f = round_integral(
      {fin.x.begin() + lay.m_begin, fin.x.begin() + lay.m_begin + net.num_places},
      cfg.integrality_tol);
  FiringVector sigma = round_integral(
      {fin.x.begin() + lay.sigma_begin,
       fin.x.begin() + lay.sigma_begin + net.num_transitions()},
      cfg.integrality_tol);

  const bool staged_needed = cfg.collision_mode == CollisionMode::IntermediateMarkings &&
                             bt.s_star > 1.0 + cfg.integrality_tol;
  if (!staged_needed) {
    out.stages.push_back({sigma, m_f});
    out.cost_first_term = std::accumulate(sigma.begin(), sigma.end(), 0.0);
    out.status = PlanStatus::Solved;
    out.timings.total = now_seconds() - t_start;
    return out;
  }

  for (int stages = bt.s_bar; stages <= bt.s_bar + growth; ++stages) {
    LpStandardForm p8 = build_staged_lowering(net, m_f, stages, cfg);
    double t8 = now_seconds();
    LpSolution sol = solve_lp(p8);
    out.timings.staged += now_seconds() - t8;
    if (sol.status != LpStatus::Optimal) continue;
    const int P = net.num_places;
    const int T = net.num_transitions();
    out.stages.clear();
    out.cost_first_term = 0.0;
    for (int st = 0; st < stages; ++st) {
      int base = st * (P + T);
      Marking m_i = round_integral({sol.x.begin() + base, sol.x.begin() + base + P},
                                   cfg.integrality_tol);
      FiringVector s_i = round_integral(
          {sol.x.begin() + base + P, sol.x.begin() + base + P + T}, cfg.integrality_tol);
      out.cost_first_term += std::accumulate(s_i.begin(), s_i.end(), 0.0);
      out.stages.push_back({std::move(s_i), std::move(m_i)});
    }
    out.status = PlanStatus::Solved;
    out.timings.total = now_seconds() - t_start;
    return out;
  }
  out.status = PlanStatus::Infeasible;
  out.failed_phase = PlanPhase::Staged;
  out.timings.total = now_seconds() - t_start;
  return out;
}

std::string to_json(const PlanOutcome& outcome) {
  nlohmann::ordered_json j;
  j["x"] = outcome.x_star;
  j["s_bar"] = outcome.s_bar;
  j["stages"] = nlohmann::ordered_json::array();
  for (const PlanStage& st : outcome.stages) {
    nlohmann::ordered_json js;
    js["sigma_nonzeros"] = nlohmann::ordered_json::array();
    for (size_t t = 0; t < st.sigma.size(); ++t)
      if (st.sigma[t] != 0)
        js["sigma_nonzeros"].push_back({static_cast<int>(t), st.sigma[t]});
    js["marking"] = st.marking_after;
    j["stages"].push_back(js);
  }
  j["cost"] = outcome.cost_first_term;
  j["iterations"] = outcome.rounding_iterations;
  j["status"] = outcome.status == PlanStatus::Solved ? "solved" : "infeasible";
  if (outcome.status == PlanStatus::Infeasible) {
    const char* phase = "none";
    switch (outcome.failed_phase) {
      case PlanPhase::BooleanTask: phase = "boolean-task"; break;
      case PlanPhase::Reachability: phase = "reachability"; break;
      case PlanPhase::Staged: phase = "staged"; break;
      case PlanPhase::None: break;
    }
    j["phase"] = phase;
  }
  j["seed"] = outcome.seed;
  return j.dump(2) + "\n";
}

}  // namespace rmpn
