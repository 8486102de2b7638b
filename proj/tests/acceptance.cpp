// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// any fails. Criterion 11 additionally drives the command-line binary
// (path in argv[1]) to compare emitted files byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rmpn/cnf.hpp"
#include "rmpn/grid.hpp"
#include "rmpn/lp.hpp"
#include "rmpn/oracle.hpp"
#include "rmpn/paths.hpp"
#include "rmpn/petri.hpp"
#include "rmpn/planner.hpp"
#include "rmpn/tu.hpp"
#include "test_support.hpp"

using namespace rmpn;
using namespace rmpn::testing;

namespace {

std::string g_cli_path;

struct Check {
  bool pass = true;
  std::string note;
  void require(bool cond, const std::string& msg) {
    if (!cond && pass) {
      pass = false;
      note = msg;
    }
  }
  void annotate(const std::string& msg) {
    if (note.empty())
      note = msg;
    else
      note += "; " + msg;
  }
};

double seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// ---------------------------------------------------------------------------

void criterion_worked_examples(Check& c) {
  Rmpn net = four_cell_net();
  std::vector<std::vector<int>> expected_c = {
      {-1, 1, 0, 0, 0, 0, 1, -1},
      {1, -1, -1, 1, -1, 1, 0, 0},
      {0, 0, 1, -1, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, -1, -1, 1},
  };
  c.require(token_flow_dense(net) == expected_c, "incidence matrix mismatch");

  FiringVector sigma = {0, 1, 0, 1, 0, 0, 0, 0};
  Marking m_f = apply_state_equation(net, net.initial_marking, sigma);
  c.require(m_f == Marking{1, 0, 0, 0}, "final marking mismatch");
  c.require(observe(net, net.initial_marking) == std::vector<int>{0, 0},
            "initial observation mismatch");
  // the printed observation map has the second symbol on the first cell,
  // so the arrived robot observes symbol two
  c.require(observe(net, m_f) == std::vector<int>{0, 1}, "final observation mismatch");

  CnfFormula f;
  f.num_symbols = 4;
  f.clauses = {
      {{0, false}, {1, false}, {3, false}},
      {{1, true}, {2, false}, {3, false}},
      {{0, true}, {2, false}},
  };
  MissionConstraints sc = encode_cnf(f);
  c.require(sc.rows == std::vector<std::vector<std::int8_t>>{
                           {-1, -1, 0, -1}, {0, 1, -1, -1}, {1, 0, -1, 0}},
            "clause matrix mismatch");
  c.require(sc.rhs == std::vector<int>{-1, 0, 0}, "clause rhs mismatch");

  StackedMatrix stack = make_single_step_stack(net);
  RowPartition part = ghouila_houri_partition(stack, {0, 2, 3, 4, 5});
  c.require(part.r1 == std::vector<int>{0, 2, 3, 5} && part.r2 == std::vector<int>{4},
            "row partition mismatch");
  c.require(verify_partition(stack.mat, part), "partition does not verify");
}

std::vector<Rmpn> seeded_nets(int count, int max_places, int max_transitions,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Rmpn> nets;
  nets.reserve(count);
  for (int i = 0; i < count; ++i)
    nets.push_back(random_state_machine(rng, max_places, max_transitions));
  return nets;
}

void criterion_single_step_tu(Check& c) {
  auto nets = seeded_nets(100, 6, 10, 1001);
  for (size_t i = 0; i < nets.size() && c.pass; ++i) {
    StackedMatrix s = make_single_step_stack(nets[i]);
    c.require(is_tu_bruteforce(s.mat, 6, 10'000'000),
              "net " + std::to_string(i) + " failed certification");
  }
  // negative control: a transition with two input places
  Rmpn bad;
  bad.num_places = 3;
  bad.pre_places = {{0, 1}, {1}};
  bad.post_places = {{2}, {0}};
  bad.initial_marking = {0, 0, 0};
  bad.place_symbols.assign(3, {});
  c.require(!is_state_machine(bad), "negative control looks like a state machine");
  IntMatrix m(6, 2);
  for (int t = 0; t < 2; ++t) {
    for (int p : bad.pre_places[t]) m.at(p, t) -= 1;
    for (int p : bad.post_places[t]) {
      m.at(p, t) += 1;
      m.at(3 + p, t) += 1;
    }
  }
  c.require(!is_tu_bruteforce(m, 4), "negative control certified unexpectedly");
}

void criterion_staged_tu(Check& c) {
  auto nets = seeded_nets(100, 6, 10, 1001);
  const long long budget = 8'000'000;
  int exhaustive = 0, sampled = 0;
  std::mt19937_64 rng(7);
  for (size_t i = 0; i < nets.size() && c.pass; ++i) {
    for (int stages = 1; stages <= 3 && c.pass; ++stages) {
      StackedMatrix s = make_staged_stack(nets[i], stages);
      long long needed = count_submatrices(s.mat.rows, s.mat.cols, 5);
      bool ok;
      if (needed <= budget) {
        ok = is_tu_bruteforce(s.mat, 5, budget);
        ++exhaustive;
      } else {
        ok = is_tu_sampled(s.mat, 5, 50'000, rng());
        ++sampled;
      }
      c.require(ok, "net " + std::to_string(i) + " stages " + std::to_string(stages) +
                        " failed certification");
    }
  }
  c.annotate(std::to_string(exhaustive) + " exhaustive scans, " +
             std::to_string(sampled) + " sampled scans");
}

void criterion_partitions(Check& c) {
  auto nets = seeded_nets(100, 6, 10, 1001);
  std::mt19937_64 rng(17);
  for (size_t i = 0; i < nets.size() && c.pass; ++i) {
    StackedMatrix single = make_single_step_stack(nets[i]);
    const int rows = single.mat.rows;  // at most 12: enumerate every subset
    for (unsigned mask = 0; mask < (1u << rows) && c.pass; ++mask) {
      std::vector<int> subset;
      for (int r = 0; r < rows; ++r)
        if (mask & (1u << r)) subset.push_back(r);
      RowPartition p = ghouila_houri_partition(single, subset);
      c.require(verify_partition(single.mat, p),
                "single-step subset failed on net " + std::to_string(i));
    }
    for (int stages = 2; stages <= 3; ++stages) {
      StackedMatrix staged = make_staged_stack(nets[i], stages);
      for (int k = 0; k < 1000 && c.pass; ++k) {
        std::vector<int> subset;
        for (int r = 0; r < staged.mat.rows; ++r)
          if (rng() & 1) subset.push_back(r);
        RowPartition p = ghouila_houri_partition(staged, subset);
        c.require(verify_partition(staged.mat, p),
                  "staged subset failed on net " + std::to_string(i));
      }
    }
  }
}

struct ReachInstance {
  GridEnvironment env;
  Rmpn net;
  Marking m_f;
};

std::vector<ReachInstance> reachability_family(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ReachInstance> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    GridEnvironment env = random_reachability_env(rng, 12, 2, 8, 0.15);
    ReachInstance inst{env, grid_to_rmpn(env), {}};
    inst.m_f = target_marking_all_regions(inst.net);
    out.push_back(std::move(inst));
  }
  return out;
}

void criterion_lp_integrality(Check& c) {
  auto family = reachability_family(200, 2002);
  for (size_t i = 0; i < family.size() && c.pass; ++i) {
    const ReachInstance& inst = family[i];
    LpSolution free_s = solve_lp(build_reachability_lowering(inst.net, inst.m_f));
    c.require(free_s.status == LpStatus::Optimal,
              "free-capacity solve failed on instance " + std::to_string(i));
    if (!c.pass) break;
    int s_bar = static_cast<int>(
        std::ceil(free_s.x[inst.net.num_transitions()] - kIntegralityTol));
    LpSolution pinned = solve_lp(build_reachability_lowering(inst.net, inst.m_f, s_bar));
    c.require(pinned.status == LpStatus::Optimal,
              "pinned-capacity solve failed on instance " + std::to_string(i));
    if (!c.pass) break;
    double worst = 0.0;
    for (double v : pinned.x) worst = std::max(worst, std::fabs(v - std::round(v)));
    c.require(worst < 1e-6, "fractional vertex on instance " + std::to_string(i) +
                                " (residue " + std::to_string(worst) + ")");
  }
}

void criterion_reachability_optimality(Check& c) {
  auto family = reachability_family(200, 2002);
  double worst = 0.0;
  for (size_t i = 0; i < family.size() && c.pass; ++i) {
    const ReachInstance& inst = family[i];
    PlanConfig cfg;
    cfg.rng_seed = i;
    CompareReport rep =
        compare_pinned(inst.net, all_regions_formula(inst.net.num_symbols), cfg);
    c.require(rep.planner_status == "solved" && rep.ilp_status == "solved",
              "instance " + std::to_string(i) + " did not solve on both routes");
    if (!c.pass) break;
    worst = std::max(worst, std::fabs(rep.relative_error));
    c.require(rep.relative_error == 0.0,
              "instance " + std::to_string(i) + " planner " +
                  std::to_string(rep.planner_cost) + " vs exact " +
                  std::to_string(rep.ilp_cost));
  }
  c.annotate("max |relative error| " + std::to_string(worst));
}

// Mixed clause types: two-of-three threshold groups (their relaxations sit
// at one-half corners, exercising the rounding loop), one mandatory single,
// and random clauses anchored to a witness so the mission stays satisfiable.
CnfFormula mixed_mission(std::mt19937_64& rng, int n_symbols, int n_robots) {
  std::vector<int> order(n_symbols);
  for (int i = 0; i < n_symbols; ++i) order[i] = i;
  for (int i = 0; i < n_symbols; ++i)
    std::swap(order[i], order[i + rng() % (n_symbols - i)]);

  std::vector<int> witness(n_symbols, 0);
  CnfFormula f;
  f.num_symbols = n_symbols;

  int groups = std::min(3, n_symbols / 3);
  int used = 0;
  for (int g = 0; g < groups; ++g) {
    int a = order[used], b = order[used + 1], d = order[used + 2];
    used += 3;
    f.clauses.push_back({{a, false}, {b, false}});
    f.clauses.push_back({{a, false}, {d, false}});
    f.clauses.push_back({{b, false}, {d, false}});
    // any two of the three satisfy the group
    witness[a] = 1;
    witness[b] = 1;
  }
  if (used < n_symbols) {
    int m = order[used++];
    f.clauses.push_back({{m, false}});
    witness[m] = 1;
  }
  int extra = 1 + static_cast<int>(rng() % n_symbols);
  for (int i = 0; i < extra; ++i) {
    int len = 1 + static_cast<int>(rng() % 3);
    std::vector<char> seen(n_symbols, 0);
    std::vector<Literal> clause;
    for (int k = 0; k < len; ++k) {
      int sym = static_cast<int>(rng() % n_symbols);
      if (seen[sym]) continue;
      seen[sym] = 1;
      clause.push_back({sym, (rng() & 1) != 0});
    }
    int anchor = static_cast<int>(rng() % clause.size());
    clause[anchor].negated = witness[clause[anchor].symbol] == 0;
    f.clauses.push_back(std::move(clause));
  }
  (void)n_robots;  // the witness never needs more regions than the smallest team
  return f;
}

struct BooleanStats {
  int solved = 0;
  double error_sum = 0.0;
  int max_iterations = 0;
  double iteration_sum = 0.0;
  bool iteration_bound_ok = true;
  bool all_satisfy = true;
  int count = 0;
};

BooleanStats g_boolean_stats;

void criterion_boolean_band(Check& c) {
  std::mt19937_64 rng(7007);
  BooleanStats stats;
  const int count = 50;
  for (int i = 0; i < count; ++i) {
    int n_robots = 8 + static_cast<int>(rng() % 8);    // 8..15
    int n_symbols = 6 + static_cast<int>(rng() % 7);   // 6..12
    GridEnvironment env = [&] {
      for (;;) {
        int side = 9 + static_cast<int>(rng() % 4);    // 9..12
        try {
          return generate(side, side, n_symbols, n_robots, 0.15, rng());
        } catch (const InsufficientFreeSpace&) {
        }
      }
    }();
    Rmpn net = grid_to_rmpn(env);
    CnfFormula f = mixed_mission(rng, n_symbols, n_robots);
    PlanConfig cfg;
    cfg.rng_seed = i;
    CompareReport rep = compare(net, f, cfg, 200'000);
    c.require(rep.planner_status == "solved",
              "instance " + std::to_string(i) + " infeasible for the planner");
    c.require(rep.ilp_status == "solved",
              "instance " + std::to_string(i) + " exact reference " + rep.ilp_status);
    if (!c.pass) return;

    PlanOutcome outcome = plan(net, f, cfg);
    stats.all_satisfy = stats.all_satisfy && eval_cnf(f, outcome.x_star);
    stats.error_sum += rep.relative_error;
    stats.iteration_sum += rep.rounding_iterations;
    stats.max_iterations = std::max(stats.max_iterations, rep.rounding_iterations);
    stats.iteration_bound_ok =
        stats.iteration_bound_ok && rep.rounding_iterations <= n_symbols;
    ++stats.solved;
    ++stats.count;
  }
  double mean_error = stats.error_sum / stats.count;
  c.require(stats.all_satisfy, "a planner assignment violated its mission");
  c.require(mean_error <= 0.25,
            "mean relative error " + std::to_string(mean_error) + " exceeds 0.25");
  c.annotate("mean relative error " + std::to_string(mean_error));
  g_boolean_stats = stats;
}

void criterion_iteration_bound(Check& c) {
  c.require(g_boolean_stats.count > 0, "no mission statistics collected");
  if (!c.pass) return;
  c.require(g_boolean_stats.iteration_bound_ok, "an instance exceeded the symbol bound");
  c.annotate("mean iterations " +
             std::to_string(g_boolean_stats.iteration_sum / g_boolean_stats.count) +
             ", max " + std::to_string(g_boolean_stats.max_iterations));
}

void criterion_collision_stages(Check& c) {
  // congested ten-robot, ten-region workspace (fixed seed)
  GridEnvironment env = generate(15, 15, 10, 10, 0.25, 1);
  Rmpn net = grid_to_rmpn(env);
  PlanConfig cfg;
  cfg.collision_mode = CollisionMode::IntermediateMarkings;
  PlanOutcome out = plan(net, all_regions_formula(net.num_symbols), cfg);
  c.require(out.status == PlanStatus::Solved, "staged plan infeasible");
  if (!c.pass) return;
  c.require(out.s_bar >= 2, "instance is not congested (capacity " +
                                std::to_string(out.s_bar) + ")");
  c.require(out.stages.size() >= 2, "expected a multi-stage plan");

  Marking cur = net.initial_marking;
  std::vector<std::vector<Walk>> stage_walks;
  for (const PlanStage& st : out.stages) {
    c.require(audit_capacity(net, cur, st.sigma, 1), "a stage violates unit capacity");
    stage_walks.push_back(decompose_firing_vector(net, cur, st.sigma, st.marking_after));
    cur = apply_state_equation(net, cur, st.sigma);
    c.require(cur == st.marking_after, "stage marking chain broken");
  }
  c.require(observe(net, cur) == std::vector<int>(net.num_symbols, 1),
            "not every region reached");

  // stitched trajectories must be walks of the net
  std::vector<RobotTrajectory> robots = stitch_stages(stage_walks);
  c.require(static_cast<int>(robots.size()) == net.num_robots(),
            "trajectory count differs from team size");
  for (const RobotTrajectory& rt : robots) {
    for (size_t i = 0; i + 1 < rt.cells.size(); ++i) {
      if (rt.cells[i] == rt.cells[i + 1]) continue;
      bool connected = false;
      for (int t = 0; t < net.num_transitions() && !connected; ++t)
        connected = net.pre_places[t][0] == rt.cells[i] &&
                    net.post_places[t][0] == rt.cells[i + 1];
      c.require(connected, "trajectory step without a transition");
    }
  }
  c.annotate(std::to_string(out.stages.size()) + " stages, cost " +
             std::to_string(out.cost_first_term));
}

void criterion_infeasibility(Check& c) {
  // contradictory mission
  GridEnvironment env = generate(8, 8, 2, 2, 0.1, 3);
  Rmpn net = grid_to_rmpn(env);
  CnfFormula f;
  f.num_symbols = 2;
  f.clauses = {{{0, false}}, {{0, true}}};
  PlanConfig cfg;
  PlanOutcome out = plan(net, f, cfg);
  c.require(out.status == PlanStatus::Infeasible, "contradiction not detected");
  c.require(out.failed_phase == PlanPhase::BooleanTask, "wrong phase tag");

  // two robots that would have to trade cells under unit capacity
  Rmpn swap;
  swap.num_places = 2;
  swap.add_transition(0, 1);
  swap.add_transition(1, 0);
  swap.initial_marking = {1, 1};
  swap.num_symbols = 2;
  swap.place_symbols = {{0}, {1}};
  swap.symbol_places = {{0}, {1}};
  CnfFormula g;
  g.num_symbols = 2;
  g.clauses = {{{0, false}}, {{1, true}}};
  PlanConfig staged_cfg;
  staged_cfg.collision_mode = CollisionMode::IntermediateMarkings;
  PlanOutcome swap_out = plan(swap, g, staged_cfg);
  c.require(swap_out.status == PlanStatus::Infeasible, "swap not detected");
  c.require(swap_out.failed_phase == PlanPhase::Staged, "wrong phase tag for swap");
}

int run_cli(const std::string& args) {
  std::string cmd = g_cli_path + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

bool same_file_bytes(const std::string& a, const std::string& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

void criterion_determinism(Check& c) {
  // library level: identical seeds, identical serialized outcomes
  std::mt19937_64 rng(99);
  GridEnvironment env = random_reachability_env(rng, 10, 4, 6, 0.2);
  Rmpn net = grid_to_rmpn(env);
  CnfFormula f = all_regions_formula(net.num_symbols);
  PlanConfig cfg;
  cfg.rng_seed = 2024;
  cfg.collision_mode = CollisionMode::IntermediateMarkings;
  c.require(to_json(plan(net, f, cfg)) == to_json(plan(net, f, cfg)),
            "outcome serialization differs between runs");

  if (g_cli_path.empty()) {
    c.annotate("no CLI path given; file-level checks skipped");
    return;
  }
  std::string dir = "acceptance_determinism_tmp";
  c.require(std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) == 0,
            "could not prepare scratch directory");
  if (!c.pass) return;
  std::string env_path = dir + "/env.json";
  std::string cnf_path = dir + "/mission.cnf";
  {
    save(env, env_path);
    std::ofstream out(cnf_path);
    out << to_dimacs(f);
  }
  c.require(run_cli("plan --env " + env_path + " --cnf " + cnf_path + " --seed 7 --out " +
                    dir + "/a.json") == 0,
            "cli plan run failed");
  c.require(run_cli("plan --env " + env_path + " --cnf " + cnf_path + " --seed 7 --out " +
                    dir + "/b.json") == 0,
            "cli plan rerun failed");
  c.require(same_file_bytes(dir + "/a.json", dir + "/b.json"),
            "outcome files differ between identical runs");
  c.require(run_cli("bench --scenarios 2 --repeats 2 --robots 5 --symbols 4 --seed 11 "
                    "--deterministic --out " + dir + "/a.csv") == 0,
            "cli bench run failed");
  c.require(run_cli("bench --scenarios 2 --repeats 2 --robots 5 --symbols 4 --seed 11 "
                    "--deterministic --out " + dir + "/b.csv") == 0,
            "cli bench rerun failed");
  c.require(same_file_bytes(dir + "/a.csv", dir + "/b.csv"),
            "benchmark files differ between identical runs");
  if (std::system(("rm -rf " + dir).c_str()) != 0)
    c.annotate("scratch directory not removed");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  struct Entry {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> fn;
  };
  const std::vector<Entry> criteria = {
      {1, "worked-example fidelity", 1, criterion_worked_examples},
      {2, "single-step stack certification", 120, criterion_single_step_tu},
      {3, "staged stack certification", 300, criterion_staged_tu},
      {4, "constructive partitions", 120, criterion_partitions},
      {5, "pinned-capacity integrality", 60, criterion_lp_integrality},
      {6, "reachability optimality", 300, criterion_reachability_optimality},
      {7, "mission suboptimality band", 600, criterion_boolean_band},
      {8, "rounding iteration bound", 600, criterion_iteration_bound},
      {9, "staged collision freedom", 60, criterion_collision_stages},
      {10, "infeasibility propagation", 1, criterion_infeasibility},
      {11, "seeded determinism", 60, criterion_determinism},
  };
  int failures = 0;
  for (const Entry& e : criteria) {
    Check check;
    double t0 = seconds();
    try {
      e.fn(check);
    } catch (const std::exception& ex) {
      check.pass = false;
      check.note = std::string("exception: ") + ex.what();
    }
    double dt = seconds() - t0;
    check.require(dt < e.budget_seconds, "runtime budget exceeded");
    std::printf("[%s] %2d %-34s (%6.2fs)%s%s\n", check.pass ? "PASS" : "FAIL", e.id,
                e.name, dt, check.note.empty() ? "" : " -- ", check.note.c_str());
    std::fflush(stdout);
    if (!check.pass) ++failures;
  }
  if (failures) std::printf("%d criteria failed\n", failures);
  return failures;
}
