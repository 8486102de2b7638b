// Command-line frontend: workspace generation, mission planning with
// optional stage plots, scalability benchmarks, and unimodularity
// certification reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rmpn/cnf.hpp"
#include "rmpn/grid.hpp"
#include "rmpn/lp.hpp"
#include "rmpn/oracle.hpp"
#include "rmpn/paths.hpp"
#include "rmpn/petri.hpp"
#include "rmpn/planner.hpp"
#include "rmpn/tu.hpp"

namespace {

using namespace rmpn;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (a * 1000003ULL + b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// net files (used by check-tu so malformed nets can be certified negatively)

Rmpn net_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("invalid net JSON: ") + e.what());
  }
  Rmpn net;
  net.num_places = j.at("places").get<int>();
  for (const auto& jt : j.at("transitions")) {
    std::vector<int> pre, post;
    if (jt.is_array()) {
      pre = {jt.at(0).get<int>()};
      post = {jt.at(1).get<int>()};
    } else {
      pre = jt.at("pre").get<std::vector<int>>();
      post = jt.at("post").get<std::vector<int>>();
    }
    for (int p : pre)
      if (p < 0 || p >= net.num_places) throw std::runtime_error("net place out of range");
    for (int p : post)
      if (p < 0 || p >= net.num_places) throw std::runtime_error("net place out of range");
    net.pre_places.push_back(pre);
    net.post_places.push_back(post);
  }
  net.initial_marking.assign(net.num_places, 0);
  if (j.contains("marking"))
    net.initial_marking = j.at("marking").get<std::vector<int>>();
  net.place_symbols.assign(net.num_places, {});
  return net;
}

// dense stack of the token-flow and post matrices for arbitrary nets
IntMatrix raw_stack(const Rmpn& net) {
  const int P = net.num_places;
  const int T = net.num_transitions();
  IntMatrix m(2 * P, T);
  for (int t = 0; t < T; ++t) {
    for (int p : net.pre_places[t]) m.at(p, t) -= 1;
    for (int p : net.post_places[t]) {
      m.at(p, t) += 1;
      m.at(P + p, t) += 1;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// stage plots

std::string color_for_cell(const GridEnvironment& env, int cell,
                           const std::vector<char>& is_start,
                           const std::vector<int>& region_of_cell,
                           const std::vector<char>& region_visited) {
  if (env.obstacle[cell]) return "#9e9e9e";
  if (is_start[cell]) return "#e53935";
  int region = region_of_cell[cell];
  if (region >= 0) return region_visited[region] ? "#43a047" : "#1e88e5";
  return "#ffffff";
}

std::string render_stage_svg(const GridEnvironment& env, const Rmpn& net,
                             const Marking& stage_start,
                             const std::vector<char>& region_visited,
                             const std::vector<Walk>& stage_walks) {
  const int S = 24;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << env.width * S
      << "\" height=\"" << env.height * S << "\">\n";

  std::vector<int> region_of_cell(env.num_cells(), -1);
  for (size_t r = 0; r < env.regions.size(); ++r)
    for (Cell c : env.regions[r].cells)
      region_of_cell[env.cell_index(c)] = static_cast<int>(r);
  std::vector<char> is_start(env.num_cells(), 0);
  for (int p = 0; p < net.num_places; ++p)
    if (stage_start[p] > 0) is_start[net.place_cell[p]] = 1;

  for (int idx = 0; idx < env.num_cells(); ++idx) {
    Cell c = env.cell_at(idx);
    svg << "  <rect x=\"" << c.x * S << "\" y=\"" << c.y * S << "\" width=\"" << S
        << "\" height=\"" << S << "\" fill=\""
        << color_for_cell(env, idx, is_start, region_of_cell, region_visited)
        << "\" stroke=\"#dddddd\"/>\n";
  }
  for (const Walk& walk : stage_walks) {
    if (walk.size() < 2) continue;
    svg << "  <polyline fill=\"none\" stroke=\"#212121\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < walk.size(); ++i) {
      Cell c = env.cell_at(net.place_cell[walk[i]]);
      svg << c.x * S + S / 2 << "," << c.y * S + S / 2;
      if (i + 1 < walk.size()) svg << " ";
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// ---------------------------------------------------------------------------
// random missions for the benchmark harness

CnfFormula random_boolean_mission(std::mt19937_64& rng, int n_symbols, int n_robots) {
  // draw a witness assignment first so the mission is satisfiable and
  // requires no more regions than robots
  std::vector<int> witness(n_symbols, 0);
  int ones = 1 + static_cast<int>(rng() % std::max(1, std::min(n_robots, n_symbols)));
  for (int i = 0; i < ones; ++i) witness[rng() % n_symbols] = 1;

  CnfFormula f;
  f.num_symbols = n_symbols;
  int n_clauses = n_symbols / 2 + 1 + static_cast<int>(rng() % n_symbols);
  for (int i = 0; i < n_clauses; ++i) {
    int len = 1 + static_cast<int>(rng() % 3);
    std::vector<char> used(n_symbols, 0);
    std::vector<Literal> clause;
    for (int k = 0; k < len; ++k) {
      int sym = static_cast<int>(rng() % n_symbols);
      if (used[sym]) continue;
      used[sym] = 1;
      clause.push_back({sym, (rng() & 1) != 0});
    }
    // anchor one literal to the witness so the clause is satisfied by it
    int anchor = static_cast<int>(rng() % clause.size());
    clause[anchor].negated = witness[clause[anchor].symbol] == 0;
    f.clauses.push_back(std::move(clause));
  }
  return f;
}

GridEnvironment reseat_robots(const GridEnvironment& base, std::uint64_t seed) {
  GridEnvironment env = base;
  env.robot_starts.clear();
  std::vector<int> comp = largest_component(env);
  std::vector<char> taken(env.num_cells(), 0);
  for (const Region& r : env.regions)
    for (Cell c : r.cells) taken[env.cell_index(c)] = 1;
  std::vector<int> pool;
  for (int idx : comp)
    if (!taken[idx]) pool.push_back(idx);
  if (pool.size() < base.robot_starts.size())
    throw InsufficientFreeSpace("not enough free cells to reseat robots");
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < base.robot_starts.size(); ++i) {
    std::swap(pool[i], pool[i + rng() % (pool.size() - i)]);
    env.robot_starts.push_back(env.cell_at(pool[i]));
  }
  env.seed = seed;
  return env;
}

// ---------------------------------------------------------------------------
// subcommands

struct GenArgs {
  int width = 16, height = 16, regions = 5, robots = 5;
  double density = 0.2;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "environment.json";
};

int cmd_gen(const GenArgs& a) {
  std::uint64_t seed = a.seed;
  if (!a.seed_given) seed = std::random_device{}();
  GridEnvironment env = generate(a.width, a.height, a.regions, a.robots, a.density, seed);
  save(env, a.out);
  std::cout << "wrote " << a.out << " (seed " << seed << ")\n";
  return kExitOk;
}

struct PlanArgs {
  std::string env_path, cnf_path;
  std::string collision = "none";
  std::uint64_t seed = 0;
  std::string out = "outcome.json";
  std::string plot_prefix;
  std::string paths_out;
};

CollisionMode parse_collision(const std::string& name) {
  if (name == "none") return CollisionMode::None;
  if (name == "capacity") return CollisionMode::CapacityOnly;
  if (name == "intermediate") return CollisionMode::IntermediateMarkings;
  throw std::runtime_error("unknown collision mode: " + name);
}

int cmd_plan(const PlanArgs& a) {
  GridEnvironment env = load(a.env_path);
  CnfFormula f = load_cnf(a.cnf_path);
  Rmpn net = grid_to_rmpn(env);
  if (f.num_symbols > net.num_symbols)
    throw std::runtime_error("mission references more symbols than the workspace has");
  f.num_symbols = net.num_symbols;  // symbols without clauses stay unconstrained
  PlanConfig cfg;
  cfg.collision_mode = parse_collision(a.collision);
  cfg.rng_seed = a.seed;
  PlanOutcome outcome = plan(net, f, cfg);
  write_file(a.out, to_json(outcome));
  if (outcome.status != PlanStatus::Solved) {
    std::cerr << "plan infeasible (phase "
              << (outcome.failed_phase == PlanPhase::BooleanTask  ? "boolean-task"
                  : outcome.failed_phase == PlanPhase::Reachability ? "reachability"
                                                                    : "staged")
              << ")\n";
    return kExitInfeasible;
  }

  // per-stage walks for plots and the optional trajectory dump
  std::vector<std::vector<Walk>> stage_walks;
  std::vector<Marking> stage_starts;
  Marking cur = net.initial_marking;
  for (const PlanStage& st : outcome.stages) {
    stage_starts.push_back(cur);
    stage_walks.push_back(decompose_firing_vector(net, cur, st.sigma, st.marking_after));
    cur = st.marking_after;
  }
  if (!a.paths_out.empty())
    write_file(a.paths_out, trajectories_to_json(stitch_stages(stage_walks)));
  if (!a.plot_prefix.empty()) {
    std::vector<int> place_of_cell(env.num_cells(), -1);
    for (int p = 0; p < net.num_places; ++p) place_of_cell[net.place_cell[p]] = p;
    std::vector<char> region_visited(env.regions.size(), 0);
    for (size_t s = 0; s < outcome.stages.size(); ++s) {
      for (size_t r = 0; r < env.regions.size(); ++r) {
        int tokens = 0;
        for (Cell c : env.regions[r].cells) {
          int p = place_of_cell[env.cell_index(c)];
          if (p >= 0) tokens += stage_starts[s][p];
        }
        if (tokens > 0) region_visited[r] = 1;
      }
      std::string file = a.plot_prefix + "_stage" + std::to_string(s + 1) + ".svg";
      write_file(file,
                 render_stage_svg(env, net, stage_starts[s], region_visited, stage_walks[s]));
    }
  }
  std::cout << "cost " << outcome.cost_first_term << " capacity " << outcome.s_bar
            << " stages " << outcome.stages.size() << " iterations "
            << outcome.rounding_iterations << "\n";
  return kExitOk;
}

struct BenchArgs {
  int scenarios = 3, repeats = 3, robots = 8, symbols = 6;
  int width = 0, height = 0;
  double density = 0.2;
  std::string mode = "reach";
  std::string collision = "none";
  bool with_oracle = false;
  long long node_budget = kDefaultNodeBudget;
  std::uint64_t seed = 1;
  std::string out = "bench.csv";
  bool deterministic = false;
};

struct BenchRecord {
  int scenario = 0, repeat = 0;
  std::string status = "ok";
  int n_symbols = 0, n_robots = 0, num_places = 0, num_transitions = 0;
  double runtime_total = 0, runtime_lp7 = 0, runtime_lp7_fixed_s = 0;
  double cost = 0;
  int cell_capacity = 0, n_stages = 0, rounding_iterations = 0;
  double relative_error = 0;
  bool has_error = false;
  std::uint64_t seed = 0;
};

std::string csv_double(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

int cmd_bench(const BenchArgs& a) {
  int width = a.width, height = a.height;
  if (width == 0 || height == 0) {
    // grow the workspace with the team so congestion pressure stays put
    int side = static_cast<int>(std::ceil(
        std::sqrt((a.robots + a.symbols) * 4.0 / (1.0 - a.density) + 25.0)));
    width = height = std::max(side, 6);
  }

  const int total = a.scenarios * a.repeats;
  std::vector<BenchRecord> records(total);
  std::vector<GridEnvironment> scenario_env(a.scenarios);
  std::vector<CnfFormula> scenario_formula(a.scenarios);
  for (int s = 0; s < a.scenarios; ++s) {
    std::uint64_t env_seed = mix_seed(a.seed, s, 0);
    scenario_env[s] = generate(width, height, a.symbols, a.robots, a.density, env_seed);
    std::mt19937_64 rng(mix_seed(a.seed, s, 1));
    if (a.mode == "bool") {
      scenario_formula[s] = random_boolean_mission(rng, a.symbols, a.robots);
    } else {
      CnfFormula f;
      f.num_symbols = a.symbols;
      for (int y = 0; y < a.symbols; ++y) f.clauses.push_back({{y, false}});
      scenario_formula[s] = f;
    }
  }

#pragma omp parallel for schedule(dynamic)
  for (int idx = 0; idx < total; ++idx) {
    int s = idx / a.repeats;
    int r = idx % a.repeats;
    BenchRecord& rec = records[idx];
    rec.scenario = s;
    rec.repeat = r;
    rec.n_symbols = a.symbols;
    rec.n_robots = a.robots;
    rec.seed = mix_seed(a.seed, s, r + 2);
    try {
      GridEnvironment env = reseat_robots(scenario_env[s], rec.seed);
      Rmpn net = grid_to_rmpn(env);
      rec.num_places = net.num_places;
      rec.num_transitions = net.num_transitions();
      PlanConfig cfg;
      cfg.collision_mode = parse_collision(a.collision);
      cfg.rng_seed = rec.seed;
      PlanOutcome outcome = plan(net, scenario_formula[s], cfg);
      rec.status = outcome.status == PlanStatus::Solved ? "ok" : "infeasible";
      rec.cost = outcome.cost_first_term;
      rec.cell_capacity = outcome.s_bar;
      rec.n_stages = static_cast<int>(outcome.stages.size());
      rec.rounding_iterations = outcome.rounding_iterations;
      rec.runtime_total = outcome.timings.total;
      rec.runtime_lp7 = outcome.timings.last_task_lp;
      rec.runtime_lp7_fixed_s = outcome.timings.final_lp;
      if (a.with_oracle && outcome.status == PlanStatus::Solved) {
        CompareReport rep = compare(net, scenario_formula[s], cfg, a.node_budget);
        rec.relative_error = rep.relative_error;
        rec.has_error = rep.ilp_status == "solved";
        rec.runtime_total = rep.planner_runtime + rep.ilp_runtime;
      }
    } catch (const std::exception&) {
      rec.status = "error";
    }
  }

  std::ostringstream csv;
  csv << "# rmpn bench csv v1\n";
  csv << "kind,scenario,repeat,status,n_symbols,n_robots,num_places,num_transitions,"
         "runtime_total,runtime_lp7,runtime_lp7_fixed_s,cost,cell_capacity,n_stages,"
         "rounding_iterations,relative_error,seed\n";
  for (const BenchRecord& rec : records) {
    double rt = a.deterministic ? 0.0 : rec.runtime_total;
    double r7 = a.deterministic ? 0.0 : rec.runtime_lp7;
    double r7f = a.deterministic ? 0.0 : rec.runtime_lp7_fixed_s;
    csv << "run," << rec.scenario << "," << rec.repeat << "," << rec.status << ","
        << rec.n_symbols << "," << rec.n_robots << "," << rec.num_places << ","
        << rec.num_transitions << "," << csv_double(rt) << "," << csv_double(r7) << ","
        << csv_double(r7f) << "," << csv_double(rec.cost) << "," << rec.cell_capacity
        << "," << rec.n_stages << "," << rec.rounding_iterations << ","
        << (rec.has_error ? csv_double(rec.relative_error) : "") << "," << rec.seed
        << "\n";
  }

  // mean row over successful runs, mirroring the reporting tables
  BenchRecord mean;
  int ok = 0, err_count = 0;
  for (const BenchRecord& rec : records) {
    if (rec.status != "ok") continue;
    ++ok;
    mean.num_places += rec.num_places;
    mean.num_transitions += rec.num_transitions;
    mean.runtime_total += rec.runtime_total;
    mean.runtime_lp7 += rec.runtime_lp7;
    mean.runtime_lp7_fixed_s += rec.runtime_lp7_fixed_s;
    mean.cost += rec.cost;
    mean.cell_capacity += rec.cell_capacity;
    mean.n_stages += rec.n_stages;
    mean.rounding_iterations += rec.rounding_iterations;
    if (rec.has_error) {
      mean.relative_error += rec.relative_error;
      ++err_count;
    }
  }
  if (ok > 0) {
    csv << "mean,,,ok_" << ok << "_of_" << total << "," << a.symbols << "," << a.robots
        << "," << csv_double(static_cast<double>(mean.num_places) / ok) << ","
        << csv_double(static_cast<double>(mean.num_transitions) / ok) << ","
        << csv_double(a.deterministic ? 0.0 : mean.runtime_total / ok) << ","
        << csv_double(a.deterministic ? 0.0 : mean.runtime_lp7 / ok) << ","
        << csv_double(a.deterministic ? 0.0 : mean.runtime_lp7_fixed_s / ok) << ","
        << csv_double(mean.cost / ok) << ","
        << csv_double(static_cast<double>(mean.cell_capacity) / ok) << ","
        << csv_double(static_cast<double>(mean.n_stages) / ok) << ","
        << csv_double(static_cast<double>(mean.rounding_iterations) / ok) << ","
        << (err_count ? csv_double(mean.relative_error / err_count) : "") << ",\n";
  }
  write_file(a.out, csv.str());
  std::cout << "wrote " << a.out << " (" << ok << "/" << total << " solved)\n";
  return kExitOk;
}

struct CheckTuArgs {
  std::string env_path, net_path;
  int stages = 2;
  int max_order = 5;
  long long budget = kDefaultDetBudget;
  long long samples = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

nlohmann::ordered_json certify_matrix(const IntMatrix& mat, const std::string& layout,
                                      const StackedMatrix* stack, const CheckTuArgs& a) {
  nlohmann::ordered_json rep;
  rep["matrix_shape"] = {mat.rows, mat.cols};
  rep["layout"] = layout;
  long long needed = count_submatrices(mat.rows, mat.cols, a.max_order);
  if (needed <= a.budget) {
    rep["method"] = "bruteforce";
    auto bad = find_non_unimodular_minor(mat, a.max_order, a.budget);
    rep["certified"] = !bad.has_value();
    if (bad)
      rep["counterexample"] = {{"rows", bad->rows}, {"cols", bad->cols}, {"det", bad->det}};
  } else if (stack) {
    std::cerr << "note: " << layout << " layout needs " << needed
              << " determinants, downgrading to partition sampling\n";
    rep["method"] = "partition-sampling";
    std::mt19937_64 rng(a.seed);
    bool all_ok = true;
    std::vector<int> bad_rows;
    for (long long i = 0; i < a.samples && all_ok; ++i) {
      std::vector<int> rows;
      for (int r = 0; r < mat.rows; ++r)
        if (rng() & 1) rows.push_back(r);
      RowPartition part = ghouila_houri_partition(*stack, rows);
      if (!verify_partition(mat, part)) {
        all_ok = false;
        bad_rows = rows;
      }
    }
    rep["certified"] = all_ok;
    if (!all_ok) rep["counterexample"] = {{"rows", bad_rows}};
  } else {
    std::cerr << "note: matrix too large for enumeration, sampling minors\n";
    rep["method"] = "minor-sampling";
    rep["certified"] = is_tu_sampled(mat, a.max_order, a.samples * 100, a.seed);
  }
  return rep;
}

int cmd_check_tu(const CheckTuArgs& a) {
  Rmpn net;
  if (!a.net_path.empty()) {
    std::ifstream in(a.net_path);
    if (!in) throw std::runtime_error("cannot open: " + a.net_path);
    std::stringstream ss;
    ss << in.rdbuf();
    net = net_from_json(ss.str());
  } else if (!a.env_path.empty()) {
    net = grid_to_rmpn(load(a.env_path));
  } else {
    throw std::runtime_error("check-tu needs --env or --net");
  }

  nlohmann::ordered_json out;
  out["state_machine"] = is_state_machine(net);
  out["reports"] = nlohmann::ordered_json::array();
  bool certified = true;
  if (is_state_machine(net)) {
    StackedMatrix single = make_single_step_stack(net);
    auto rep = certify_matrix(single.mat, "single-step", &single, a);
    certified = certified && rep["certified"].get<bool>();
    out["reports"].push_back(rep);
    if (a.stages >= 1) {
      StackedMatrix staged = make_staged_stack(net, a.stages);
      auto rep2 = certify_matrix(staged.mat, "staged", &staged, a);
      certified = certified && rep2["certified"].get<bool>();
      out["reports"].push_back(rep2);
    }
  } else {
    IntMatrix mat = raw_stack(net);
    auto rep = certify_matrix(mat, "single-step", nullptr, a);
    certified = certified && rep["certified"].get<bool>();
    out["reports"].push_back(rep);
  }
  out["certified"] = certified;
  std::string text = out.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_file(a.out, text);
  return certified ? kExitOk : kExitInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-robot mission planning on state-machine nets"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random workspace");
  gen_cmd->add_option("--width", gen.width)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--height", gen.height)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--regions", gen.regions)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--robots", gen.robots)->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--density", gen.density)->check(CLI::Range(0.0, 1.0));
  auto* seed_opt = gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out);

  PlanArgs plan_args;
  CLI::App* plan_cmd = app.add_subcommand("plan", "plan a mission on a workspace");
  plan_cmd->add_option("--env", plan_args.env_path)->required();
  plan_cmd->add_option("--cnf", plan_args.cnf_path)->required();
  plan_cmd->add_option("--collision", plan_args.collision)
      ->check(CLI::IsMember({"none", "capacity", "intermediate"}));
  plan_cmd->add_option("--seed", plan_args.seed);
  plan_cmd->add_option("--out", plan_args.out);
  plan_cmd->add_option("--plot", plan_args.plot_prefix,
                       "write one SVG per stage with this prefix");
  plan_cmd->add_option("--paths", plan_args.paths_out, "write robot trajectories JSON");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "run seeded scenario benchmarks");
  bench_cmd->add_option("--scenarios", bench.scenarios)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repeats", bench.repeats)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--robots", bench.robots)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--symbols", bench.symbols)->check(CLI::PositiveNumber);
  bench_cmd->add_option("--width", bench.width);
  bench_cmd->add_option("--height", bench.height);
  bench_cmd->add_option("--density", bench.density)->check(CLI::Range(0.0, 1.0));
  bench_cmd->add_option("--mode", bench.mode)->check(CLI::IsMember({"reach", "bool"}));
  bench_cmd->add_option("--collision", bench.collision)
      ->check(CLI::IsMember({"none", "capacity", "intermediate"}));
  bench_cmd->add_flag("--with-oracle", bench.with_oracle);
  bench_cmd->add_option("--node-budget", bench.node_budget);
  bench_cmd->add_option("--seed", bench.seed);
  bench_cmd->add_option("--out", bench.out);
  bench_cmd->add_flag("--deterministic", bench.deterministic,
                      "zero wall-clock columns for byte-reproducible files");

  CheckTuArgs tu;
  CLI::App* tu_cmd = app.add_subcommand("check-tu", "certify constraint stacks");
  tu_cmd->add_option("--env", tu.env_path);
  tu_cmd->add_option("--net", tu.net_path);
  tu_cmd->add_option("--stages", tu.stages)->check(CLI::NonNegativeNumber);
  tu_cmd->add_option("--max-order", tu.max_order)->check(CLI::Range(1, 12));
  tu_cmd->add_option("--budget", tu.budget);
  tu_cmd->add_option("--samples", tu.samples);
  tu_cmd->add_option("--seed", tu.seed);
  tu_cmd->add_option("--out", tu.out);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen_cmd) {
      gen.seed_given = seed_opt->count() > 0;
      return cmd_gen(gen);
    }
    if (*plan_cmd) return cmd_plan(plan_args);
    if (*bench_cmd) return cmd_bench(bench);
    if (*tu_cmd) return cmd_check_tu(tu);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
