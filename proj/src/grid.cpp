#include "rmpn/grid.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace rmpn {
namespace {

// Bounded draw that does not depend on the standard library's
// distribution implementations, so seeded runs stay stable everywhere.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

double draw_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

int GridEnvironment::num_symbols() const {
  int n = 0;
  for (const auto& r : regions) n = std::max(n, r.symbol + 1);
  return n;
}

void GridEnvironment::validate() const {
  if (width <= 0 || height <= 0)
    throw EnvError("environment dimensions must be positive");
  if (static_cast<int>(obstacle.size()) != width * height)
    throw EnvError("obstacle map size does not match dimensions");
  std::vector<int> owner(static_cast<size_t>(width) * height, -1);
  for (size_t ri = 0; ri < regions.size(); ++ri) {
    const Region& r = regions[ri];
    if (r.symbol < 0) throw EnvError("negative region symbol");
    if (r.cells.empty()) throw EnvError("region with no cells");
    for (Cell c : r.cells) {
      if (!in_bounds(c)) throw EnvError("region cell out of bounds");
      if (is_obstacle(c)) throw EnvError("region cell on obstacle");
      int idx = cell_index(c);
      if (owner[idx] != -1) throw EnvError("regions overlap");
      owner[idx] = static_cast<int>(ri);
    }
  }
  for (Cell c : robot_starts) {
    if (!in_bounds(c)) throw EnvError("robot start out of bounds");
    if (is_obstacle(c)) throw EnvError("robot start on obstacle");
  }
}

std::vector<int> largest_component(const GridEnvironment& env) {
  const int n = env.num_cells();
  std::vector<int> comp(n, -1);
  std::vector<int> best;
  std::vector<int> stack;
  int comp_id = 0;
  for (int start = 0; start < n; ++start) {
    if (comp[start] != -1 || env.obstacle[start]) continue;
    std::vector<int> cells;
    stack.push_back(start);
    comp[start] = comp_id;
    while (!stack.empty()) {
      int idx = stack.back();
      stack.pop_back();
      cells.push_back(idx);
      Cell c = env.cell_at(idx);
      const Cell nbs[4] = {{c.x - 1, c.y}, {c.x + 1, c.y}, {c.x, c.y - 1}, {c.x, c.y + 1}};
      for (Cell nb : nbs) {
        if (!env.in_bounds(nb)) continue;
        int ni = env.cell_index(nb);
        if (env.obstacle[ni] || comp[ni] != -1) continue;
        comp[ni] = comp_id;
        stack.push_back(ni);
      }
    }
    // components are discovered in ascending order of their smallest cell,
    // so strict > implements the tie rule
    if (cells.size() > best.size()) best = std::move(cells);
    ++comp_id;
  }
  std::sort(best.begin(), best.end());
  return best;
}

GridEnvironment generate(int width, int height, int n_regions, int n_robots,
                         double obstacle_density, std::uint64_t seed) {
  if (width <= 0 || height <= 0) throw EnvError("dimensions must be positive");
  if (n_regions < 0 || n_robots < 0) throw EnvError("negative counts");
  std::mt19937_64 rng(seed);
  GridEnvironment env;
  env.width = width;
  env.height = height;
  env.seed = seed;
  env.obstacle.assign(static_cast<size_t>(width) * height, 0);
  for (auto& o : env.obstacle)
    if (draw_unit(rng) < obstacle_density) o = 1;

  std::vector<int> comp = largest_component(env);
  if (static_cast<int>(comp.size()) < n_regions + n_robots)
    throw InsufficientFreeSpace(
        "largest free component has " + std::to_string(comp.size()) +
        " cells, need " + std::to_string(n_regions + n_robots));

  // partial Fisher-Yates over the component cells
  std::vector<int> pool = comp;
  const int need = n_regions + n_robots;
  for (int i = 0; i < need; ++i) {
    std::uint64_t j = i + draw_below(rng, pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  for (int i = 0; i < n_regions; ++i)
    env.regions.push_back({i, {env.cell_at(pool[i])}});
  for (int i = 0; i < n_robots; ++i)
    env.robot_starts.push_back(env.cell_at(pool[n_regions + i]));
  env.validate();
  return env;
}

std::string to_json(const GridEnvironment& env) {
  nlohmann::ordered_json j;
  j["width"] = env.width;
  j["height"] = env.height;
  std::vector<std::array<int, 2>> obs;
  for (int i = 0; i < env.num_cells(); ++i)
    if (env.obstacle[i]) obs.push_back({env.cell_at(i).x, env.cell_at(i).y});
  j["obstacles"] = obs;
  j["regions"] = nlohmann::ordered_json::array();
  for (const Region& r : env.regions) {
    nlohmann::ordered_json jr;
    jr["symbol"] = r.symbol;
    std::vector<std::array<int, 2>> cells;
    for (Cell c : r.cells) cells.push_back({c.x, c.y});
    jr["cells"] = cells;
    j["regions"].push_back(jr);
  }
  std::vector<std::array<int, 2>> robots;
  for (Cell c : env.robot_starts) robots.push_back({c.x, c.y});
  j["robots"] = robots;
  j["seed"] = env.seed;
  return j.dump(2) + "\n";
}

GridEnvironment env_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw EnvParseError(std::string("invalid environment JSON: ") + e.what());
  }
  GridEnvironment env;
  try {
    env.width = j.at("width").get<int>();
    env.height = j.at("height").get<int>();
    if (env.width <= 0 || env.height <= 0)
      throw EnvParseError("field width/height: must be positive");
    env.obstacle.assign(static_cast<size_t>(env.width) * env.height, 0);
    for (const auto& o : j.at("obstacles")) {
      Cell c{o.at(0).get<int>(), o.at(1).get<int>()};
      if (!env.in_bounds(c)) throw EnvParseError("field obstacles: cell out of bounds");
      env.obstacle[env.cell_index(c)] = 1;
    }
    for (const auto& jr : j.at("regions")) {
      Region r;
      r.symbol = jr.at("symbol").get<int>();
      for (const auto& cc : jr.at("cells"))
        r.cells.push_back({cc.at(0).get<int>(), cc.at(1).get<int>()});
      env.regions.push_back(std::move(r));
    }
    for (const auto& rc : j.at("robots"))
      env.robot_starts.push_back({rc.at(0).get<int>(), rc.at(1).get<int>()});
    env.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw EnvParseError(std::string("environment JSON field error: ") + e.what());
  }
  try {
    env.validate();
  } catch (const EnvError& e) {
    throw EnvParseError(std::string("environment invariant violated: ") + e.what());
  }
  return env;
}

void save(const GridEnvironment& env, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw EnvError("cannot open for writing: " + path);
  out << to_json(env);
}

GridEnvironment load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvError("cannot open: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return env_from_json(ss.str());
}

}  // namespace rmpn
