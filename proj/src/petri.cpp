#include "rmpn/petri.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace rmpn {

int Rmpn::num_robots() const {
  return std::accumulate(initial_marking.begin(), initial_marking.end(), 0);
}

Rmpn grid_to_rmpn(const GridEnvironment& env) {
  env.validate();
  Rmpn net;
  std::vector<int> place_of_cell(env.num_cells(), -1);
  for (int idx = 0; idx < env.num_cells(); ++idx) {
    if (env.obstacle[idx]) continue;
    place_of_cell[idx] = net.num_places++;
    net.place_cell.push_back(idx);
  }
  if (net.num_places == 0) throw EmptyEnvironment("no free cells");

  for (int idx = 0; idx < env.num_cells(); ++idx) {
    int p = place_of_cell[idx];
    if (p < 0) continue;
    Cell c = env.cell_at(idx);
    const Cell nbs[2] = {{c.x + 1, c.y}, {c.x, c.y + 1}};
    for (Cell nb : nbs) {
      if (!env.in_bounds(nb)) continue;
      int q = place_of_cell[env.cell_index(nb)];
      if (q < 0) continue;
      net.add_transition(p, q);
      net.add_transition(q, p);
    }
  }

  net.num_symbols = env.num_symbols();
  net.place_symbols.assign(net.num_places, {});
  net.symbol_places.assign(net.num_symbols, {});
  for (const Region& r : env.regions)
    for (Cell cell : r.cells) {
      int p = place_of_cell[env.cell_index(cell)];
      net.place_symbols[p].push_back(r.symbol);
      net.symbol_places[r.symbol].push_back(p);
    }

  net.initial_marking.assign(net.num_places, 0);
  for (Cell start : env.robot_starts) {
    int p = place_of_cell[env.cell_index(start)];
    if (p < 0) throw RobotOnObstacle("robot start on obstacle cell");
    ++net.initial_marking[p];
  }
  return net;
}

Marking apply_state_equation(const Rmpn& net, const Marking& m0,
                             const FiringVector& sigma) {
  if (static_cast<int>(m0.size()) != net.num_places ||
      static_cast<int>(sigma.size()) != net.num_transitions())
    throw PetriError("state equation dimension mismatch");
  Marking m = m0;
  for (int t = 0; t < net.num_transitions(); ++t) {
    if (sigma[t] == 0) continue;
    for (int p : net.pre_places[t]) m[p] -= sigma[t];
    for (int p : net.post_places[t]) m[p] += sigma[t];
  }
  for (int p = 0; p < net.num_places; ++p)
    if (m[p] < 0)
      throw NegativeMarking("place " + std::to_string(p) +
                            " would hold " + std::to_string(m[p]) + " tokens");
  return m;
}

std::vector<int> observe(const Rmpn& net, const Marking& m) {
  if (static_cast<int>(m.size()) != net.num_places)
    throw PetriError("observation dimension mismatch");
  std::vector<int> y(net.num_symbols, 0);
  for (int s = 0; s < net.num_symbols; ++s)
    for (int p : net.symbol_places[s]) y[s] += m[p];
  return y;
}

bool is_state_machine(const Rmpn& net) {
  for (int t = 0; t < net.num_transitions(); ++t)
    if (net.pre_places[t].size() != 1 || net.post_places[t].size() != 1)
      return false;
  return true;
}

std::vector<int> round_integral(const std::vector<double>& v, double tol) {
  std::vector<int> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    double r = std::round(v[i]);
    if (std::fabs(v[i] - r) > tol)
      throw NotIntegral("entry " + std::to_string(i) + " = " +
                        std::to_string(v[i]) + " is not integral");
    out[i] = static_cast<int>(r);
  }
  return out;
}

}  // namespace rmpn
