#include "rmpn/paths.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <json.hpp>

namespace rmpn {
namespace {

struct Adjacency {
  // outgoing transition list per place
  std::vector<std::vector<int>> out;
  std::vector<int> from, to;
};

Adjacency build_adjacency(const Rmpn& net) {
  Adjacency adj;
  adj.out.resize(net.num_places);
  adj.from.resize(net.num_transitions());
  adj.to.resize(net.num_transitions());
  for (int t = 0; t < net.num_transitions(); ++t) {
    if (net.pre_places[t].size() != 1 || net.post_places[t].size() != 1)
      throw FlowInconsistent("walk extraction needs a state-machine net");
    adj.from[t] = net.pre_places[t][0];
    adj.to[t] = net.post_places[t][0];
    adj.out[adj.from[t]].push_back(t);
  }
  return adj;
}

// BFS over transitions with residual firings from src to the nearest cell
// where pred holds; returns the transition path or empty when unreachable.
template <typename Pred>
std::vector<int> bfs_path(const Adjacency& adj, const std::vector<int>& residual,
                          int src, Pred pred) {
  std::vector<int> parent_edge(adj.out.size(), -2);
  parent_edge[src] = -1;
  std::deque<int> queue{src};
  int goal = pred(src) ? src : -1;
  while (goal < 0 && !queue.empty()) {
    int p = queue.front();
    queue.pop_front();
    for (int t : adj.out[p]) {
      if (residual[t] <= 0) continue;
      int q = adj.to[t];
      if (parent_edge[q] != -2) continue;
      parent_edge[q] = t;
      if (pred(q)) {
        goal = q;
        break;
      }
      queue.push_back(q);
    }
  }
  if (goal < 0) return {};
  std::vector<int> edges;
  for (int p = goal; parent_edge[p] >= 0; p = adj.from[parent_edge[p]])
    edges.push_back(parent_edge[p]);
  std::reverse(edges.begin(), edges.end());
  return edges;
}

}  // namespace

std::vector<Walk> decompose_firing_vector(const Rmpn& net, const Marking& m_start,
                                          const FiringVector& sigma,
                                          const Marking& m_end) {
  if (static_cast<int>(m_start.size()) != net.num_places ||
      static_cast<int>(m_end.size()) != net.num_places ||
      static_cast<int>(sigma.size()) != net.num_transitions())
    throw FlowInconsistent("dimension mismatch");
  for (int v : sigma)
    if (v < 0) throw FlowInconsistent("negative firing count");
  {
    Marking check = apply_state_equation(net, m_start, sigma);
    if (check != m_end)
      throw FlowInconsistent("sigma does not map the start to the end marking");
  }
  Adjacency adj = build_adjacency(net);
  std::vector<int> residual = sigma;
  std::vector<int> surplus(net.num_places), deficit(net.num_places);
  for (int p = 0; p < net.num_places; ++p) {
    surplus[p] = std::max(0, m_start[p] - m_end[p]);
    deficit[p] = std::max(0, m_end[p] - m_start[p]);
  }
  std::vector<int> starts_used(net.num_places, 0);
  std::vector<Walk> walks;

  // moving tokens: shortest surplus -> deficit walks first
  for (int src = 0; src < net.num_places; ++src) {
    while (surplus[src] > 0) {
      auto edges = bfs_path(adj, residual, src,
                            [&](int q) { return deficit[q] > 0; });
      if (edges.empty())
        throw FlowInconsistent("no residual walk from a surplus to a deficit cell");
      Walk w{src};
      for (int t : edges) {
        --residual[t];
        w.push_back(adj.to[t]);
      }
      --surplus[src];
      --deficit[w.back()];
      ++starts_used[src];
      walks.push_back(std::move(w));
    }
  }
  // stationary tokens
  for (int p = 0; p < net.num_places; ++p)
    for (int k = starts_used[p]; k < m_start[p]; ++k) walks.push_back({p});

  // leftover circulation: peel one simple cycle at a time and splice it
  // into a walk passing through it
  {
    std::vector<int> temp_use(net.num_transitions(), 0);
    std::vector<int> pos(net.num_places, -1);
    for (;;) {
      int t0 = -1;
      for (int t = 0; t < net.num_transitions(); ++t)
        if (residual[t] > 0) {
          t0 = t;
          break;
        }
      if (t0 < 0) break;

      // walk forward until a place repeats; the tail loop is a simple cycle
      std::fill(temp_use.begin(), temp_use.end(), 0);
      std::fill(pos.begin(), pos.end(), -1);
      std::vector<int> trace_edges;
      int cur = adj.from[t0];
      pos[cur] = 0;
      int cycle_start = -1;
      while (cycle_start < 0) {
        int next = -1;
        for (int t : adj.out[cur])
          if (residual[t] - temp_use[t] > 0) {
            next = t;
            break;
          }
        if (next < 0) throw FlowInconsistent("residual flow does not close a cycle");
        ++temp_use[next];
        trace_edges.push_back(next);
        cur = adj.to[next];
        if (pos[cur] >= 0)
          cycle_start = pos[cur];
        else
          pos[cur] = static_cast<int>(trace_edges.size());
      }
      std::vector<int> cycle_edges(trace_edges.begin() + cycle_start, trace_edges.end());
      for (int t : cycle_edges) --residual[t];
      std::vector<char> on_cycle(net.num_places, 0);
      for (int t : cycle_edges) on_cycle[adj.from[t]] = 1;

      bool spliced = false;
      for (Walk& w : walks) {
        for (size_t i = 0; i < w.size() && !spliced; ++i) {
          if (!on_cycle[w[i]]) continue;
          // rotate the cycle to start at w[i] and splice it in
          std::vector<int> rotated;
          int n = static_cast<int>(cycle_edges.size());
          int offset = 0;
          while (adj.from[cycle_edges[offset]] != w[i]) ++offset;
          for (int k = 0; k < n; ++k) rotated.push_back(cycle_edges[(offset + k) % n]);
          Walk tail(w.begin() + i + 1, w.end());
          w.resize(i + 1);
          for (int t : rotated) w.push_back(adj.to[t]);
          w.insert(w.end(), tail.begin(), tail.end());
          spliced = true;
        }
        if (spliced) break;
      }
      if (!spliced)
        throw FlowInconsistent("circulation disconnected from every token walk");
    }
  }
  return walks;
}

std::vector<RobotTrajectory> stitch_stages(
    const std::vector<std::vector<Walk>>& stage_fragments) {
  std::vector<RobotTrajectory> robots;
  if (stage_fragments.empty()) return robots;

  std::vector<Walk> first = stage_fragments[0];
  std::sort(first.begin(), first.end());
  for (size_t i = 0; i < first.size(); ++i) {
    RobotTrajectory rt;
    rt.robot_id = static_cast<int>(i);
    rt.cells = first[i];
    rt.stage_boundaries.push_back(static_cast<int>(rt.cells.size()) - 1);
    robots.push_back(std::move(rt));
  }
  for (size_t stage = 1; stage < stage_fragments.size(); ++stage) {
    std::map<int, std::deque<const Walk*>> by_start;
    std::vector<Walk> sorted = stage_fragments[stage];
    std::sort(sorted.begin(), sorted.end());
    for (const Walk& w : sorted) {
      if (w.empty()) throw BoundaryMismatch("empty stage fragment");
      by_start[w.front()].push_back(&w);
    }
    for (RobotTrajectory& rt : robots) {
      int at = rt.cells.back();
      auto it = by_start.find(at);
      if (it == by_start.end() || it->second.empty())
        throw BoundaryMismatch("no stage fragment starts at cell " + std::to_string(at));
      const Walk* w = it->second.front();
      it->second.pop_front();
      rt.cells.insert(rt.cells.end(), w->begin() + 1, w->end());
      rt.stage_boundaries.push_back(static_cast<int>(rt.cells.size()) - 1);
    }
    for (auto& [cell, rest] : by_start)
      if (!rest.empty())
        throw BoundaryMismatch("unmatched stage fragment at cell " + std::to_string(cell));
  }
  return robots;
}

bool audit_capacity(const Rmpn& net, const Marking& m_start,
                    const FiringVector& sigma, int cap) {
  std::vector<long long> load(net.num_places, 0);
  for (int p = 0; p < net.num_places; ++p) load[p] = m_start[p];
  for (int t = 0; t < net.num_transitions(); ++t)
    for (int p : net.post_places[t]) load[p] += sigma[t];
  for (int p = 0; p < net.num_places; ++p)
    if (load[p] > cap) return false;
  return true;
}

std::string trajectories_to_json(const std::vector<RobotTrajectory>& trajectories) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const RobotTrajectory& rt : trajectories) {
    nlohmann::ordered_json r;
    r["robot"] = rt.robot_id;
    r["cells"] = rt.cells;
    r["stages"] = rt.stage_boundaries;
    j.push_back(r);
  }
  return j.dump(2) + "\n";
}

}  // namespace rmpn
