#include "rmpn/tu.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

namespace rmpn {
namespace {

constexpr int kMaxOrder = 16;

// Bareiss elimination on a small copy; entries stay exact in 64 bits for
// the {-1,0,1} matrices and orders handled here.
long long det_bareiss(long long* m, int n) {
  long long prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m[k * n + k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m[i * n + k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m[k * n + j], m[swap * n + j]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j)
        m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
      m[i * n + k] = 0;
    }
    prev = m[k * n + k];
  }
  return sign * m[(n - 1) * n + (n - 1)];
}

long long det_submatrix(const IntMatrix& m, const int* rows, const int* cols, int k) {
  long long buf[kMaxOrder * kMaxOrder];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) buf[i * k + j] = m.at(rows[i], cols[j]);
  return det_bareiss(buf, k);
}

bool next_combination(std::vector<int>& c, int n) {
  int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Unranks the r-th k-combination of {0..n-1} in lexicographic order.
std::vector<int> unrank_combination(long long r, int n, int k) {
  std::vector<int> c(k);
  int start = 0;
  for (int i = 0; i < k; ++i) {
    for (int v = start; v < n; ++v) {
      long long count = 1;
      int remaining = k - i - 1;
      for (int t = 0; t < remaining; ++t) {
        count = count * (n - v - 1 - t) / (t + 1);
        if (count > (1LL << 62)) break;
      }
      if (r < count) {
        c[i] = v;
        start = v + 1;
        break;
      }
      r -= count;
    }
  }
  return c;
}

long long binom_saturating(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    if (r > (1LL << 61) / (n - k + i)) return 1LL << 62;
    r = r * (n - k + i) / i;
  }
  return r;
}

std::optional<TuCounterexample> scan_minors(const IntMatrix& m, int max_order,
                                            long long budget, bool parallel) {
  max_order = std::min({max_order, m.rows, m.cols, kMaxOrder});
  long long total = count_submatrices(m.rows, m.cols, max_order);
  if (total > budget)
    throw TooLarge("submatrix enumeration needs " + std::to_string(total) +
                       " determinants, budget is " + std::to_string(budget),
                   total);

  // order 1 is just the entry range, checked directly
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (m.at(r, c) < -1 || m.at(r, c) > 1)
        return TuCounterexample{{r}, {c}, m.at(r, c)};

  for (int k = 2; k <= max_order; ++k) {
    long long row_combos = binom_saturating(m.rows, k);
    std::atomic<long long> found_rank{-1};

#pragma omp parallel for schedule(dynamic, 8) if (parallel)
    for (long long rr = 0; rr < row_combos; ++rr) {
      long long cur = found_rank.load(std::memory_order_relaxed);
      if (cur >= 0 && rr > cur) continue;
      std::vector<int> rows = unrank_combination(rr, m.rows, k);
      std::vector<int> cols(k);
      for (int i = 0; i < k; ++i) cols[i] = i;
      do {
        long long d = det_submatrix(m, rows.data(), cols.data(), k);
        if (d < -1 || d > 1) {
          long long expect = found_rank.load();
          while ((expect < 0 || rr < expect) &&
                 !found_rank.compare_exchange_weak(expect, rr)) {
          }
          break;
        }
      } while (next_combination(cols, m.cols));
    }

    long long bad = found_rank.load();
    if (bad >= 0) {
      // deterministic counterexample: rescan the offending row set serially
      std::vector<int> rows = unrank_combination(bad, m.rows, k);
      std::vector<int> cols(k);
      for (int i = 0; i < k; ++i) cols[i] = i;
      do {
        long long d = det_submatrix(m, rows.data(), cols.data(), k);
        if (d < -1 || d > 1) return TuCounterexample{rows, cols, d};
      } while (next_combination(cols, m.cols));
    }
  }
  return std::nullopt;
}

}  // namespace

bool StackedMatrix::is_flow_row(int r) const {
  if (layout == Layout::SingleStep) return r < num_places;
  int within = r % (2 * num_places);
  return within < num_places;
}

int StackedMatrix::paired_flow_row(int r) const {
  if (layout == Layout::SingleStep) return r - num_places;
  return r - num_places;  // capacity rows sit one place-block below their stage's flow rows
}

StackedMatrix make_single_step_stack(const Rmpn& net) {
  if (!is_state_machine(net))
    throw NotStateMachine("single-step stack requires a state-machine net");
  const int p = net.num_places;
  const int t = net.num_transitions();
  StackedMatrix s;
  s.layout = StackedMatrix::Layout::SingleStep;
  s.stages = 1;
  s.num_places = p;
  s.num_transitions = t;
  s.mat = IntMatrix(2 * p, t);
  for (int j = 0; j < t; ++j) {
    int from = net.pre_places[j][0];
    int to = net.post_places[j][0];
    s.mat.at(from, j) -= 1;          // token-flow block
    s.mat.at(to, j) += 1;
    s.mat.at(p + to, j) = 1;         // post block
  }
  return s;
}

StackedMatrix make_staged_stack(const Rmpn& net, int stages) {
  if (!is_state_machine(net))
    throw NotStateMachine("staged stack requires a state-machine net");
  if (stages < 1) throw UnsupportedLayout("stages must be >= 1");
  const int p = net.num_places;
  const int t = net.num_transitions();
  StackedMatrix s;
  s.layout = StackedMatrix::Layout::Staged;
  s.stages = stages;
  s.num_places = p;
  s.num_transitions = t;
  s.mat = IntMatrix(stages * 2 * p, stages * (p + t));
  for (int stage = 0; stage < stages; ++stage) {
    const int flow_row = stage * 2 * p;
    const int cap_row = flow_row + p;
    const int m_col = stage * (p + t);
    const int sigma_col = m_col + p;
    for (int i = 0; i < p; ++i) {
      s.mat.at(flow_row + i, m_col + i) = -1;
      if (stage > 0) {
        int prev_m = (stage - 1) * (p + t);
        s.mat.at(flow_row + i, prev_m + i) = 1;
        s.mat.at(cap_row + i, prev_m + i) = 1;
      }
    }
    for (int j = 0; j < t; ++j) {
      int from = net.pre_places[j][0];
      int to = net.post_places[j][0];
      s.mat.at(flow_row + from, sigma_col + j) -= 1;
      s.mat.at(flow_row + to, sigma_col + j) += 1;
      s.mat.at(cap_row + to, sigma_col + j) = 1;
    }
  }
  return s;
}

RowPartition ghouila_houri_partition(const StackedMatrix& m, const std::vector<int>& rows) {
  if (m.num_places <= 0) throw UnsupportedLayout("stack has no block metadata");
  std::vector<char> selected(m.mat.rows, 0);
  for (int r : rows) {
    if (r < 0 || r >= m.mat.rows) throw UnsupportedLayout("row index out of range");
    selected[r] = 1;
  }
  RowPartition part;
  for (int r : rows) {
    if (m.is_flow_row(r)) {
      part.r1.push_back(r);
    } else if (selected[m.paired_flow_row(r)]) {
      part.r2.push_back(r);
    } else {
      part.r1.push_back(r);
    }
  }
  std::sort(part.r1.begin(), part.r1.end());
  std::sort(part.r2.begin(), part.r2.end());
  return part;
}

bool verify_partition(const IntMatrix& m, const RowPartition& p) {
  for (int c = 0; c < m.cols; ++c) {
    long long sum = 0;
    for (int r : p.r1) sum += m.at(r, c);
    for (int r : p.r2) sum -= m.at(r, c);
    if (sum < -1 || sum > 1) return false;
  }
  return true;
}

long long count_submatrices(int rows, int cols, int max_order) {
  long long total = 0;
  for (int k = 1; k <= std::min({max_order, rows, cols}); ++k) {
    long long r = binom_saturating(rows, k);
    long long c = binom_saturating(cols, k);
    if (r > (1LL << 62) / std::max(c, 1LL)) return 1LL << 62;
    total += r * c;
    if (total > (1LL << 62)) return 1LL << 62;
  }
  return total;
}

std::optional<TuCounterexample> find_non_unimodular_minor(const IntMatrix& m,
                                                          int max_order,
                                                          long long budget) {
  return scan_minors(m, max_order, budget, true);
}

bool is_tu_bruteforce(const IntMatrix& m, int max_order, long long budget) {
  return !scan_minors(m, max_order, budget, true).has_value();
}

bool is_tu_bruteforce_serial(const IntMatrix& m, int max_order, long long budget) {
  return !scan_minors(m, max_order, budget, false).has_value();
}

bool is_tu_sampled(const IntMatrix& m, int max_order, long long samples,
                   std::uint64_t seed) {
  max_order = std::min({max_order, m.rows, m.cols, kMaxOrder});
  std::mt19937_64 rng(seed);
  auto sample_subset = [&](int n, int k) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < k; ++i)
      std::swap(idx[i], idx[i + rng() % (n - i)]);
    idx.resize(k);
    return idx;
  };
  std::atomic<bool> ok{true};
  for (int k = 1; k <= max_order && ok; ++k) {
    long long per_order = samples / max_order;
    std::vector<std::vector<int>> row_sets(per_order), col_sets(per_order);
    for (long long i = 0; i < per_order; ++i) {
      row_sets[i] = sample_subset(m.rows, k);
      col_sets[i] = sample_subset(m.cols, k);
    }
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < per_order; ++i) {
      if (!ok.load(std::memory_order_relaxed)) continue;
      long long d = det_submatrix(m, row_sets[i].data(), col_sets[i].data(), k);
      if (d < -1 || d > 1) ok.store(false);
    }
  }
  return ok;
}

long long det_exact(const IntMatrix& m) {
  if (m.rows != m.cols) throw UnsupportedLayout("determinant needs a square matrix");
  if (m.rows > kMaxOrder) throw TooLarge("matrix too large for exact determinant", m.rows);
  if (m.rows == 0) return 1;
  long long buf[kMaxOrder * kMaxOrder];
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) buf[i * m.rows + j] = m.at(i, j);
  return det_bareiss(buf, m.rows);
}

}  // namespace rmpn
