#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rmpn/tu.hpp"
#include "test_support.hpp"

using namespace rmpn;
using namespace rmpn::testing;

namespace {

IntMatrix from_rows(const std::vector<std::vector<int>>& rows) {
  IntMatrix m(static_cast<int>(rows.size()),
              rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = static_cast<std::int8_t>(rows[i][j]);
  return m;
}

// transition with two input places plus a return arc; the stack of its
// token-flow and post matrices contains a 2x2 minor with determinant 2
IntMatrix broken_net_stack() {
  return from_rows({
      {-1, 1},   // flow p0: t drains it, u feeds it
      {-1, -1},  // flow p1: drained by both
      {1, 0},    // flow p2
      {0, 1},    // post p0 (u arrives)
      {0, 0},    // post p1
      {1, 0},    // post p2 (t arrives)
  });
}

std::vector<int> random_subset(std::mt19937_64& rng, int n) {
  std::vector<int> rows;
  for (int r = 0; r < n; ++r)
    if (rng() & 1) rows.push_back(r);
  return rows;
}

}  // namespace

TEST_CASE("four-cell stack matches the worked eight-by-eight layout") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  IntMatrix expected = from_rows({
      {-1, 1, 0, 0, 0, 0, 1, -1},
      {1, -1, -1, 1, -1, 1, 0, 0},
      {0, 0, 1, -1, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, -1, -1, 1},
      {0, 1, 0, 0, 0, 0, 1, 0},
      {1, 0, 0, 1, 0, 1, 0, 0},
      {0, 0, 1, 0, 0, 0, 0, 0},
      {0, 0, 0, 0, 1, 0, 0, 1},
  });
  CHECK(s.mat.a == expected.a);
  CHECK(s.mat.rows == 8);
  CHECK(s.mat.cols == 8);
}

TEST_CASE("net without transitions stacks to an empty-column matrix") {
  Rmpn net;
  net.num_places = 3;
  net.initial_marking = {0, 0, 0};
  StackedMatrix s = make_single_step_stack(net);
  CHECK(s.mat.rows == 6);
  CHECK(s.mat.cols == 0);
}

TEST_CASE("three-place ring stacks as laid out by hand") {
  Rmpn net;
  net.num_places = 3;
  net.add_transition(0, 1);
  net.add_transition(1, 2);
  net.add_transition(2, 0);
  StackedMatrix s = make_single_step_stack(net);
  IntMatrix expected = from_rows({
      {-1, 0, 1},
      {1, -1, 0},
      {0, 1, -1},
      {0, 0, 1},
      {1, 0, 0},
      {0, 1, 0},
  });
  CHECK(s.mat.a == expected.a);
}

TEST_CASE("non-state-machine nets are rejected by the builders") {
  Rmpn net = four_cell_net();
  net.pre_places.push_back({0, 1});
  net.post_places.push_back({2});
  CHECK_THROWS_AS(make_single_step_stack(net), NotStateMachine);
  CHECK_THROWS_AS(make_staged_stack(net, 2), NotStateMachine);
}

TEST_CASE("worked partition of the row subset") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  RowPartition p = ghouila_houri_partition(s, {0, 2, 3, 4, 5});
  CHECK(p.r1 == std::vector<int>{0, 2, 3, 5});
  CHECK(p.r2 == std::vector<int>{4});
  CHECK(verify_partition(s.mat, p));
}

TEST_CASE("flow-only selections go entirely to the first class") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  RowPartition p = ghouila_houri_partition(s, {0, 1, 2, 3});
  CHECK(p.r1 == std::vector<int>{0, 1, 2, 3});
  CHECK(p.r2.empty());
  CHECK(verify_partition(s.mat, p));
}

TEST_CASE("misplacing a post row breaks the column sums") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  RowPartition bad;
  bad.r1 = {0, 4};  // flow p1 and post p1 together: column t2 sums to 2
  CHECK_FALSE(verify_partition(s.mat, bad));
  RowPartition empty;
  CHECK(verify_partition(s.mat, empty));
}

TEST_CASE("partitions verify on every subset of the worked stack") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  for (unsigned mask = 0; mask < (1u << 8); ++mask) {
    std::vector<int> rows;
    for (int r = 0; r < 8; ++r)
      if (mask & (1u << r)) rows.push_back(r);
    RowPartition p = ghouila_houri_partition(s, rows);
    CHECK(verify_partition(s.mat, p));
  }
}

TEST_CASE("staged partitions verify on random subsets and nets") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 40; ++trial) {
    Rmpn net = random_state_machine(rng, 6, 10);
    for (int stages = 1; stages <= 3; ++stages) {
      StackedMatrix s = make_staged_stack(net, stages);
      for (int k = 0; k < 25; ++k) {
        RowPartition p = ghouila_houri_partition(s, random_subset(rng, s.mat.rows));
        CHECK(verify_partition(s.mat, p));
      }
    }
  }
}

TEST_CASE("brute force certifies the worked stack") {
  StackedMatrix s = make_single_step_stack(four_cell_net());
  CHECK(is_tu_bruteforce(s.mat, 6));
}

TEST_CASE("classic two-by-two with determinant two fails") {
  IntMatrix m = from_rows({{1, 1}, {-1, 1}});
  CHECK_FALSE(is_tu_bruteforce(m, 2));
  auto bad = find_non_unimodular_minor(m, 2);
  REQUIRE(bad.has_value());
  CHECK(bad->det == 2);
}

TEST_CASE("identity matrices pass at any order") {
  IntMatrix m(7, 7);
  for (int i = 0; i < 7; ++i) m.at(i, i) = 1;
  CHECK(is_tu_bruteforce(m, 7));
}

TEST_CASE("two-input transition yields a non-unimodular stack") {
  IntMatrix m = broken_net_stack();
  CHECK_FALSE(is_tu_bruteforce(m, 4));
  auto bad = find_non_unimodular_minor(m, 4);
  REQUIRE(bad.has_value());
  CHECK((bad->det == 2 || bad->det == -2));
}

TEST_CASE("single-stage staged layout") {
  Rmpn net;
  net.num_places = 2;
  net.add_transition(0, 1);
  net.add_transition(1, 0);
  StackedMatrix s = make_staged_stack(net, 1);
  IntMatrix expected = from_rows({
      {-1, 0, -1, 1},
      {0, -1, 1, -1},
      {0, 0, 0, 1},
      {0, 0, 1, 0},
  });
  CHECK(s.mat.a == expected.a);
}

TEST_CASE("two-stage staged layout chains markings by hand") {
  Rmpn net;
  net.num_places = 2;
  net.add_transition(0, 1);
  net.add_transition(1, 0);
  StackedMatrix s = make_staged_stack(net, 2);
  IntMatrix expected = from_rows({
      {-1, 0, -1, 1, 0, 0, 0, 0},
      {0, -1, 1, -1, 0, 0, 0, 0},
      {0, 0, 0, 1, 0, 0, 0, 0},
      {0, 0, 1, 0, 0, 0, 0, 0},
      {1, 0, 0, 0, -1, 0, -1, 1},
      {0, 1, 0, 0, 0, -1, 1, -1},
      {1, 0, 0, 0, 0, 0, 0, 1},
      {0, 1, 0, 0, 0, 0, 1, 0},
  });
  CHECK(s.mat.a == expected.a);
}

TEST_CASE("staged stacks of small random nets certify by brute force") {
  std::mt19937_64 rng(777);
  for (int trial = 0; trial < 10; ++trial) {
    Rmpn net = random_state_machine(rng, 4, 5);
    for (int stages = 1; stages <= 3; ++stages) {
      StackedMatrix s = make_staged_stack(net, stages);
      long long needed = count_submatrices(s.mat.rows, s.mat.cols, 4);
      if (needed <= kDefaultDetBudget) {
        CHECK(is_tu_bruteforce(s.mat, 4));
      } else {
        CHECK(is_tu_sampled(s.mat, 4, 20000, rng()));
      }
    }
  }
}

TEST_CASE("budget overruns raise TooLarge") {
  IntMatrix m(40, 60);
  CHECK_THROWS_AS(is_tu_bruteforce(m, 6, 1000), TooLarge);
}

TEST_CASE("parallel and serial scans agree") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    IntMatrix m(4 + static_cast<int>(rng() % 5), 4 + static_cast<int>(rng() % 5));
    for (auto& v : m.a) v = static_cast<std::int8_t>(rng() % 3) - 1;
    bool a = is_tu_bruteforce(m, 4);
    bool b = is_tu_bruteforce_serial(m, 4);
    CHECK(a == b);
  }
}

TEST_CASE("exact determinants on known matrices") {
  CHECK(det_exact(from_rows({{1, 1}, {-1, 1}})) == 2);
  CHECK(det_exact(from_rows({{1, 0}, {0, 1}})) == 1);
  CHECK(det_exact(from_rows({{0, 1}, {1, 0}})) == -1);
  CHECK(det_exact(from_rows({{2}})) == 2);
  // singular
  CHECK(det_exact(from_rows({{1, 1}, {1, 1}})) == 0);
}
