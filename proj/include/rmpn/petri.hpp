#pragma once
// State-machine Petri nets over workspace cells. Places are free cells,
// transitions are directed cell adjacencies, tokens are robots.

#include <stdexcept>
#include <vector>

#include "rmpn/grid.hpp"

namespace rmpn {

using Marking = std::vector<int>;
using FiringVector = std::vector<int>;

struct PetriError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyEnvironment : PetriError {
  using PetriError::PetriError;
};
struct RobotOnObstacle : PetriError {
  using PetriError::PetriError;
};
struct NegativeMarking : PetriError {
  using PetriError::PetriError;
};
struct NotIntegral : PetriError {
  using PetriError::PetriError;
};

/// Petri net with place labels. Incidence is stored sparsely by transition:
/// each transition lists its input and output places, which also covers
/// malformed nets (several inputs) so the state-machine check is meaningful.
/// The token-flow matrix is post minus pre, column by column.
struct Rmpn {
  int num_places = 0;
  int num_symbols = 0;
  std::vector<std::vector<int>> pre_places;    // per transition
  std::vector<std::vector<int>> post_places;   // per transition
  Marking initial_marking;
  std::vector<std::vector<int>> place_symbols;  // labels h(p)
  std::vector<std::vector<int>> symbol_places;  // rows of the observation map V
  std::vector<int> place_cell;                  // grid cell index per place, -1 if none

  int num_transitions() const { return static_cast<int>(pre_places.size()); }
  int num_robots() const;
  void add_transition(int from, int to) {
    pre_places.push_back({from});
    post_places.push_back({to});
  }
};

/// One place per free cell, a transition pair per 4-adjacent free pair.
Rmpn grid_to_rmpn(const GridEnvironment& env);

/// m0 + C*sigma; throws NegativeMarking when the aggregate result would
/// take any place below zero.
Marking apply_state_equation(const Rmpn& net, const Marking& m0,
                             const FiringVector& sigma);

/// V*m: how many tokens currently observe each symbol.
std::vector<int> observe(const Rmpn& net, const Marking& m);

/// Exactly one input and one output place per transition.
bool is_state_machine(const Rmpn& net);

/// Rounds an LP vector to integers, throwing NotIntegral when any entry
/// is further than tol from an integer.
std::vector<int> round_integral(const std::vector<double>& v, double tol);

}  // namespace rmpn
