#pragma once
// Task assignment and path planning on top of the LP solver: lower the
// mission to LPs, round the region-selection vector until integral, fix
// the cell capacity, then solve the reachability or staged problem.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rmpn/cnf.hpp"
#include "rmpn/lp.hpp"
#include "rmpn/petri.hpp"

namespace rmpn {

struct PlannerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : PlannerError {
  using PlannerError::PlannerError;
};
struct TokenCountMismatch : PlannerError {
  using PlannerError::PlannerError;
};

enum class CollisionMode { None, CapacityOnly, IntermediateMarkings };

struct PlanConfig {
  double big_n = 0.0;          // 0 = auto (robots + 2); must exceed robots + 1
  CollisionMode collision_mode = CollisionMode::None;
  std::uint64_t rng_seed = 0;
  int max_stage_growth = -1;   // -1 = auto (number of robots)
  double integrality_tol = 1e-6;
  bool weighted_stage_objective = true;
};

enum class PlanStatus { Solved, Infeasible };
enum class PlanPhase { None, BooleanTask, Reachability, Staged };

struct PlanStage {
  FiringVector sigma;
  Marking marking_after;
};

struct PlanTimings {
  double task_lps = 0.0;      // all relaxation solves in the rounding loop
  double last_task_lp = 0.0;  // final solve of the loop (capacity still free)
  double final_lp = 0.0;      // capacity pinned
  double staged = 0.0;
  double total = 0.0;
};

struct PlanOutcome {
  PlanStatus status = PlanStatus::Infeasible;
  PlanPhase failed_phase = PlanPhase::None;
  std::vector<int> x_star;
  int s_bar = 0;
  double s_star = 0.0;
  std::vector<PlanStage> stages;
  double cost_first_term = 0.0;
  int rounding_iterations = 0;
  std::uint64_t seed = 0;
  PlanTimings timings;
};

// Variable layout shared by the lowerings below.
struct MissionLayout {
  int m_begin = 0, sigma_begin = 0, x_begin = 0, s_index = 0, num_vars = 0;
};

/// Complete mission lowering over variables (m, sigma, x, s): state
/// equation, observation window x <= V m <= N x, clause rows, capacity
/// rows, unit box on x.
LpStandardForm build_mission_lowering(const Rmpn& net, const MissionConstraints& sc,
                              const PlanConfig& cfg, MissionLayout* layout = nullptr);

/// Reachability lowering over (sigma, s) for a known final marking;
/// optionally pins s.
LpStandardForm build_reachability_lowering(const Rmpn& net, const Marking& m_f,
                              int s_fixed = -1, double big_n = 0.0);

/// Staged lowering with capacity-one stages chaining m_0 to m_f.
LpStandardForm build_staged_lowering(const Rmpn& net, const Marking& m_f, int s_bar,
                              const PlanConfig& cfg);

struct RoundingStep {
  std::vector<int> fixed_to_one;
  bool done = false;
};

/// Fixes every entry already at 1, then the fractional entry closest to 1
/// (ties picked uniformly through rng). done is true when nothing was
/// fractional to begin with.
RoundingStep element_rounding(const std::vector<double>& x_star, double tol,
                              std::mt19937_64& rng);

struct BooleanTaskResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<int> x_star;
  int s_bar = 0;
  double s_star = 0.0;
  int iterations = 0;
  int infeasible_at_iteration = -1;
  double t_lps = 0.0;
  double t_last_lp = 0.0;
};

BooleanTaskResult solve_boolean_task(const Rmpn& net, const MissionConstraints& sc,
                                     const PlanConfig& cfg);

PlanOutcome plan(const Rmpn& net, const CnfFormula& f, const PlanConfig& cfg);

std::string to_json(const PlanOutcome& outcome);

}  // namespace rmpn
