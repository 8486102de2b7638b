#pragma once
// Turns integral firing vectors into per-robot cell walks and audits the
// capacity bound on each stage.

#include <stdexcept>
#include <vector>

#include "rmpn/petri.hpp"

namespace rmpn {

struct PathsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FlowInconsistent : PathsError {
  using PathsError::PathsError;
};
struct BoundaryMismatch : PathsError {
  using PathsError::PathsError;
};

/// Sequence of places one token visits inside a stage. Length-0 movement
/// is a single-cell walk.
using Walk = std::vector<int>;

struct RobotTrajectory {
  int robot_id = 0;
  std::vector<int> cells;             // stage-concatenated place indices
  std::vector<int> stage_boundaries;  // index into cells where each stage ends
};

/// Splits sigma into one walk per token so that the walks' edge uses sum
/// to sigma exactly and their endpoints realize m_start -> m_end as
/// multisets. Shortest walks are extracted first; leftover circulation is
/// spliced into walks passing through it.
std::vector<Walk> decompose_firing_vector(const Rmpn& net, const Marking& m_start,
                                          const FiringVector& sigma,
                                          const Marking& m_end);

/// Joins per-stage walk fragments into robot trajectories by matching end
/// cells to start cells (lowest index first; tokens carry no identity).
std::vector<RobotTrajectory> stitch_stages(
    const std::vector<std::vector<Walk>>& stage_fragments);

/// Post*sigma + m_start <= cap, componentwise.
bool audit_capacity(const Rmpn& net, const Marking& m_start,
                    const FiringVector& sigma, int cap);

std::string trajectories_to_json(const std::vector<RobotTrajectory>& trajectories);

}  // namespace rmpn
