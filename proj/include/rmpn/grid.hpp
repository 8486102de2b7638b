#pragma once
// Rectangular grid workspaces: obstacles, labeled regions of interest and
// robot start cells, plus the random generator used by the benchmarks.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmpn {

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Region {
  int symbol = 0;              // index into the symbol alphabet
  std::vector<Cell> cells;
};

struct EnvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientFreeSpace : EnvError {
  using EnvError::EnvError;
};
struct EnvParseError : EnvError {
  using EnvError::EnvError;
};

/// A static grid workspace. Cells are addressed by (x, y) with the linear
/// index y * width + x. Regions are pairwise disjoint and never overlap
/// obstacles; robot starts sit on free cells.
struct GridEnvironment {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> obstacle;  // width*height flags, row-major
  std::vector<Region> regions;
  std::vector<Cell> robot_starts;
  std::uint64_t seed = 0;

  int cell_index(Cell c) const { return c.y * width + c.x; }
  Cell cell_at(int idx) const { return {idx % width, idx / width}; }
  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  bool is_obstacle(Cell c) const { return obstacle[cell_index(c)] != 0; }
  bool is_free(Cell c) const { return !is_obstacle(c); }
  int num_cells() const { return width * height; }
  int num_symbols() const;

  /// Throws EnvError when a structural invariant is broken (overlapping
  /// regions, region on obstacle, robot on obstacle, out-of-bounds cells).
  void validate() const;
};

/// Largest 4-connected free component, as sorted linear cell indices.
/// Ties between equally sized components go to the one containing the
/// smallest cell index.
std::vector<int> largest_component(const GridEnvironment& env);

/// Randomly generated workspace: obstacles sampled by density, then
/// n_regions single-cell regions and n_robots start cells drawn without
/// replacement from the largest free component. Deterministic in seed.
GridEnvironment generate(int width, int height, int n_regions, int n_robots,
                         double obstacle_density, std::uint64_t seed);

std::string to_json(const GridEnvironment& env);
GridEnvironment env_from_json(const std::string& text);
void save(const GridEnvironment& env, const std::string& path);
GridEnvironment load(const std::string& path);

}  // namespace rmpn
