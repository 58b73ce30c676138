#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hmtk/space.hpp"

namespace hmtk {

struct DyadicError : std::runtime_error {
  explicit DyadicError(const std::string& what) : std::runtime_error(what) {}
};

// Nested nets X^{k_min} <= ... <= X^{k_max}, built fine to coarse by greedy
// maximal separation. Level k corresponds to scale delta^k; level 0 always
// exists, k_min <= 0 is the coarsest level where a single center remains and
// k_max >= 0 is the finest, at which every point is its own center.
struct NetHierarchy {
  double delta = 0.0;
  double c0 = 0.0;
  double C0 = 0.0;
  int k_min = 0;
  int k_max = 0;
  std::vector<std::vector<int>> levels;      // [k - k_min] -> ascending center ids
  std::vector<double> covering_radius;       // a posteriori max_p min_c d(p, c) per level

  int li(int k) const { return k - k_min; }
  double scale(int k) const { return std::pow(delta, k); }
  const std::vector<int>& centers(int k) const { return levels[static_cast<size_t>(li(k))]; }
  bool is_center(int k, int id) const;
};

struct NetOptions {
  double delta = 0.125;
  double c0 = 1.0;
  double C0 = 0.0;           // <= 0 selects the default 1.5 * a0
  bool check_admissibility = true;
  bool shrink_delta = true;  // halve delta until 12 a0^3 C0 delta <= c0
};

// Throws DyadicError("admissibility violated...") when 12 a0^3 C0 delta > c0
// cannot be satisfied, and DyadicError("covering failed at level k...") if the
// greedy nets miss a point by more than C0 delta^k.
NetHierarchy build_nets(const FiniteHomSpace& space, double a0, const NetOptions& opts = {});

struct Cube {
  int center = -1;             // point id of the cube center
  int parent = -1;             // cube index at the coarser level, -1 at k_min
  bool new_center = false;     // center absent from the coarser net
  std::vector<int> children;   // cube indices at the finer level, ascending
  std::vector<int> points;     // member point ids, ascending
  double mass = 0.0;           // compensated weight sum in ascending id order
};

struct DyadicTree {
  double delta = 0.0, c0 = 0.0, C0 = 0.0;
  double c_sharp = 0.0;  // (3 a0^2)^{-1} c0, inner sandwich radius factor
  double C_sharp = 0.0;  // max(2 a0 C0, 1), outer sandwich radius factor
  double a0 = 1.0;
  int k_min = 0;
  int k_max = 0;
  std::vector<std::vector<Cube>> levels;     // [k - k_min] -> cubes, ascending center id
  std::vector<std::vector<int>> point_cube;  // [k - k_min][point id] -> cube index

  int li(int k) const { return k - k_min; }
  double scale(int k) const { return std::pow(delta, k); }
  const std::vector<Cube>& cubes(int k) const { return levels[static_cast<size_t>(li(k))]; }
  int cube_of(int k, int point) const {
    return point_cube[static_cast<size_t>(li(k))][static_cast<size_t>(point)];
  }
};

// Top-down Voronoi-with-nesting assignment: the coarsest level is a plain
// nearest-center partition (lowest id on ties) and each finer center is
// attached to the cube containing it, with points choosing among the centers
// attached to their current cube only. This makes partition and nesting hold
// by construction; the sandwich inclusions are checked by verify_cube_axioms.
DyadicTree build_cubes(const FiniteHomSpace& space, const NetHierarchy& nets, double a0);

struct CubeViolation {
  std::string kind;  // "partition", "nesting", "inner_ball", "outer_ball", "structure"
  int k = 0;
  int cube = -1;
  int point = -1;
  std::string detail;
};

struct CubeAxiomReport {
  bool ok = false;
  long long checks = 0;
  std::vector<CubeViolation> violations;
  std::string summary() const;
};

// Exhaustive partition / nesting / sandwich verification with witnesses.
CubeAxiomReport verify_cube_axioms(const FiniteHomSpace& space, const DyadicTree& tree);

struct TreeBuildResult {
  NetHierarchy nets;
  DyadicTree tree;
  CubeAxiomReport report;
  int attempts = 1;
};

// build_nets + build_cubes + verify, halving delta (up to four retries) if the
// sandwich fails. Throws DyadicError if no attempt verifies cleanly.
TreeBuildResult build_tree(const FiniteHomSpace& space, double a0, const NetOptions& opts = {});

}  // namespace hmtk
