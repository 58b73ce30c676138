#pragma once

#include <string>

#include "hmtk/space.hpp"

namespace hmtk {

// Reproducible benchmark families. All live on [0, n * spacing] (squared for
// grid2d, where n is the side length) with cell-volume weights, so that radius
// 1 sits strictly between the resolution and the diameter:
//   grid1d        uniform 1-d grid, euclidean metric, weight = spacing
//   grid2d        uniform square grid, euclidean metric, weight = spacing^2
//   snowflake     1-d grid with d = |x-y|^epsilon, exponent in (0,1]
//   power_metric  1-d grid with d = |x-y|^p, p >= 1 (quasi-metric, A0 = 2^(p-1))
//   weighted_grid 1-d grid, euclidean metric, weight = spacing * (1+|x|)^a;
//                 doubling but defeats the unit-ball lower bound for a < 0,
//                 the upper bound for a > 0, and regularity for either sign
struct GeneratorSpec {
  std::string kind;
  int n = 0;            // point count (side length for grid2d)
  double spacing = 0.0;
  double exponent = 0.0;  // epsilon, p or a depending on kind
};

// Builds the space for a spec. Enforces n >= 8, spacing <= 1/16 and
// n * spacing >= 4; throws SpaceError with the offending field otherwise.
FiniteHomSpace generate(const GeneratorSpec& spec);

// Convenience wrappers used by tests and the CLI.
FiniteHomSpace make_grid1d(int n, double spacing);
FiniteHomSpace make_grid2d(int side, double spacing);
FiniteHomSpace make_snowflake(int n, double spacing, double epsilon);
FiniteHomSpace make_power_metric(int n, double spacing, double p);
FiniteHomSpace make_weighted_grid(int n, double spacing, double a);

}  // namespace hmtk
