#include "hmtk/generators.hpp"

#include <cmath>
#include <vector>

namespace hmtk {

namespace {

void check_common(const GeneratorSpec& spec) {
  if (spec.n < 8) throw SpaceError("generator needs n >= 8, got " + std::to_string(spec.n));
  if (!(spec.spacing > 0.0)) throw SpaceError("generator spacing must be positive");
  if (spec.spacing > 1.0 / 16.0)
    throw SpaceError("generator spacing must be <= 1/16 so radius 1 is resolved");
  if (spec.n * spec.spacing < 4.0)
    throw SpaceError("generator diameter n * spacing must be >= 4");
}

std::vector<std::vector<double>> line_coords(int n, double h) {
  std::vector<std::vector<double>> coords(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) coords[static_cast<size_t>(i)] = {i * h};
  return coords;
}

}  // namespace

FiniteHomSpace generate(const GeneratorSpec& spec) {
  check_common(spec);
  const int n = spec.n;
  const double h = spec.spacing;
  if (spec.kind == "grid1d") {
    return FiniteHomSpace::from_coords("grid1d-" + std::to_string(n), line_coords(n, h),
                                       std::vector<double>(static_cast<size_t>(n), h),
                                       MetricSpec{"euclidean", 0.0});
  }
  if (spec.kind == "grid2d") {
    std::vector<std::vector<double>> coords;
    coords.reserve(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) coords.push_back({i * h, j * h});
    return FiniteHomSpace::from_coords(
        "grid2d-" + std::to_string(n) + "x" + std::to_string(n), std::move(coords),
        std::vector<double>(static_cast<size_t>(n) * n, h * h), MetricSpec{"euclidean", 0.0});
  }
  if (spec.kind == "snowflake") {
    if (!(spec.exponent > 0.0 && spec.exponent <= 1.0))
      throw SpaceError("snowflake exponent must lie in (0, 1]");
    return FiniteHomSpace::from_coords("snowflake-" + std::to_string(n), line_coords(n, h),
                                       std::vector<double>(static_cast<size_t>(n), h),
                                       MetricSpec{"snowflake", spec.exponent});
  }
  if (spec.kind == "power_metric") {
    if (!(spec.exponent >= 1.0)) throw SpaceError("power metric exponent must be >= 1");
    return FiniteHomSpace::from_coords("power-" + std::to_string(n), line_coords(n, h),
                                       std::vector<double>(static_cast<size_t>(n), h),
                                       MetricSpec{"power", spec.exponent});
  }
  if (spec.kind == "weighted_grid") {
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      w[static_cast<size_t>(i)] = h * std::pow(1.0 + std::fabs(i * h), spec.exponent);
    return FiniteHomSpace::from_coords("weighted-" + std::to_string(n), line_coords(n, h),
                                       std::move(w), MetricSpec{"euclidean", 0.0});
  }
  throw SpaceError("unknown generator kind: " + spec.kind);
}

FiniteHomSpace make_grid1d(int n, double spacing) {
  return generate({"grid1d", n, spacing, 0.0});
}
FiniteHomSpace make_grid2d(int side, double spacing) {
  return generate({"grid2d", side, spacing, 0.0});
}
FiniteHomSpace make_snowflake(int n, double spacing, double epsilon) {
  return generate({"snowflake", n, spacing, epsilon});
}
FiniteHomSpace make_power_metric(int n, double spacing, double p) {
  return generate({"power_metric", n, spacing, p});
}
FiniteHomSpace make_weighted_grid(int n, double spacing, double a) {
  return generate({"weighted_grid", n, spacing, a});
}

}  // namespace hmtk
