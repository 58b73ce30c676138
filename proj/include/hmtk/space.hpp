#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmtk {

struct SpaceError : std::runtime_error {
  explicit SpaceError(const std::string& what) : std::runtime_error(what) {}
};

// Metric descriptor. "euclidean", "snowflake" and "power" derive distances
// from point coordinates (the latter two warp |x-y| by an exponent);
// "matrix" means distances were supplied explicitly.
struct MetricSpec {
  std::string kind = "matrix";
  double param = 0.0;  // snowflake epsilon or power exponent, unused otherwise

  double warp(double euclid) const;    // euclid distance -> metric distance
  double unwarp(double metric) const;  // inverse, used for interior filters
};

// Per-center sorted distance lists with compensated prefix mass sums.
// Ball measures are open: mu(B(x,r)) sums weights of points with d(x,z) < r.
// All ball lookups in the library go through this cache so any two code paths
// asking for the same ball get bit-identical masses.
struct BallQueryCache {
  // dist_sorted[x] is (distance, id) ascending, ties broken by id.
  std::vector<std::vector<std::pair<double, int>>> dist_sorted;
  // prefix[x][m] = compensated sum of the first m weights in that order.
  std::vector<std::vector<double>> prefix;

  // Number of points strictly inside radius r around center x.
  int count_lt(int x, double r) const;
  // Points with d(x, .) <= r.
  int count_le(int x, double r) const;
  double mass_of_first(int x, int m) const { return prefix[x][static_cast<size_t>(m)]; }
};

class FiniteHomSpace {
 public:
  FiniteHomSpace() = default;

  static FiniteHomSpace from_matrix(std::string name, int n,
                                    std::vector<double> dist_row_major,
                                    std::vector<double> weights,
                                    std::vector<std::vector<double>> coords = {});
  static FiniteHomSpace from_coords(std::string name,
                                    std::vector<std::vector<double>> coords,
                                    std::vector<double> weights, MetricSpec metric);

  int size() const { return n_; }
  const std::string& name() const { return name_; }
  const MetricSpec& metric() const { return metric_; }

  double dist(int i, int j) const { return dist_[static_cast<size_t>(i) * n_ + j]; }
  double weight(int i) const { return weight_[static_cast<size_t>(i)]; }
  const std::vector<double>& weights() const { return weight_; }
  const std::vector<double>& dist_matrix() const { return dist_; }

  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

  double total_mass() const { return total_mass_; }
  double diameter() const { return diameter_; }
  double min_positive_dist() const { return min_pos_dist_; }

  const BallQueryCache& cache() const { return cache_; }

  // Distinct positive pairwise distances, ascending.
  const std::vector<double>& distinct_dists() const { return distinct_; }
  // Radii at which any ball quotient can change sign: the distinct distances,
  // their consecutive midpoints, radius 1 and one radius beyond the diameter.
  const std::vector<double>& candidate_radii() const { return candidates_; }

 private:
  void finalize();  // builds cache, distinct distances, candidate radii

  int n_ = 0;
  std::string name_;
  MetricSpec metric_;
  std::vector<double> dist_;
  std::vector<double> weight_;
  std::vector<std::vector<double>> coords_;

  double total_mass_ = 0.0;
  double diameter_ = 0.0;
  double min_pos_dist_ = 0.0;
  BallQueryCache cache_;
  std::vector<double> distinct_;
  std::vector<double> candidates_;
};

struct ValidationReport {
  int n = 0;
  double a0 = 1.0;          // smallest admissible quasi-triangle constant, >= 1
  bool symmetric = false;   // d(i,j) == d(j,i) for all pairs
  bool separated = false;   // d(i,j) > 0 for i != j
  bool positive_weights = false;
  bool a0_exact = true;     // false when the triple sweep was sampled
  std::string note;
};

struct ValidateOptions {
  int max_exact_n = 2048;       // full O(n^3) sweep up to here
  long long sample_triples = 2'000'000;
  unsigned long long seed = 0x9e3779b97f4a7c15ull;
  bool throw_on_violation = true;
};

// Checks symmetry, separation and weight positivity, then computes the
// empirical quasi-triangle constant a0 = max d(i,k) / (d(i,j) + d(j,k))
// clamped below at 1. Throws SpaceError on an axiom violation unless told not to.
ValidationReport validate_space(const FiniteHomSpace& space, const ValidateOptions& opts = {});

struct DoublingProfile {
  double c_mu = 1.0;   // max over recorded scales of mu(B(x,2r)) / mu(B(x,r))
  double omega = 0.0;  // log2(c_mu)
  double r_lo = 0.0, r_hi = 0.0;  // interior scale window actually used
  // (radius, max ratio over centers) per recorded scale, radius ascending.
  std::vector<std::pair<double, double>> per_scale;
};

// Empirical doubling constant over interior scales. Radii run over the
// distinct pairwise distances inside [4 * min distance, diameter / 4]; if that
// window is empty (tiny spaces) all distinct distances are used. Atom-scale
// radii are excluded on purpose: at radii comparable to the minimum spacing
// the count jump 1 -> 3 inflates the ratio on any discretization.
DoublingProfile doubling_profile(const FiniteHomSpace& space);

// mu(B(x, r)) with the open ball convention.
double ball_measure(const FiniteHomSpace& space, int x, double r);
// mu({z : d(x,z) <= r}), used where a limit "radius just above r" is meant.
double closed_ball_measure(const FiniteHomSpace& space, int x, double r);
// V(x,y) = mu(B(x, d(x,y))). Throws SpaceError for x == y.
double vol_pair(const FiniteHomSpace& space, int x, int y);

struct BallRatioViolation {
  int x = 0, y = 0;
  double r1 = 0.0, r2 = 0.0;
  double lhs = 0.0, rhs = 0.0;
};

struct BallRatioReport {
  long long checked = 0;
  long long skipped = 0;  // tuples failing the r1 + d >= r2 hypothesis
  std::vector<BallRatioViolation> violations;
};

// Samples tuples (x, y, r1, r2) with radii drawn from the profile's interior
// scale window and tests
//   mu(B(x,r1)) / mu(B(y,r2)) <= (1 + tol) * c_mu * a0^omega * ((r1 + d(x,y)) / r2)^omega
// whenever r1 + d(x,y) >= r2. Exhaustive when the tuple count is small.
BallRatioReport check_ball_ratio_bound(const FiniteHomSpace& space,
                                       const DoublingProfile& profile, double a0,
                                       long long max_samples = 200000,
                                       unsigned long long seed = 0x2545f4914f6cdd1dull);

// Shared relative tolerance for geometric inequality checks.
inline constexpr double kGeomTol = 1e-9;

}  // namespace hmtk
