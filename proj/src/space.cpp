// Core finite metric-measure space type plus the empirical geometry probes
// (quasi-triangle constant, doubling profile, ball measures, ball ratio bound).

#include "hmtk/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "hmtk/summation.hpp"

namespace hmtk {

double MetricSpec::warp(double euclid) const {
  if (kind == "euclidean" || kind == "matrix") return euclid;
  if (kind == "snowflake" || kind == "power") return std::pow(euclid, param);
  throw SpaceError("unknown metric kind: " + kind);
}

double MetricSpec::unwarp(double metric) const {
  if (kind == "euclidean" || kind == "matrix") return metric;
  if (kind == "snowflake" || kind == "power") return std::pow(metric, 1.0 / param);
  throw SpaceError("unknown metric kind: " + kind);
}

int BallQueryCache::count_lt(int x, double r) const {
  const auto& ds = dist_sorted[static_cast<size_t>(x)];
  auto it = std::lower_bound(ds.begin(), ds.end(), r,
                             [](const std::pair<double, int>& a, double v) { return a.first < v; });
  return static_cast<int>(it - ds.begin());
}

int BallQueryCache::count_le(int x, double r) const {
  const auto& ds = dist_sorted[static_cast<size_t>(x)];
  auto it = std::upper_bound(ds.begin(), ds.end(), r,
                             [](double v, const std::pair<double, int>& a) { return v < a.first; });
  return static_cast<int>(it - ds.begin());
}

FiniteHomSpace FiniteHomSpace::from_matrix(std::string name, int n,
                                           std::vector<double> dist_row_major,
                                           std::vector<double> weights,
                                           std::vector<std::vector<double>> coords) {
  if (n <= 0) throw SpaceError("space needs at least one point");
  if (dist_row_major.size() != static_cast<size_t>(n) * n)
    throw SpaceError("distance matrix size mismatch");
  if (weights.size() != static_cast<size_t>(n)) throw SpaceError("weight vector size mismatch");
  FiniteHomSpace s;
  s.n_ = n;
  s.name_ = std::move(name);
  s.metric_.kind = "matrix";
  s.dist_ = std::move(dist_row_major);
  s.weight_ = std::move(weights);
  s.coords_ = std::move(coords);
  s.finalize();
  return s;
}

FiniteHomSpace FiniteHomSpace::from_coords(std::string name,
                                           std::vector<std::vector<double>> coords,
                                           std::vector<double> weights, MetricSpec metric) {
  int n = static_cast<int>(coords.size());
  if (n <= 0) throw SpaceError("space needs at least one point");
  if (weights.size() != static_cast<size_t>(n)) throw SpaceError("weight vector size mismatch");
  FiniteHomSpace s;
  s.n_ = n;
  s.name_ = std::move(name);
  s.metric_ = std::move(metric);
  s.coords_ = std::move(coords);
  s.weight_ = std::move(weights);
  s.dist_.assign(static_cast<size_t>(n) * n, 0.0);
  const size_t dim = s.coords_[0].size();
  for (int i = 0; i < n; ++i) {
    if (s.coords_[static_cast<size_t>(i)].size() != dim)
      throw SpaceError("inconsistent coordinate dimension");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double acc = 0.0;
      for (size_t t = 0; t < dim; ++t) {
        double d = s.coords_[static_cast<size_t>(i)][t] - s.coords_[static_cast<size_t>(j)][t];
        acc += d * d;
      }
      s.dist_[static_cast<size_t>(i) * n + j] = s.metric_.warp(std::sqrt(acc));
    }
  }
  s.finalize();
  return s;
}

void FiniteHomSpace::finalize() {
  const int n = n_;
  KahanSum mass;
  for (int i = 0; i < n; ++i) {
    if (!(weight_[static_cast<size_t>(i)] > 0.0) || !std::isfinite(weight_[static_cast<size_t>(i)]))
      continue;  // flagged later by validate_space; keep construction permissive
    mass.add(weight_[static_cast<size_t>(i)]);
  }
  total_mass_ = mass.value();

  diameter_ = 0.0;
  min_pos_dist_ = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double d = dist(i, j);
      diameter_ = std::max(diameter_, d);
      if (d > 0.0) min_pos_dist_ = std::min(min_pos_dist_, d);
    }
  }
  if (!std::isfinite(min_pos_dist_)) min_pos_dist_ = 0.0;

  cache_.dist_sorted.assign(static_cast<size_t>(n), {});
  cache_.prefix.assign(static_cast<size_t>(n), {});
  for (int i = 0; i < n; ++i) {
    auto& ds = cache_.dist_sorted[static_cast<size_t>(i)];
    ds.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) ds.emplace_back(dist(i, j), j);
    std::sort(ds.begin(), ds.end());
    auto& pref = cache_.prefix[static_cast<size_t>(i)];
    pref.resize(static_cast<size_t>(n) + 1);
    pref[0] = 0.0;
    KahanSum acc;
    for (int m = 0; m < n; ++m) {
      acc.add(weight_[static_cast<size_t>(ds[static_cast<size_t>(m)].second)]);
      pref[static_cast<size_t>(m) + 1] = acc.value();
    }
  }

  distinct_.clear();
  distinct_.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = dist(i, j);
      if (d > 0.0) distinct_.push_back(d);
    }
  std::sort(distinct_.begin(), distinct_.end());
  distinct_.erase(std::unique(distinct_.begin(), distinct_.end()), distinct_.end());

  candidates_.clear();
  candidates_.reserve(2 * distinct_.size() + 2);
  for (size_t i = 0; i < distinct_.size(); ++i) {
    candidates_.push_back(distinct_[i]);
    if (i + 1 < distinct_.size())
      candidates_.push_back(0.5 * (distinct_[i] + distinct_[i + 1]));
  }
  candidates_.push_back(1.0);
  candidates_.push_back(diameter_ + 1.0);
  std::sort(candidates_.begin(), candidates_.end());
  candidates_.erase(std::unique(candidates_.begin(), candidates_.end()), candidates_.end());
}

ValidationReport validate_space(const FiniteHomSpace& space, const ValidateOptions& opts) {
  const int n = space.size();
  ValidationReport rep;
  rep.n = n;
  rep.symmetric = true;
  rep.separated = true;
  rep.positive_weights = true;

  for (int i = 0; i < n; ++i) {
    double w = space.weight(i);
    if (!(w > 0.0) || !std::isfinite(w)) {
      rep.positive_weights = false;
      if (opts.throw_on_violation)
        throw SpaceError("nonpositive weight at point " + std::to_string(i));
    }
  }
  for (int i = 0; i < n && (rep.symmetric && rep.separated); ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        if (space.dist(i, j) != 0.0) {
          rep.separated = false;
          if (opts.throw_on_violation)
            throw SpaceError("nonzero self-distance at point " + std::to_string(i));
          break;
        }
        continue;
      }
      double dij = space.dist(i, j), dji = space.dist(j, i);
      if (!(dij > 0.0) || !std::isfinite(dij)) {
        rep.separated = false;
        if (opts.throw_on_violation)
          throw SpaceError("zero distance between distinct points " + std::to_string(i) +
                           " and " + std::to_string(j));
        break;
      }
      if (dij != dji) {
        rep.symmetric = false;
        if (opts.throw_on_violation)
          throw SpaceError("asymmetric distance between points " + std::to_string(i) + " and " +
                           std::to_string(j));
        break;
      }
    }
  }
  if (!(rep.symmetric && rep.separated && rep.positive_weights)) {
    rep.a0 = 1.0;
    return rep;
  }

  // a0 = sup d(i,k) / (d(i,j) + d(j,k)); for fixed (i,k) minimize the
  // denominator over j. Exact up to max_exact_n points, seeded sampling beyond.
  double a0 = 1.0;
  const double* D = space.dist_matrix().data();
  if (n <= opts.max_exact_n) {
    for (int i = 0; i < n; ++i) {
      const double* Di = D + static_cast<size_t>(i) * n;
      for (int k = i + 1; k < n; ++k) {
        const double* Dk = D + static_cast<size_t>(k) * n;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
          double s = Di[j] + Dk[j];
          if (s < best && (j != i && j != k)) best = s;
        }
        if (best > 0.0) a0 = std::max(a0, Di[k] / best);
      }
    }
    rep.a0_exact = true;
  } else {
    std::mt19937_64 gen(opts.seed);
    for (long long t = 0; t < opts.sample_triples; ++t) {
      int i = static_cast<int>(gen() % static_cast<unsigned long long>(n));
      int k = static_cast<int>(gen() % static_cast<unsigned long long>(n));
      int j = static_cast<int>(gen() % static_cast<unsigned long long>(n));
      if (i == k || j == i || j == k) continue;
      double s = space.dist(i, j) + space.dist(j, k);
      if (s > 0.0) a0 = std::max(a0, space.dist(i, k) / s);
    }
    rep.a0_exact = false;
    rep.note = "a0 from seeded triple sampling";
  }
  rep.a0 = std::max(a0, 1.0);
  return rep;
}

double ball_measure(const FiniteHomSpace& space, int x, double r) {
  if (x < 0 || x >= space.size()) throw SpaceError("ball center out of range");
  if (!(r > 0.0)) return 0.0;
  const auto& c = space.cache();
  return c.mass_of_first(x, c.count_lt(x, r));
}

double closed_ball_measure(const FiniteHomSpace& space, int x, double r) {
  if (x < 0 || x >= space.size()) throw SpaceError("ball center out of range");
  if (r < 0.0) return 0.0;
  const auto& c = space.cache();
  return c.mass_of_first(x, c.count_le(x, r));
}

double vol_pair(const FiniteHomSpace& space, int x, int y) {
  if (x == y) throw SpaceError("coincident points in vol_pair");
  return ball_measure(space, x, space.dist(x, y));
}

DoublingProfile doubling_profile(const FiniteHomSpace& space) {
  DoublingProfile prof;
  const auto& dists = space.distinct_dists();
  if (dists.empty()) {
    prof.c_mu = 1.0;
    prof.omega = 0.0;
    return prof;
  }
  double lo = 4.0 * space.min_positive_dist();
  double hi = space.diameter() / 4.0;
  std::vector<double> radii;
  for (double r : dists)
    if (r >= lo && r <= hi) radii.push_back(r);
  if (radii.empty()) {
    radii = dists;  // tiny space, no interior window
    lo = dists.front();
    hi = dists.back();
  }
  prof.r_lo = lo;
  prof.r_hi = hi;

  const int n = space.size();
  double cmu = 1.0;
  prof.per_scale.reserve(radii.size());
  for (double r : radii) {
    double worst = 1.0;
    for (int x = 0; x < n; ++x) {
      double small = ball_measure(space, x, r);
      if (small <= 0.0) continue;
      double big = ball_measure(space, x, 2.0 * r);
      worst = std::max(worst, big / small);
    }
    prof.per_scale.emplace_back(r, worst);
    cmu = std::max(cmu, worst);
  }
  prof.c_mu = cmu;
  prof.omega = std::log2(cmu);
  return prof;
}

BallRatioReport check_ball_ratio_bound(const FiniteHomSpace& space,
                                       const DoublingProfile& profile, double a0,
                                       long long max_samples, unsigned long long seed) {
  BallRatioReport rep;
  const int n = space.size();
  std::vector<double> radii;
  for (const auto& [r, ratio] : profile.per_scale) {
    (void)ratio;
    radii.push_back(r);
  }
  if (radii.empty()) return rep;
  const double omega = profile.omega;
  // The chain-of-doublings argument yields mu(B(x,R)) <= c_mu (R/r)^omega
  // mu(B(x,r)): the c_mu factor absorbs the ceiling in the number of doubling
  // steps and cannot be dropped, discrete or not.
  const double factor = profile.c_mu * std::pow(a0, omega);
  const size_t nr = radii.size();

  auto check_tuple = [&](int x, int y, double r1, double r2) {
    double d = space.dist(x, y);
    if (r1 + d < r2) {
      ++rep.skipped;
      return;
    }
    double num = ball_measure(space, x, r1);
    double den = ball_measure(space, y, r2);
    if (den <= 0.0) {
      ++rep.skipped;
      return;
    }
    ++rep.checked;
    double lhs = num / den;
    double rhs = factor * std::pow((r1 + d) / r2, omega);
    if (lhs > rhs * (1.0 + kGeomTol)) rep.violations.push_back({x, y, r1, r2, lhs, rhs});
  };

  long long total = static_cast<long long>(n) * n * static_cast<long long>(nr) *
                    static_cast<long long>(nr);
  if (total <= max_samples) {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (double r1 : radii)
          for (double r2 : radii) check_tuple(x, y, r1, r2);
  } else {
    std::mt19937_64 gen(seed);
    for (long long t = 0; t < max_samples; ++t) {
      int x = static_cast<int>(gen() % static_cast<unsigned long long>(n));
      int y = static_cast<int>(gen() % static_cast<unsigned long long>(n));
      double r1 = radii[gen() % nr];
      double r2 = radii[gen() % nr];
      check_tuple(x, y, r1, r2);
    }
  }
  return rep;
}

}  // namespace hmtk
