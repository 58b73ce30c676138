// Norm layer: the two-branch lip quotient norm, the dyadic Carleson sequence
// norm, Holder and kernel quantities, and the empirical inequality constants.

#include "hmtk/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmtk/summation.hpp"

namespace hmtk {

namespace {

struct LipTracker {
  double best = 0.0;
  LipWitness witness;
  bool any = false;

  void consider(double q, int center, double radius, LipBranch branch) {
    if (!any || q > best) {
      best = q;
      witness = {center, radius, branch};
      any = true;
    }
  }
};

}  // namespace

LipResult lip_norm(const std::vector<double>& f, const FiniteHomSpace& space, double theta) {
  const int n = space.size();
  if (f.size() != static_cast<size_t>(n)) throw NormError("function length mismatch");
  const double far_radius = space.diameter() + 1.0;
  LipTracker track;

  for (int x = 0; x < n; ++x) {
    const auto& ds = space.cache().dist_sorted[static_cast<size_t>(x)];
    const auto& pref = space.cache().prefix[static_cast<size_t>(x)];
    double fmax = -std::numeric_limits<double>::infinity();
    double fmin = std::numeric_limits<double>::infinity();
    size_t idx = 0;
    while (idx < ds.size()) {
      const double v = ds[idx].first;
      while (idx < ds.size() && ds[idx].first == v) {
        double fv = f[static_cast<size_t>(ds[idx].second)];
        fmax = std::max(fmax, fv);
        fmin = std::min(fmin, fv);
        ++idx;
      }
      // Radii in (v, hi] share this membership set of idx points.
      const bool last = idx == ds.size();
      const double hi = last ? std::numeric_limits<double>::infinity() : ds[idx].first;
      const double mass = pref[idx];
      const double mpow = std::pow(mass, theta);
      if (v < 1.0) {
        double q = (fmax - fmin) / mpow;
        track.consider(q, x, hi <= 1.0 ? hi : 1.0, LipBranch::oscillation);
      }
      if (!(hi <= 1.0)) {
        double q = std::max(std::fabs(fmax), std::fabs(fmin)) / mpow;
        track.consider(q, x, last ? far_radius : hi, LipBranch::sup);
      }
    }
  }

  LipResult res;
  res.value = track.best;
  res.witness = track.witness;
  res.degenerate = !(track.best > 0.0);
  return res;
}

double evaluate_ball_quotient(const std::vector<double>& f, const FiniteHomSpace& space,
                              double theta, int center, double radius) {
  const auto& ds = space.cache().dist_sorted[static_cast<size_t>(center)];
  const auto& pref = space.cache().prefix[static_cast<size_t>(center)];
  const int cnt = space.cache().count_lt(center, radius);
  if (cnt <= 0) return 0.0;
  double fmax = -std::numeric_limits<double>::infinity();
  double fmin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < cnt; ++t) {
    double fv = f[static_cast<size_t>(ds[static_cast<size_t>(t)].second)];
    fmax = std::max(fmax, fv);
    fmin = std::min(fmin, fv);
  }
  const double mpow = std::pow(pref[static_cast<size_t>(cnt)], theta);
  if (radius <= 1.0) return (fmax - fmin) / mpow;
  return std::max(std::fabs(fmax), std::fabs(fmin)) / mpow;
}

CarlesonResult carleson_norm(const CoefficientSet& coeffs, const WaveletBasis& basis,
                             const DyadicTree& tree, double theta) {
  if (coeffs.father.size() != basis.fathers.size() ||
      coeffs.mother.size() != basis.mothers.size())
    throw NormError("coefficient set does not match basis");
  const int lcount = static_cast<int>(tree.levels.size());
  const int l0 = tree.li(0);

  std::vector<std::vector<double>> attached(static_cast<size_t>(lcount));
  for (int l = 0; l < lcount; ++l)
    attached[static_cast<size_t>(l)].assign(tree.levels[static_cast<size_t>(l)].size(), 0.0);
  for (size_t a = 0; a < basis.fathers.size(); ++a) {
    double c = coeffs.father[a];
    attached[static_cast<size_t>(l0)][static_cast<size_t>(basis.fathers[a].cube)] = c * c;
  }
  for (size_t i = 0; i < basis.mothers.size(); ++i) {
    const auto& b = basis.mothers[i];
    double c = coeffs.mother[i];
    attached[static_cast<size_t>(tree.li(b.level + 1))][static_cast<size_t>(b.cube)] = c * c;
  }

  // Bottom-up subtree sums over levels k >= 0: own contribution first, then
  // children in ascending index order.
  std::vector<std::vector<double>> subtree(static_cast<size_t>(lcount));
  for (int k = tree.k_max; k >= 0; --k) {
    const int l = tree.li(k);
    const auto& cubes = tree.levels[static_cast<size_t>(l)];
    subtree[static_cast<size_t>(l)].assign(cubes.size(), 0.0);
    for (size_t a = 0; a < cubes.size(); ++a) {
      KahanSum acc;
      acc.add(attached[static_cast<size_t>(l)][a]);
      if (k < tree.k_max) {
        for (int child : cubes[a].children)
          acc.add(subtree[static_cast<size_t>(l + 1)][static_cast<size_t>(child)]);
      }
      subtree[static_cast<size_t>(l)][a] = acc.value();
    }
  }

  // Coarser contributions propagate down single-child chains only (there the
  // finer cube equals the coarser one as a set), accumulated coarsest first.
  std::vector<std::vector<double>> chain(static_cast<size_t>(lcount));
  for (int k = 0; k <= tree.k_max; ++k)
    chain[static_cast<size_t>(tree.li(k))].assign(tree.levels[static_cast<size_t>(tree.li(k))].size(),
                                                  0.0);
  for (int k = 1; k <= tree.k_max; ++k) {
    const int l = tree.li(k);
    const auto& cubes = tree.levels[static_cast<size_t>(l)];
    const auto& coarser = tree.levels[static_cast<size_t>(l - 1)];
    for (size_t a = 0; a < cubes.size(); ++a) {
      int p = cubes[a].parent;
      if (p < 0 || coarser[static_cast<size_t>(p)].children.size() != 1) continue;
      chain[static_cast<size_t>(l)][a] =
          chain[static_cast<size_t>(l - 1)][static_cast<size_t>(p)] +
          attached[static_cast<size_t>(l - 1)][static_cast<size_t>(p)];
    }
  }

  CarlesonResult res;
  bool any = false;
  for (int k = 0; k <= tree.k_max; ++k) {
    const int l = tree.li(k);
    const auto& cubes = tree.levels[static_cast<size_t>(l)];
    for (size_t a = 0; a < cubes.size(); ++a) {
      double S = subtree[static_cast<size_t>(l)][a] + chain[static_cast<size_t>(l)][a];
      double val = std::sqrt(S / std::pow(cubes[a].mass, 1.0 + 2.0 * theta));
      if (!any || val > res.value) {
        res.value = val;
        res.witness_k = k;
        res.witness_cube = static_cast<int>(a);
        any = true;
      }
    }
  }
  return res;
}

double holder_norm(const std::vector<double>& f, const FiniteHomSpace& space, double exponent) {
  const int n = space.size();
  if (f.size() != static_cast<size_t>(n)) throw NormError("function length mismatch");
  double seminorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = space.dist(i, j);
      if (!(d > 0.0)) continue;
      seminorm = std::max(seminorm,
                          std::fabs(f[static_cast<size_t>(i)] - f[static_cast<size_t>(j)]) /
                              std::pow(d, exponent));
    }
  double sup = 0.0;
  for (double v : f) sup = std::max(sup, std::fabs(v));
  return seminorm + sup;
}

double kernel_P(const FiniteHomSpace& space, int x0, int x, double r, double gamma) {
  if (!(r > 0.0)) throw NormError("kernel_P needs r > 0");
  const double d = space.dist(x0, x);
  const double Vr = ball_measure(space, x0, r);
  const double Vxy = (x == x0) ? 0.0 : ball_measure(space, x0, d);
  return (1.0 / (Vr + Vxy)) * std::pow(r / (r + d), gamma);
}

double kernel_P_integral(const FiniteHomSpace& space, int x0, double r, double gamma) {
  KahanSum acc;
  for (int x = 0; x < space.size(); ++x)
    acc.add(kernel_P(space, x0, x, r, gamma) * space.weight(x));
  return acc.value();
}

double kernel_E(const FiniteHomSpace& space, int x, int y, double delta, int k, double nu,
                double s, double r) {
  const double scale = std::pow(delta, k);
  return std::exp(-(nu / r) * std::pow(space.dist(x, y) / scale, s));
}

TestFnNorm test_function_norm(const std::vector<double>& f, const FiniteHomSpace& space, int x0,
                              double r, double beta, double gamma, double a0) {
  const int n = space.size();
  if (f.size() != static_cast<size_t>(n)) throw NormError("function length mismatch");
  TestFnNorm out;
  std::vector<double> P(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    P[static_cast<size_t>(x)] = kernel_P(space, x0, x, r, gamma);
    out.size_part = std::max(out.size_part,
                             std::fabs(f[static_cast<size_t>(x)]) / P[static_cast<size_t>(x)]);
  }
  const double half = 1.0 / (2.0 * a0);
  for (int x = 0; x < n; ++x) {
    const double reach = half * (r + space.dist(x0, x));
    const auto& ds = space.cache().dist_sorted[static_cast<size_t>(x)];
    for (const auto& [d, y] : ds) {
      if (d > reach) break;
      if (y == x) continue;
      double q = std::fabs(f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)]) /
                 (std::pow(d / (r + space.dist(x0, x)), beta) * P[static_cast<size_t>(x)]);
      out.reg_part = std::max(out.reg_part, q);
    }
  }
  out.value = std::max(out.size_part, out.reg_part);
  return out;
}

PointwiseBounds check_pointwise_bounds(const std::vector<double>& f, const FiniteHomSpace& space,
                                       double theta, double lip_value) {
  PointwiseBounds out;
  if (!(lip_value > 0.0)) {
    out.degenerate = true;
    return out;
  }
  const int n = space.size();
  for (int x = 0; x < n; ++x) {
    double V2 = ball_measure(space, x, 2.0);
    out.C1 = std::max(out.C1, std::fabs(f[static_cast<size_t>(x)]) /
                                  (lip_value * std::pow(V2, theta)));
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      double V = ball_measure(space, x, space.dist(x, y));
      if (!(V > 0.0)) continue;
      out.C2 = std::max(out.C2, std::fabs(f[static_cast<size_t>(x)] - f[static_cast<size_t>(y)]) /
                                    (lip_value * std::pow(V, theta)));
    }
  return out;
}

BoundRatio check_multiplier_bound(const std::vector<double>& psi, const std::vector<double>& f,
                                  const FiniteHomSpace& space, int x0, double r, double theta,
                                  double omega, double beta, double gamma, double a0) {
  if (!(theta > 0.0) || theta > 1.0 / omega + kGeomTol)
    throw NormError("precondition violated: multiplier requires theta in (0, 1/omega]");
  if (beta < theta * omega - kGeomTol || beta > 1.0 + kGeomTol)
    throw NormError("precondition violated: multiplier requires beta in [theta*omega, 1]");
  if (!(gamma > 0.0)) throw NormError("precondition violated: multiplier requires gamma > 0");

  BoundRatio out;
  LipResult lf = lip_norm(f, space, theta);
  if (lf.degenerate) {
    out.degenerate = true;
    return out;
  }
  std::vector<double> prod(psi.size());
  for (size_t i = 0; i < psi.size(); ++i) prod[i] = psi[i] * f[i];
  LipResult lp = lip_norm(prod, space, theta);
  TestFnNorm tn = test_function_norm(psi, space, x0, r, beta, gamma, a0);
  out.numerator = lp.value;
  out.denominator = tn.value * lf.value;
  out.ratio = out.numerator / out.denominator;
  return out;
}

BoundRatio check_pairing_bound(const std::vector<double>& psi, const std::vector<double>& f,
                               const FiniteHomSpace& space, int x0, double r, double theta,
                               double omega, double beta, double gamma, double a0) {
  if (!(gamma > theta * omega))
    throw NormError("precondition violated: pairing requires gamma > theta * omega");
  if (!(beta > 0.0) || beta > 1.0 + kGeomTol)
    throw NormError("precondition violated: pairing requires beta in (0, 1]");

  BoundRatio out;
  LipResult lf = lip_norm(f, space, theta);
  if (lf.degenerate) {
    out.degenerate = true;
    return out;
  }
  KahanSum pair;
  for (size_t i = 0; i < psi.size(); ++i)
    pair.add(f[i] * psi[i] * space.weight(static_cast<int>(i)));
  TestFnNorm tn = test_function_norm(psi, space, x0, r, beta, gamma, a0);
  out.numerator = std::fabs(pair.value());
  out.denominator = tn.value * lf.value;
  out.ratio = out.numerator / out.denominator;
  return out;
}

}  // namespace hmtk
