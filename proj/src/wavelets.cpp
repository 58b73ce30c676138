// Haar-type multiresolution on the dyadic tree: exact father indicators,
// per-parent pivoted mothers, analysis/synthesis and the decay diagnostics.

#include "hmtk/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmtk/summation.hpp"

namespace hmtk {

double BasisFunction::value_at(int point) const {
  auto it = std::lower_bound(support.begin(), support.end(), point);
  if (it == support.end() || *it != point) return 0.0;
  return values[static_cast<size_t>(it - support.begin())];
}

std::vector<std::vector<double>> mother_coefficients(const std::vector<double>& child_masses) {
  const int m = static_cast<int>(child_masses.size());
  for (double mass : child_masses)
    if (!(mass > 0.0)) throw WaveletError("degenerate cube: nonpositive child mass");
  std::vector<std::vector<double>> rows;
  if (m < 2) return rows;

  KahanSum total;
  for (double mass : child_masses) total.add(mass);
  const double M = total.value();
  if (!(M > 0.0)) throw WaveletError("degenerate cube: zero parent mass");

  auto wdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    KahanSum acc;
    for (int i = 0; i < m; ++i)
      acc.add(a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)] *
              child_masses[static_cast<size_t>(i)]);
    return acc.value();
  };

  const std::vector<double> u0(static_cast<size_t>(m), 1.0 / std::sqrt(M));
  rows.reserve(static_cast<size_t>(m) - 1);
  for (int j = 0; j + 1 < m; ++j) {
    std::vector<double> v(static_cast<size_t>(m), 0.0);
    v[static_cast<size_t>(j)] = 1.0;
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass) {
      double c = wdot(v, u0);
      for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] -= c * u0[static_cast<size_t>(i)];
      for (const auto& r : rows) {
        c = wdot(v, r);
        for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] -= c * r[static_cast<size_t>(i)];
      }
    }
    double norm2 = wdot(v, v);
    if (!(norm2 > 1e-30))
      throw WaveletError("degenerate cube: rank-deficient child system");
    double inv = 1.0 / std::sqrt(norm2);
    if (v[static_cast<size_t>(j)] < 0.0) inv = -inv;
    for (int i = 0; i < m; ++i) v[static_cast<size_t>(i)] *= inv;
    rows.push_back(std::move(v));
  }
  return rows;
}

WaveletBasis build_mra(const FiniteHomSpace& space, const DyadicTree& tree) {
  WaveletBasis basis;
  basis.n = space.size();
  basis.k_min = tree.k_min;
  basis.k_max = tree.k_max;
  basis.delta = tree.delta;
  basis.mother_of.resize(tree.levels.size());
  for (size_t l = 0; l < tree.levels.size(); ++l)
    basis.mother_of[l].assign(tree.levels[l].size(), -1);

  const auto& level0 = tree.cubes(0);
  basis.fathers.reserve(level0.size());
  for (size_t a = 0; a < level0.size(); ++a) {
    const Cube& Q = level0[a];
    BasisFunction f;
    f.is_father = true;
    f.level = 0;
    f.cube = static_cast<int>(a);
    f.center = Q.center;
    f.support = Q.points;
    f.values.assign(Q.points.size(), 1.0 / std::sqrt(Q.mass));
    basis.fathers.push_back(std::move(f));
  }

  // Mothers for parent levels k = 0 .. k_max-1. Pivot order inside a parent:
  // new-center children ascending center id, then the old-center child.
  for (int k = 0; k < tree.k_max; ++k) {
    const auto& parents = tree.cubes(k);
    const auto& fine = tree.cubes(k + 1);
    for (size_t q = 0; q < parents.size(); ++q) {
      const Cube& P = parents[q];
      const int m = static_cast<int>(P.children.size());
      if (m < 2) continue;

      std::vector<int> order;
      order.reserve(static_cast<size_t>(m));
      for (int child : P.children)
        if (fine[static_cast<size_t>(child)].new_center) order.push_back(child);
      std::sort(order.begin(), order.end(), [&fine](int a, int b) {
        return fine[static_cast<size_t>(a)].center < fine[static_cast<size_t>(b)].center;
      });
      for (int child : P.children)
        if (!fine[static_cast<size_t>(child)].new_center) order.push_back(child);
      if (static_cast<int>(order.size()) != m)
        throw WaveletError("degenerate cube: child bookkeeping mismatch");

      std::vector<double> masses(order.size());
      for (size_t i = 0; i < order.size(); ++i)
        masses[i] = fine[static_cast<size_t>(order[i])].mass;
      auto rows = mother_coefficients(masses);

      // Child lookup for the parent's points, then one mother per row.
      std::vector<int> child_pos(order.size());
      for (size_t i = 0; i < order.size(); ++i) child_pos[i] = order[i];
      for (size_t j = 0; j < rows.size(); ++j) {
        BasisFunction psi;
        psi.is_father = false;
        psi.level = k;
        psi.cube = order[j];
        psi.center = fine[static_cast<size_t>(order[j])].center;
        psi.support = P.points;
        psi.values.resize(P.points.size());
        for (size_t t = 0; t < P.points.size(); ++t) {
          int fine_cube = tree.cube_of(k + 1, P.points[t]);
          auto it = std::find(child_pos.begin(), child_pos.end(), fine_cube);
          psi.values[t] = rows[j][static_cast<size_t>(it - child_pos.begin())];
        }
        basis.mother_of[static_cast<size_t>(tree.li(k + 1))][static_cast<size_t>(order[j])] =
            static_cast<int>(basis.mothers.size());
        basis.mothers.push_back(std::move(psi));
      }
    }
  }

  // Completeness bookkeeping: fathers + mothers must span all n dimensions.
  if (basis.fathers.size() + basis.mothers.size() != static_cast<size_t>(basis.n))
    throw WaveletError("basis count mismatch: fathers + mothers != point count");
  return basis;
}

namespace {

double project(const std::vector<double>& f, const BasisFunction& b,
               const FiniteHomSpace& space) {
  KahanSum acc;
  for (size_t t = 0; t < b.support.size(); ++t) {
    int p = b.support[t];
    acc.add(f[static_cast<size_t>(p)] * b.values[t] * space.weight(p));
  }
  return acc.value();
}

}  // namespace

CoefficientSet analyze(const std::vector<double>& f, const WaveletBasis& basis,
                       const FiniteHomSpace& space) {
  if (f.size() != static_cast<size_t>(basis.n)) throw WaveletError("function length mismatch");
  CoefficientSet cs;
  cs.father.reserve(basis.fathers.size());
  cs.mother.reserve(basis.mothers.size());
  for (const auto& b : basis.fathers) cs.father.push_back(project(f, b, space));
  for (const auto& b : basis.mothers) cs.mother.push_back(project(f, b, space));
  return cs;
}

std::vector<double> synthesize_impl(const CoefficientSet& coeffs, const WaveletBasis& basis,
                                    int level_cap) {
  std::vector<KahanSum> acc(static_cast<size_t>(basis.n));
  for (size_t i = 0; i < basis.fathers.size(); ++i) {
    const auto& b = basis.fathers[i];
    double c = coeffs.father[i];
    for (size_t t = 0; t < b.support.size(); ++t)
      acc[static_cast<size_t>(b.support[t])].add(c * b.values[t]);
  }
  for (size_t i = 0; i < basis.mothers.size(); ++i) {
    const auto& b = basis.mothers[i];
    if (b.level > level_cap) continue;
    double c = coeffs.mother[i];
    for (size_t t = 0; t < b.support.size(); ++t)
      acc[static_cast<size_t>(b.support[t])].add(c * b.values[t]);
  }
  std::vector<double> out(static_cast<size_t>(basis.n));
  for (size_t p = 0; p < out.size(); ++p) out[p] = acc[p].value();
  return out;
}

std::vector<double> synthesize(const CoefficientSet& coeffs, const WaveletBasis& basis,
                               const FiniteHomSpace& space) {
  (void)space;
  return synthesize_impl(coeffs, basis, std::numeric_limits<int>::max());
}

std::vector<double> partial_sum_coeffs(const CoefficientSet& coeffs, const WaveletBasis& basis,
                                       const FiniteHomSpace& space, int level_cap) {
  (void)space;
  return synthesize_impl(coeffs, basis, level_cap);
}

std::vector<double> partial_sum(const std::vector<double>& f, const WaveletBasis& basis,
                                const FiniteHomSpace& space, int level_cap) {
  return partial_sum_coeffs(analyze(f, basis, space), basis, space, level_cap);
}

double l2_norm(const std::vector<double>& f, const FiniteHomSpace& space) {
  KahanSum acc;
  for (size_t p = 0; p < f.size(); ++p) acc.add(f[p] * f[p] * space.weight(static_cast<int>(p)));
  return std::sqrt(acc.value());
}

double l2_dist(const std::vector<double>& f, const std::vector<double>& g,
               const FiniteHomSpace& space) {
  KahanSum acc;
  for (size_t p = 0; p < f.size(); ++p) {
    double d = f[p] - g[p];
    acc.add(d * d * space.weight(static_cast<int>(p)));
  }
  return std::sqrt(acc.value());
}

BasisChecks check_basis(const WaveletBasis& basis, const FiniteHomSpace& space,
                        const std::vector<std::vector<double>>& probes) {
  BasisChecks checks;
  const int n = basis.n;
  std::vector<const BasisFunction*> all;
  all.reserve(basis.fathers.size() + basis.mothers.size());
  for (const auto& b : basis.fathers) all.push_back(&b);
  for (const auto& b : basis.mothers) all.push_back(&b);
  checks.basis_count = static_cast<int>(all.size());

  // Dense copies once, pairwise products over the smaller support.
  std::vector<std::vector<double>> dense(all.size(), std::vector<double>(static_cast<size_t>(n), 0.0));
  for (size_t i = 0; i < all.size(); ++i)
    for (size_t t = 0; t < all[i]->support.size(); ++t)
      dense[i][static_cast<size_t>(all[i]->support[t])] = all[i]->values[t];

  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i; j < all.size(); ++j) {
      const size_t si = (all[j]->support.size() < all[i]->support.size()) ? j : i;
      const BasisFunction* small = all[si];
      const std::vector<double>& big = dense[si == i ? j : i];
      KahanSum acc;
      for (size_t t = 0; t < small->support.size(); ++t) {
        int p = small->support[t];
        acc.add(small->values[t] * big[static_cast<size_t>(p)] * space.weight(p));
      }
      double expect = (i == j) ? 1.0 : 0.0;
      checks.gram_deviation = std::max(checks.gram_deviation, std::fabs(acc.value() - expect));
    }
  }

  for (const auto& b : basis.mothers) {
    KahanSum acc;
    for (size_t t = 0; t < b.support.size(); ++t)
      acc.add(b.values[t] * space.weight(b.support[t]));
    checks.moment_max = std::max(checks.moment_max, std::fabs(acc.value()));
  }

  for (const auto& f : probes) {
    CoefficientSet cs = analyze(f, basis, space);
    double norm = l2_norm(f, space);
    if (norm <= 0.0) continue;
    KahanSum sq;
    for (double c : cs.father) sq.add(c * c);
    for (double c : cs.mother) sq.add(c * c);
    checks.parseval_rel_max =
        std::max(checks.parseval_rel_max, std::fabs(sq.value() - norm * norm) / (norm * norm));
    std::vector<double> back = synthesize(cs, basis, space);
    checks.recon_rel_max = std::max(checks.recon_rel_max, l2_dist(f, back, space) / norm);
  }
  return checks;
}

namespace {

struct ElementFit {
  double nu = 1.0;
  bool fitted = false;
};

// Least-squares slope of log(|psi| sqrt(V)) against d(x, c)/delta^k.
ElementFit fit_element_nu(const BasisFunction& b, const FiniteHomSpace& space, double scale,
                          double sqrtV) {
  ElementFit out;
  std::vector<double> ts, us;
  for (size_t t = 0; t < b.support.size(); ++t) {
    double av = std::fabs(b.values[t]);
    if (av <= 1e-14) continue;
    ts.push_back(space.dist(b.support[t], b.center) / scale);
    us.push_back(std::log(av * sqrtV));
  }
  if (ts.size() < 2) return out;
  KahanSum st, su;
  for (double t : ts) st.add(t);
  for (double u : us) su.add(u);
  const double tbar = st.value() / static_cast<double>(ts.size());
  const double ubar = su.value() / static_cast<double>(us.size());
  KahanSum sxx, sxy;
  for (size_t i = 0; i < ts.size(); ++i) {
    sxx.add((ts[i] - tbar) * (ts[i] - tbar));
    sxy.add((ts[i] - tbar) * (us[i] - ubar));
  }
  if (!(sxx.value() > 0.0)) return out;
  double slope = sxy.value() / sxx.value();
  out.nu = std::max(-slope, 1e-3);
  out.fitted = true;
  return out;
}

double tightest_C(const BasisFunction& b, const FiniteHomSpace& space, double scale,
                  double sqrtV, double nu) {
  double C = 0.0;
  for (size_t t = 0; t < b.support.size(); ++t) {
    double av = std::fabs(b.values[t]);
    if (av <= 0.0) continue;
    double tt = space.dist(b.support[t], b.center) / scale;
    C = std::max(C, av * sqrtV * std::exp(nu * tt));
  }
  return C;
}

}  // namespace

DecayReport fit_decay(const WaveletBasis& basis, const DyadicTree& tree,
                      const FiniteHomSpace& space) {
  DecayReport report;

  auto family_fit = [&](const std::vector<const BasisFunction*>& elems, DecayFit& fit) {
    if (elems.empty()) return;
    std::vector<double> sqrtVs(elems.size());
    std::vector<double> scales(elems.size());
    double nu_min = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < elems.size(); ++i) {
      const BasisFunction& b = *elems[i];
      scales[i] = tree.scale(b.level);
      sqrtVs[i] = std::sqrt(ball_measure(space, b.center, scales[i]));
      ElementFit ef = fit_element_nu(b, space, scales[i], sqrtVs[i]);
      nu_min = std::min(nu_min, ef.nu);
    }
    fit.nu_hat = std::isfinite(nu_min) ? nu_min : 1.0;
    fit.s = 1.0;
    std::vector<std::pair<int, double>> per_level;
    for (size_t i = 0; i < elems.size(); ++i) {
      double C = tightest_C(*elems[i], space, scales[i], sqrtVs[i], fit.nu_hat);
      int k = elems[i]->level;
      auto it = std::find_if(per_level.begin(), per_level.end(),
                             [k](const auto& pr) { return pr.first == k; });
      if (it == per_level.end())
        per_level.emplace_back(k, C);
      else
        it->second = std::max(it->second, C);
      fit.C_hat = std::max(fit.C_hat, C);
    }
    std::sort(per_level.begin(), per_level.end());
    fit.per_level_C = std::move(per_level);
  };

  std::vector<const BasisFunction*> fs, ms;
  for (const auto& b : basis.fathers) fs.push_back(&b);
  for (const auto& b : basis.mothers) ms.push_back(&b);
  family_fit(fs, report.fathers);
  family_fit(ms, report.mothers);

  // Holder frontier over mother pairs within one parent scale.
  const double resolution = space.min_positive_dist();
  const double nu = report.mothers.nu_hat > 0.0 ? report.mothers.nu_hat : 1.0;
  const std::vector<double> etas = {0.25, 0.5, 0.75, 1.0};
  std::vector<double> Cs(etas.size(), 0.0);
  for (const auto& b : basis.mothers) {
    const double scale = tree.scale(b.level);
    const double sqrtV = std::sqrt(ball_measure(space, b.center, scale));
    auto Ek = [&](int z) { return std::exp(-nu * space.dist(z, b.center) / scale); };
    for (size_t t = 0; t < b.support.size(); ++t) {
      const int x = b.support[t];
      const double vx = b.values[t];
      const auto& ds = space.cache().dist_sorted[static_cast<size_t>(x)];
      for (const auto& [d, y] : ds) {
        if (d > scale) break;
        if (y == x || d < resolution) continue;
        double vy = b.value_at(y);
        if (vy != 0.0 && y < x) continue;  // unordered pair already handled from y
        double diff = std::fabs(vx - vy);
        if (diff == 0.0) continue;
        double base = diff * sqrtV;
        double ex = Ek(x), ey = Ek(y);
        for (size_t e = 0; e < etas.size(); ++e) {
          double damp = std::pow(d / scale, etas[e]);
          Cs[e] = std::max(Cs[e], base / (damp * ex));
          Cs[e] = std::max(Cs[e], base / (damp * ey));
        }
      }
    }
  }
  report.holder_frontier.clear();
  for (size_t e = 0; e < etas.size(); ++e)
    report.holder_frontier.push_back({etas[e], Cs[e]});
  return report;
}

}  // namespace hmtk
