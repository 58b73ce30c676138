// Independent reference implementations used to cross-check the library.
// They recompute everything from first principles; the only conventions they
// share with the library are the documented ones (open balls, (distance, id)
// ordering for compensated ball masses, child order, chain accumulation).
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hmtk/dyadic.hpp"
#include "hmtk/norms.hpp"
#include "hmtk/space.hpp"
#include "hmtk/summation.hpp"
#include "hmtk/wavelets.hpp"

namespace oracle {

// Mass of the open ball, summed compensated in (distance, id) order built
// from scratch off the raw distance matrix.
inline double ball_mass(const hmtk::FiniteHomSpace& space, int x, double r) {
  std::vector<std::pair<double, int>> order;
  for (int y = 0; y < space.size(); ++y) order.push_back({space.dist(x, y), y});
  std::sort(order.begin(), order.end());
  hmtk::KahanSum acc;
  for (const auto& [d, y] : order) {
    if (d >= r) break;
    acc.add(space.weight(y));
  }
  return acc.value();
}

// Exhaustive two-branch lip norm over all centers and candidate radii.
inline double lip_norm(const std::vector<double>& f, const hmtk::FiniteHomSpace& space,
                       double theta) {
  double best = 0.0;
  for (int x = 0; x < space.size(); ++x) {
    std::vector<std::pair<double, int>> order;
    for (int y = 0; y < space.size(); ++y) order.push_back({space.dist(x, y), y});
    std::sort(order.begin(), order.end());
    for (double r : space.candidate_radii()) {
      double fmax = -std::numeric_limits<double>::infinity();
      double fmin = std::numeric_limits<double>::infinity();
      hmtk::KahanSum mass;
      for (const auto& [d, y] : order) {
        if (d >= r) break;
        fmax = std::max(fmax, f[static_cast<size_t>(y)]);
        fmin = std::min(fmin, f[static_cast<size_t>(y)]);
        mass.add(space.weight(y));
      }
      if (!(mass.value() > 0.0)) continue;
      const double mpow = std::pow(mass.value(), theta);
      double q = r <= 1.0 ? (fmax - fmin) / mpow
                          : std::max(std::fabs(fmax), std::fabs(fmin)) / mpow;
      best = std::max(best, q);
    }
  }
  return best;
}

// Per-cube squared coefficient totals: sum over the subtree recursively plus
// the single-child-chain contributions from coarser set-equal cubes.
struct CarlesonOracle {
  const hmtk::WaveletBasis& basis;
  const hmtk::DyadicTree& tree;
  std::vector<std::vector<double>> attached;

  CarlesonOracle(const hmtk::CoefficientSet& coeffs, const hmtk::WaveletBasis& b,
                 const hmtk::DyadicTree& t)
      : basis(b), tree(t) {
    attached.resize(tree.levels.size());
    for (size_t l = 0; l < tree.levels.size(); ++l)
      attached[l].assign(tree.levels[l].size(), 0.0);
    for (size_t a = 0; a < basis.fathers.size(); ++a) {
      double c = coeffs.father[a];
      attached[static_cast<size_t>(tree.li(0))][static_cast<size_t>(basis.fathers[a].cube)] =
          c * c;
    }
    for (size_t i = 0; i < basis.mothers.size(); ++i) {
      double c = coeffs.mother[i];
      attached[static_cast<size_t>(tree.li(basis.mothers[i].level + 1))]
              [static_cast<size_t>(basis.mothers[i].cube)] = c * c;
    }
  }

  double subtree(int k, int cube) const {
    const int l = tree.li(k);
    hmtk::KahanSum acc;
    acc.add(attached[static_cast<size_t>(l)][static_cast<size_t>(cube)]);
    if (k < tree.k_max) {
      for (int child : tree.levels[static_cast<size_t>(l)][static_cast<size_t>(cube)].children)
        acc.add(subtree(k + 1, child));
    }
    return acc.value();
  }

  double chain(int k, int cube) const {
    if (k <= 0) return 0.0;
    const int l = tree.li(k);
    const int p = tree.levels[static_cast<size_t>(l)][static_cast<size_t>(cube)].parent;
    if (p < 0) return 0.0;
    const auto& parent = tree.levels[static_cast<size_t>(l - 1)][static_cast<size_t>(p)];
    if (parent.children.size() != 1) return 0.0;
    return chain(k - 1, p) + attached[static_cast<size_t>(l - 1)][static_cast<size_t>(p)];
  }

  double value(double theta) const {
    double best = 0.0;
    bool any = false;
    for (int k = 0; k <= tree.k_max; ++k) {
      const auto& cubes = tree.levels[static_cast<size_t>(tree.li(k))];
      for (size_t a = 0; a < cubes.size(); ++a) {
        double S = subtree(k, static_cast<int>(a)) + chain(k, static_cast<int>(a));
        double val = std::sqrt(S / std::pow(cubes[a].mass, 1.0 + 2.0 * theta));
        if (!any || val > best) {
          best = val;
          any = true;
        }
      }
    }
    return best;
  }
};

inline double carleson_norm(const hmtk::CoefficientSet& coeffs, const hmtk::WaveletBasis& basis,
                            const hmtk::DyadicTree& tree, double theta) {
  return CarlesonOracle(coeffs, basis, tree).value(theta);
}

}  // namespace oracle
