#pragma once

#include <string>
#include <vector>

#include "hmtk/dyadic.hpp"
#include "hmtk/space.hpp"

namespace hmtk {

struct WaveletError : std::runtime_error {
  explicit WaveletError(const std::string& what) : std::runtime_error(what) {}
};

// One Haar-type basis element, stored sparsely over its support.
// Fathers are normalized indicators of level-0 cubes. A mother for parent
// level k is constant on the level-(k+1) children of its parent cube,
// orthogonal to the parent indicator, and keyed to the new-center child cube
// whose center it inherits.
struct BasisFunction {
  bool is_father = false;
  int level = 0;        // father: 0; mother: parent level k (scale delta^k)
  int cube = -1;        // father: level-0 cube; mother: new-center cube at level k+1
  int center = -1;      // point id
  std::vector<int> support;    // ascending point ids
  std::vector<double> values;  // aligned with support

  double value_at(int point) const;  // 0 outside the support
};

struct WaveletBasis {
  int n = 0;
  int k_min = 0, k_max = 0;
  double delta = 0.0;
  std::vector<BasisFunction> fathers;  // level-0 cube order
  std::vector<BasisFunction> mothers;  // (parent level asc, child cube index asc)
  // [k - k_min][cube index] -> mother index, -1 where no mother is keyed.
  std::vector<std::vector<int>> mother_of;
};

// Per-parent pivoted Gram-Schmidt in L^2(mu): new-center children first in
// ascending center id, the old-center child is the discarded last pivot, and
// each surviving pivot entry is kept positive. Throws WaveletError
// ("degenerate cube ...") on rank deficiency.
WaveletBasis build_mra(const FiniteHomSpace& space, const DyadicTree& tree);

struct CoefficientSet {
  std::vector<double> father;
  std::vector<double> mother;
};

CoefficientSet analyze(const std::vector<double>& f, const WaveletBasis& basis,
                       const FiniteHomSpace& space);
std::vector<double> synthesize(const CoefficientSet& coeffs, const WaveletBasis& basis,
                               const FiniteHomSpace& space);
// Fathers plus mothers with parent level <= level_cap.
std::vector<double> partial_sum(const std::vector<double>& f, const WaveletBasis& basis,
                                const FiniteHomSpace& space, int level_cap);
std::vector<double> partial_sum_coeffs(const CoefficientSet& coeffs, const WaveletBasis& basis,
                                       const FiniteHomSpace& space, int level_cap);

double l2_norm(const std::vector<double>& f, const FiniteHomSpace& space);
double l2_dist(const std::vector<double>& f, const std::vector<double>& g,
               const FiniteHomSpace& space);

// Structural health checks used by tests, the CLI and the acceptance gate.
struct BasisChecks {
  double gram_deviation = 0.0;    // max |<b_i, b_j> - delta_ij|
  double moment_max = 0.0;        // max |integral of a mother|
  double parseval_rel_max = 0.0;  // over supplied probes
  double recon_rel_max = 0.0;
  int basis_count = 0;
};
BasisChecks check_basis(const WaveletBasis& basis, const FiniteHomSpace& space,
                        const std::vector<std::vector<double>>& probes);

struct DecayFit {
  double nu_hat = 0.0;
  double s = 1.0;
  double C_hat = 0.0;
  std::vector<std::pair<int, double>> per_level_C;  // (parent level, tightest C)
};

struct HolderPoint {
  double eta = 0.0;
  double C = 0.0;
};

struct DecayReport {
  DecayFit fathers;
  DecayFit mothers;
  std::vector<HolderPoint> holder_frontier;  // eta in {0.25, 0.5, 0.75, 1.0}
};

// Exponential-envelope fit |psi(x)| sqrt(V_{delta^k}(c)) <= C exp(-nu d(x,c)/delta^k)
// with s = 1: nu by least squares on the log envelope over |psi| > 1e-14,
// family nu = min over elements, C tightest under the family nu. The Holder
// frontier scans pair quotients against (d/delta^k)^eta E_k at both endpoints.
DecayReport fit_decay(const WaveletBasis& basis, const DyadicTree& tree,
                      const FiniteHomSpace& space);

// Exposed for direct unit testing of the orthonormalization step: child
// masses -> rows of mother coefficients over the children (pivot order applied
// by the caller). Throws WaveletError on nonpositive mass or rank deficiency.
std::vector<std::vector<double>> mother_coefficients(const std::vector<double>& child_masses);

}  // namespace hmtk
