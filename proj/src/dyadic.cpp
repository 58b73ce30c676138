// Hytonen-Kairema style dyadic structure on a finite doubling space: nested
// greedy nets, nesting-respecting Voronoi cubes and the axiom verifier.

#include "hmtk/dyadic.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "hmtk/summation.hpp"

namespace hmtk {

bool NetHierarchy::is_center(int k, int id) const {
  const auto& c = centers(k);
  return std::binary_search(c.begin(), c.end(), id);
}

namespace {

// Greedy maximal t-separated subset, scanning candidates in ascending id order.
std::vector<int> greedy_net(const FiniteHomSpace& space, const std::vector<int>& candidates,
                            double t) {
  std::vector<int> kept;
  for (int id : candidates) {
    bool ok = true;
    for (int other : kept) {
      if (space.dist(id, other) < t) {
        ok = false;
        break;
      }
    }
    if (ok) kept.push_back(id);
  }
  return kept;
}

}  // namespace

NetHierarchy build_nets(const FiniteHomSpace& space, double a0, const NetOptions& opts) {
  if (space.size() < 1) throw DyadicError("empty space");
  if (space.min_positive_dist() <= 0.0 && space.size() > 1)
    throw DyadicError("space has coincident points");

  double delta = opts.delta;
  double c0 = opts.c0;
  double C0 = opts.C0 > 0.0 ? opts.C0 : 1.5 * a0;
  if (!(delta > 0.0 && delta < 1.0)) throw DyadicError("delta must lie in (0,1)");
  if (!(c0 > 0.0 && c0 < C0)) throw DyadicError("net constants require 0 < c0 < C0");

  if (opts.check_admissibility) {
    if (opts.shrink_delta) {
      int guard = 0;
      while (12.0 * a0 * a0 * a0 * C0 * delta > c0 && guard++ < 60) delta *= 0.5;
    }
    if (12.0 * a0 * a0 * a0 * C0 * delta > c0)
      throw DyadicError("admissibility violated: 12 a0^3 C0 delta > c0");
  }

  const int n = space.size();
  const double C_sharp = std::max(2.0 * a0 * C0, 1.0);
  const double dmin = space.size() > 1 ? space.min_positive_dist() : 1.0;

  int k_max = 0;
  while (std::pow(delta, k_max) >= dmin / C_sharp && k_max < 64) ++k_max;

  NetHierarchy nets;
  nets.delta = delta;
  nets.c0 = c0;
  nets.C0 = C0;
  nets.k_max = k_max;

  // Fine to coarse. X^{k_max} keeps every point because c0 delta^{k_max} is
  // below the minimum spacing; each coarser net thins the previous one.
  std::vector<std::vector<int>> rev;  // rev[0] = level k_max
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
  rev.push_back(greedy_net(space, all, c0 * std::pow(delta, k_max)));
  int k = k_max;
  while ((k > 0 || rev.back().size() > 1) && k > k_max - 64) {
    --k;
    rev.push_back(greedy_net(space, rev.back(), c0 * std::pow(delta, k)));
  }
  nets.k_min = k;
  nets.levels.assign(rev.rbegin(), rev.rend());

  nets.covering_radius.resize(nets.levels.size());
  for (int kk = nets.k_min; kk <= nets.k_max; ++kk) {
    const auto& centers = nets.centers(kk);
    double worst = 0.0;
    int worst_point = -1;
    for (int p = 0; p < n; ++p) {
      double best = std::numeric_limits<double>::infinity();
      for (int c : centers) best = std::min(best, space.dist(p, c));
      if (best > worst) {
        worst = best;
        worst_point = p;
      }
    }
    nets.covering_radius[static_cast<size_t>(nets.li(kk))] = worst;
    if (worst >= C0 * nets.scale(kk) * (1.0 + kGeomTol)) {
      std::ostringstream os;
      os << "covering failed at level " << kk << ": point " << worst_point
         << " sits at distance " << worst << " from the net, C0 delta^k = "
         << C0 * nets.scale(kk);
      throw DyadicError(os.str());
    }
  }
  return nets;
}

DyadicTree build_cubes(const FiniteHomSpace& space, const NetHierarchy& nets, double a0) {
  const int n = space.size();
  DyadicTree tree;
  tree.delta = nets.delta;
  tree.c0 = nets.c0;
  tree.C0 = nets.C0;
  tree.a0 = a0;
  tree.c_sharp = nets.c0 / (3.0 * a0 * a0);
  tree.C_sharp = std::max(2.0 * a0 * nets.C0, 1.0);
  tree.k_min = nets.k_min;
  tree.k_max = nets.k_max;
  tree.levels.resize(nets.levels.size());
  tree.point_cube.assign(nets.levels.size(), std::vector<int>(static_cast<size_t>(n), -1));

  // Coarsest level: plain Voronoi, nearest center wins, lowest id on ties.
  {
    const auto& centers = nets.centers(nets.k_min);
    auto& cubes = tree.levels[0];
    cubes.resize(centers.size());
    for (size_t a = 0; a < centers.size(); ++a) cubes[a].center = centers[a];
    for (int p = 0; p < n; ++p) {
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t a = 0; a < centers.size(); ++a) {
        double d = space.dist(p, centers[a]);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(a);
        }
      }
      tree.point_cube[0][static_cast<size_t>(p)] = best;
      cubes[static_cast<size_t>(best)].points.push_back(p);
    }
  }

  // Finer levels: centers attach to the cube containing them, points choose
  // the nearest attached center of their current cube.
  for (int k = nets.k_min + 1; k <= nets.k_max; ++k) {
    const int lprev = nets.li(k - 1);
    const int lcur = nets.li(k);
    const auto& centers = nets.centers(k);
    auto& cubes = tree.levels[static_cast<size_t>(lcur)];
    cubes.resize(centers.size());

    std::vector<std::vector<int>> attached(tree.levels[static_cast<size_t>(lprev)].size());
    for (size_t a = 0; a < centers.size(); ++a) {
      int c = centers[a];
      cubes[a].center = c;
      cubes[a].new_center = !nets.is_center(k - 1, c);
      int parent = tree.point_cube[static_cast<size_t>(lprev)][static_cast<size_t>(c)];
      cubes[a].parent = parent;
      attached[static_cast<size_t>(parent)].push_back(static_cast<int>(a));
    }
    for (size_t q = 0; q < attached.size(); ++q) {
      for (int a : attached[q])
        tree.levels[static_cast<size_t>(lprev)][q].children.push_back(a);
    }
    for (int p = 0; p < n; ++p) {
      int parent = tree.point_cube[static_cast<size_t>(lprev)][static_cast<size_t>(p)];
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int a : attached[static_cast<size_t>(parent)]) {
        double d = space.dist(p, cubes[static_cast<size_t>(a)].center);
        if (d < best_d) {
          best_d = d;
          best = a;
        }
      }
      tree.point_cube[static_cast<size_t>(lcur)][static_cast<size_t>(p)] = best;
      cubes[static_cast<size_t>(best)].points.push_back(p);
    }
  }

  for (auto& level : tree.levels) {
    for (auto& cube : level) {
      KahanSum acc;
      for (int p : cube.points) acc.add(space.weight(p));
      cube.mass = acc.value();
    }
  }
  return tree;
}

std::string CubeAxiomReport::summary() const {
  std::ostringstream os;
  os << (ok ? "ok" : "violated") << ", " << checks << " checks, " << violations.size()
     << " violations";
  if (!violations.empty()) {
    const auto& v = violations.front();
    os << " (first: " << v.kind << " at level " << v.k << ", cube " << v.cube << ", point "
       << v.point << ": " << v.detail << ")";
  }
  return os.str();
}

CubeAxiomReport verify_cube_axioms(const FiniteHomSpace& space, const DyadicTree& tree) {
  CubeAxiomReport rep;
  const int n = space.size();
  auto violate = [&rep](std::string kind, int k, int cube, int point, std::string detail) {
    rep.violations.push_back({std::move(kind), k, cube, point, std::move(detail)});
  };

  for (int k = tree.k_min; k <= tree.k_max; ++k) {
    const auto& cubes = tree.cubes(k);
    const double sc = tree.scale(k);
    const double inner = tree.c_sharp * sc;
    const double outer = tree.C_sharp * sc;

    // Partition: every point in exactly one cube, consistent with point_cube.
    std::vector<int> seen(static_cast<size_t>(n), 0);
    for (size_t a = 0; a < cubes.size(); ++a) {
      const Cube& Q = cubes[a];
      if (Q.points.empty())
        violate("structure", k, static_cast<int>(a), -1, "empty cube");
      bool center_in = false;
      for (int p : Q.points) {
        ++rep.checks;
        ++seen[static_cast<size_t>(p)];
        if (tree.cube_of(k, p) != static_cast<int>(a))
          violate("partition", k, static_cast<int>(a), p, "membership table mismatch");
        if (p == Q.center) center_in = true;
      }
      if (!center_in)
        violate("structure", k, static_cast<int>(a), Q.center, "center outside its cube");
    }
    for (int p = 0; p < n; ++p) {
      if (seen[static_cast<size_t>(p)] != 1)
        violate("partition", k, -1, p,
                "point covered " + std::to_string(seen[static_cast<size_t>(p)]) + " times");
    }

    // Nesting and child bookkeeping against the coarser level.
    if (k > tree.k_min) {
      for (size_t a = 0; a < cubes.size(); ++a) {
        const Cube& Q = cubes[a];
        if (Q.parent < 0) {
          violate("nesting", k, static_cast<int>(a), -1, "missing parent");
          continue;
        }
        for (int p : Q.points) {
          ++rep.checks;
          if (tree.cube_of(k - 1, p) != Q.parent)
            violate("nesting", k, static_cast<int>(a), p, "point escapes parent cube");
        }
      }
      const auto& coarse = tree.cubes(k - 1);
      for (size_t q = 0; q < coarse.size(); ++q) {
        int new_centers = 0;
        for (int child : coarse[q].children)
          if (cubes[static_cast<size_t>(child)].new_center) ++new_centers;
        if (new_centers != static_cast<int>(coarse[q].children.size()) - 1)
          violate("structure", k - 1, static_cast<int>(q), -1,
                  "new-center children != children - 1");
      }
    }

    // Sandwich: B(center, c# delta^k) inside the cube inside B(center, C# delta^k).
    for (size_t a = 0; a < cubes.size(); ++a) {
      const Cube& Q = cubes[a];
      const auto& ds = space.cache().dist_sorted[static_cast<size_t>(Q.center)];
      for (const auto& [d, z] : ds) {
        if (d >= inner * (1.0 - kGeomTol)) break;
        ++rep.checks;
        if (tree.cube_of(k, z) != static_cast<int>(a))
          violate("inner_ball", k, static_cast<int>(a), z,
                  "point at distance " + std::to_string(d) + " < c# delta^k outside cube");
      }
      for (int p : Q.points) {
        ++rep.checks;
        double d = space.dist(Q.center, p);
        if (d >= outer * (1.0 + kGeomTol))
          violate("outer_ball", k, static_cast<int>(a), p,
                  "member at distance " + std::to_string(d) + " >= C# delta^k");
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

TreeBuildResult build_tree(const FiniteHomSpace& space, double a0, const NetOptions& opts) {
  NetOptions cur = opts;
  TreeBuildResult result;
  for (int attempt = 0; attempt < 5; ++attempt) {
    result.attempts = attempt + 1;
    result.nets = build_nets(space, a0, cur);
    result.tree = build_cubes(space, result.nets, a0);
    result.report = verify_cube_axioms(space, result.tree);
    if (result.report.ok) return result;
    cur.delta = result.nets.delta * 0.5;  // retry below the admissible delta
  }
  throw DyadicError("cube axioms still violated after delta halving retries: " +
                    result.report.summary());
}

}  // namespace hmtk
