#include "hmtk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace hmtk {

namespace {

// Radius strictly between 1 and the next realized distance, so the open ball
// at this radius is exactly the closed unit ball.
double unit_ball_radius(const FiniteHomSpace& space) {
  double gap = space.min_positive_dist();
  for (double d : space.distinct_dists()) {
    if (d > 1.0) {
      gap = std::min(gap, d - 1.0);
      break;
    }
  }
  return 1.0 + 0.5 * gap;
}

std::vector<double> dense_values(const BasisFunction& b, int n) {
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (size_t t = 0; t < b.support.size(); ++t)
    out[static_cast<size_t>(b.support[t])] = b.values[t];
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit f;
  const size_t m = xs.size();
  if (m < 2) return f;
  double sx = 0.0, sy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.ok = true;
  return f;
}

}  // namespace

LowerReport geometry_lower(const FiniteHomSpace& space, double theta,
                           const GeometryConfig& cfg) {
  LowerReport rep;
  rep.r_plus = unit_ball_radius(space);
  for (int x = 0; x < space.size(); ++x) {
    const double m = ball_measure(space, x, rep.r_plus);
    if (rep.argmin < 0 || m < rep.m_min) {
      rep.m_min = m;
      rep.argmin = x;
    }
    if (rep.argmax < 0 || m > rep.m_max) {
      rep.m_max = m;
      rep.argmax = x;
    }
  }
  const std::vector<double> ones(static_cast<size_t>(space.size()), 1.0);
  rep.lip_one = lip_norm(ones, space, theta).value;
  rep.lip_one_pred = 1.0 / std::pow(rep.m_min, theta);
  rep.lip_consistent =
      std::abs(rep.lip_one - rep.lip_one_pred) <= 1e-9 * rep.lip_one_pred;
  rep.pass = rep.m_min >= cfg.lower_min_mass;
  return rep;
}

UpperReport geometry_upper(const FiniteHomSpace& space, const DyadicTree& tree,
                           const WaveletBasis& basis, double theta,
                           const GeometryConfig& cfg) {
  UpperReport rep;
  const double r_plus = unit_ball_radius(space);
  for (int x = 0; x < space.size(); ++x) {
    const double m = ball_measure(space, x, r_plus);
    if (rep.argmax < 0 || m > rep.m_max) {
      rep.m_max = m;
      rep.argmax = x;
    }
  }
  for (int k = 0; k <= tree.k_max; ++k) {
    const auto& cubes = tree.cubes(k);
    for (size_t q = 0; q < cubes.size(); ++q) {
      if (rep.max_cube_index < 0 || cubes[q].mass > rep.max_cube_mass) {
        rep.max_cube_mass = cubes[q].mass;
        rep.max_cube_level = k;
        rep.max_cube_index = static_cast<int>(q);
      }
    }
  }
  if (cfg.father_norms) {
    bool first = true;
    for (const BasisFunction& phi : basis.fathers) {
      const double mass = tree.cubes(0)[static_cast<size_t>(phi.cube)].mass;
      const double prod = lip_norm(dense_values(phi, basis.n), space, theta).value *
                          std::pow(mass, 0.5 + theta);
      if (first || prod < rep.father_product_min) rep.father_product_min = prod;
      if (first || prod > rep.father_product_max) rep.father_product_max = prod;
      first = false;
    }
  }
  rep.pass_measure = rep.m_max <= cfg.upper_max_mass;
  rep.pass_cubes = rep.max_cube_mass <= cfg.upper_max_cube_mass;
  rep.pass = rep.pass_measure && rep.pass_cubes;
  return rep;
}

AhlforsReport ahlfors_test(const FiniteHomSpace& space, const DyadicTree& tree,
                           const GeometryConfig& cfg) {
  AhlforsReport rep;
  const int n = space.size();
  const int J = std::max(cfg.fit_radii, 4);
  const std::string& kind = space.metric().kind;
  rep.coords_filter =
      space.has_coords() &&
      (kind == "euclidean" || kind == "snowflake" || kind == "power");

  std::vector<double> radii;          // metric radii, ascending
  std::vector<double> clip;           // euclidean clip radius per grid entry
  std::vector<double> dtb;            // distance to the bounding box boundary
  if (rep.coords_filter) {
    const auto& coords = space.coords();
    const size_t dims = coords.front().size();
    std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
    for (const auto& c : coords) {
      for (size_t d = 0; d < dims; ++d) {
        lo[d] = std::min(lo[d], c[d]);
        hi[d] = std::max(hi[d], c[d]);
      }
    }
    dtb.resize(static_cast<size_t>(n));
    double R_hi = 0.0;
    for (int x = 0; x < n; ++x) {
      double b = std::numeric_limits<double>::infinity();
      for (size_t d = 0; d < dims; ++d)
        b = std::min(b, std::min(coords[static_cast<size_t>(x)][d] - lo[d],
                                 hi[d] - coords[static_cast<size_t>(x)][d]));
      dtb[static_cast<size_t>(x)] = b;
      R_hi = std::max(R_hi, b);
    }
    const double h_eu = space.metric().unwarp(space.min_positive_dist());
    double r_lo_eu = 16.0 * h_eu;
    if (r_lo_eu >= R_hi) r_lo_eu = R_hi / 4.0;
    if (r_lo_eu > 0.0 && R_hi > r_lo_eu) {
      for (int j = 0; j < J; ++j) {
        const double u = r_lo_eu * std::pow(R_hi / r_lo_eu,
                                            static_cast<double>(j) / (J - 1));
        radii.push_back(space.metric().warp(u));
        clip.push_back(u);
      }
    }
  } else {
    // No usable coordinates: fit over a central metric window without
    // boundary clipping. Cruder, but still separates strong irregularity.
    const double r_lo = 4.0 * space.min_positive_dist();
    const double r_hi = space.diameter() / 2.0;
    if (r_lo > 0.0 && r_hi > r_lo) {
      for (int j = 0; j < J; ++j)
        radii.push_back(r_lo * std::pow(r_hi / r_lo, static_cast<double>(j) / (J - 1)));
      clip.assign(radii.size(), std::numeric_limits<double>::infinity());
    }
  }

  std::vector<double> X, Y;                 // one aggregated point per radius
  std::vector<std::pair<size_t, double>> samples;  // (radius index, log mass)
  for (size_t j = 0; j < radii.size(); ++j) {
    double sum_log = 0.0;
    long long count = 0;
    for (int x = 0; x < n; ++x) {
      if (rep.coords_filter &&
          dtb[static_cast<size_t>(x)] < clip[j] * (1.0 - 1e-12))
        continue;
      const double m = ball_measure(space, x, radii[j]);
      if (m <= 0.0) continue;
      const double lm = std::log(m);
      sum_log += lm;
      ++count;
      samples.push_back({X.size(), lm});
    }
    if (count > 0) {
      X.push_back(std::log(radii[j]));
      Y.push_back(sum_log / static_cast<double>(count));
    }
  }
  rep.samples = static_cast<long long>(samples.size());
  rep.radii_used = static_cast<int>(X.size());
  if (rep.radii_used >= 2) {
    rep.r_lo = std::exp(X.front());
    rep.r_hi = std::exp(X.back());
  }

  const LineFit fit = fit_line(X, Y);
  if (fit.ok) {
    rep.omega_hat = fit.slope;
    rep.intercept = fit.intercept;
    double e_min = std::numeric_limits<double>::infinity();
    double e_max = -std::numeric_limits<double>::infinity();
    for (const auto& [j, lm] : samples) {
      const double e = lm - (fit.intercept + fit.slope * X[j]);
      e_min = std::min(e_min, e);
      e_max = std::max(e_max, e);
    }
    rep.reg_const = std::exp(e_max - e_min);
    rep.pass_fit = rep.reg_const <= cfg.ahlfors_reg_max;
  } else {
    // Too few scales to test anything; vacuously regular.
    rep.pass_fit = true;
  }

  // Cube-mass spread across levels whose scale clears the atom spacing and
  // fits inside the space.
  double s_min = 0.0, s_max = 0.0;
  bool first = true;
  rep.cube_level_lo = 0;
  rep.cube_level_hi = -1;
  for (int k = tree.k_min; k <= tree.k_max; ++k) {
    const double scale = tree.scale(k);
    if (scale > space.diameter() * (1.0 + kGeomTol)) continue;
    if (scale < 2.0 * space.min_positive_dist() * (1.0 - kGeomTol)) continue;
    if (rep.cube_level_hi < rep.cube_level_lo) rep.cube_level_lo = k;
    rep.cube_level_hi = k;
    const double denom = std::pow(scale, rep.omega_hat);
    for (const Cube& Q : tree.cubes(k)) {
      const double v = Q.mass / denom;
      if (first || v < s_min) s_min = v;
      if (first || v > s_max) s_max = v;
      first = false;
    }
  }
  if (!first && s_min > 0.0) rep.cube_spread = s_max / s_min;
  rep.pass_cubes = rep.cube_spread <= cfg.cube_spread_max;
  rep.pass = rep.pass_fit && rep.pass_cubes;
  return rep;
}

GeometryReport classify_geometry(const FiniteHomSpace& space, const DyadicTree& tree,
                                 const WaveletBasis& basis, double theta,
                                 const GeometryConfig& cfg) {
  GeometryReport g;
  g.lower = geometry_lower(space, theta, cfg);
  g.upper = geometry_upper(space, tree, basis, theta, cfg);
  g.ahlfors = ahlfors_test(space, tree, cfg);
  return g;
}

json geometry_to_json(const GeometryReport& g) {
  json j;
  json lower;
  lower["r_plus"] = g.lower.r_plus;
  lower["min_ball_mass"] = g.lower.m_min;
  lower["max_ball_mass"] = g.lower.m_max;
  lower["argmin"] = g.lower.argmin;
  lower["lip_one"] = g.lower.lip_one;
  lower["lip_one_pred"] = g.lower.lip_one_pred;
  lower["lip_consistent"] = g.lower.lip_consistent;
  lower["pass"] = g.lower.pass;
  j["lower"] = std::move(lower);
  json upper;
  upper["max_ball_mass"] = g.upper.m_max;
  upper["argmax"] = g.upper.argmax;
  upper["max_cube_mass"] = g.upper.max_cube_mass;
  upper["max_cube_level"] = g.upper.max_cube_level;
  upper["father_product_min"] = g.upper.father_product_min;
  upper["father_product_max"] = g.upper.father_product_max;
  upper["pass_measure"] = g.upper.pass_measure;
  upper["pass_cubes"] = g.upper.pass_cubes;
  upper["pass"] = g.upper.pass;
  j["upper"] = std::move(upper);
  json ah;
  ah["omega_hat"] = g.ahlfors.omega_hat;
  ah["intercept"] = g.ahlfors.intercept;
  ah["reg_const"] = g.ahlfors.reg_const;
  ah["r_lo"] = g.ahlfors.r_lo;
  ah["r_hi"] = g.ahlfors.r_hi;
  ah["samples"] = g.ahlfors.samples;
  ah["radii_used"] = g.ahlfors.radii_used;
  ah["cube_spread"] = g.ahlfors.cube_spread;
  ah["cube_level_lo"] = g.ahlfors.cube_level_lo;
  ah["cube_level_hi"] = g.ahlfors.cube_level_hi;
  ah["coords_filter"] = g.ahlfors.coords_filter;
  ah["pass_fit"] = g.ahlfors.pass_fit;
  ah["pass_cubes"] = g.ahlfors.pass_cubes;
  ah["pass"] = g.ahlfors.pass;
  j["ahlfors"] = std::move(ah);
  return j;
}

std::vector<Probe> make_probes(const FiniteHomSpace& space, const WaveletBasis& basis,
                               double theta, double omega) {
  const int n = space.size();
  std::vector<Probe> probes;
  std::vector<double> u(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) u[static_cast<size_t>(x)] = x == 0 ? 0.0 : space.dist(0, x);

  probes.push_back({"const_one", std::vector<double>(static_cast<size_t>(n), 1.0), false});
  probes.push_back({"dist", u, false});

  Probe dp{"dist_pow", std::vector<double>(static_cast<size_t>(n)), false};
  const double expo = theta * omega;
  for (int x = 0; x < n; ++x)
    dp.values[static_cast<size_t>(x)] = std::pow(u[static_cast<size_t>(x)], expo);
  probes.push_back(std::move(dp));

  // Fixed wavelength, not tied to the diameter, so refining a family by
  // extending it leaves the probe unchanged on shared points.
  for (int m : {1, 3, 9}) {
    Probe s{"sin" + std::to_string(m), std::vector<double>(static_cast<size_t>(n)), false};
    const double w = 2.0 * std::numbers::pi_v<double> * m / 4.0;
    for (int x = 0; x < n; ++x)
      s.values[static_cast<size_t>(x)] = std::sin(w * u[static_cast<size_t>(x)]);
    probes.push_back(std::move(s));
  }

  if (!basis.mothers.empty()) {
    // Single wavelets from the finest level that carries mothers; that level
    // has the same local structure at every resolution of a family.
    const int finest = basis.mothers.back().level;
    size_t lo = basis.mothers.size();
    while (lo > 0 && basis.mothers[lo - 1].level == finest) --lo;
    const size_t cnt = basis.mothers.size() - lo;
    const size_t picks[3] = {lo, lo + cnt / 2, lo + cnt - 1};
    const char* names[3] = {"haar_lo", "haar_mid", "haar_hi"};
    size_t prev = basis.mothers.size();
    for (int t = 0; t < 3; ++t) {
      if (picks[t] == prev) continue;
      prev = picks[t];
      probes.push_back({names[t], dense_values(basis.mothers[picks[t]], n), false});
    }
  }

  for (double r : {0.5, 2.0}) {
    Probe b{r < 1.0 ? "bump_half" : "bump_two",
            std::vector<double>(static_cast<size_t>(n)), false};
    for (int x = 0; x < n; ++x)
      b.values[static_cast<size_t>(x)] = kernel_P(space, 0, x, r, 1.0);
    probes.push_back(std::move(b));
  }

  if (!basis.mothers.empty()) {
    CoefficientSet cs;
    cs.father.assign(basis.fathers.size(), 0.0);
    cs.mother.resize(basis.mothers.size());
    std::mt19937 eng(12345);
    for (double& c : cs.mother)
      c = 2.0 * (static_cast<double>(eng()) * (1.0 / 4294967296.0)) - 1.0;
    probes.push_back({"random_smooth", synthesize(cs, basis, space), false});
  }
  return probes;
}

EquivReport equiv_experiment(const FiniteHomSpace& space, const EquivOptions& opts) {
  EquivReport rep;
  rep.space_name = space.name();
  rep.n = space.size();
  rep.theta = opts.theta;
  rep.validation = validate_space(space);

  TreeBuildResult tb = build_tree(space, rep.validation.a0, opts.nets);
  rep.axioms = tb.report;
  rep.tree_attempts = tb.attempts;
  const DyadicTree& tree = tb.tree;
  rep.delta = tree.delta;
  rep.c0 = tree.c0;
  rep.C0 = tree.C0;
  rep.a0 = tree.a0;
  rep.k_min = tree.k_min;
  rep.k_max = tree.k_max;

  const DoublingProfile dp = doubling_profile(space);
  rep.c_mu = dp.c_mu;
  rep.omega = dp.omega;

  const WaveletBasis basis = build_mra(space, tree);
  rep.geometry = classify_geometry(space, tree, basis, opts.theta, opts.geom);

  std::vector<Probe> probes = make_probes(space, basis, opts.theta, dp.omega);
  if (opts.gate_const_on_lower && !rep.geometry.lower.pass) {
    for (Probe& p : probes)
      if (p.name == "const_one") p.skip_envelope = true;
  }

  std::vector<std::vector<double>> probe_values;
  probe_values.reserve(probes.size());
  for (const Probe& p : probes) probe_values.push_back(p.values);
  rep.basis_checks = check_basis(basis, space, probe_values);

  double envelope = 0.0;
  for (const Probe& p : probes) {
    ProbeResult pr;
    pr.name = p.name;
    pr.lip = lip_norm(p.values, space, opts.theta);
    const CoefficientSet cs = analyze(p.values, basis, space);
    pr.carleson = carleson_norm(cs, basis, tree, opts.theta);
    pr.degenerate = pr.lip.degenerate || pr.carleson.value <= 0.0;
    pr.ratio = pr.degenerate ? 0.0 : pr.carleson.value / pr.lip.value;
    pr.in_envelope = !pr.degenerate && !p.skip_envelope;
    if (pr.in_envelope)
      envelope = std::max(envelope, std::max(pr.ratio, 1.0 / pr.ratio));
    if (opts.partial_sums) {
      for (int cap = tree.k_min; cap <= tree.k_max; ++cap) {
        const std::vector<double> ps = partial_sum_coeffs(cs, basis, space, cap);
        pr.l2_err.push_back(l2_dist(p.values, ps, space));
        pr.partial_lip.push_back(lip_norm(ps, space, opts.theta).value);
      }
    }
    rep.probes.push_back(std::move(pr));
  }
  rep.envelope_C = envelope;
  rep.envelope_finite = envelope > 0.0 && std::isfinite(envelope);
  return rep;
}

json equiv_to_json(const EquivReport& r) {
  json j;
  j["space"] = r.space_name;
  j["n"] = r.n;
  json params;
  params["theta"] = r.theta;
  params["delta"] = r.delta;
  params["c0"] = r.c0;
  params["C0"] = r.C0;
  params["a0"] = r.a0;
  params["c_mu"] = r.c_mu;
  params["omega"] = r.omega;
  params["k_min"] = r.k_min;
  params["k_max"] = r.k_max;
  params["tree_attempts"] = r.tree_attempts;
  j["params"] = std::move(params);
  json ax;
  ax["a0"] = r.validation.a0;
  ax["a0_exact"] = r.validation.a0_exact;
  ax["symmetric"] = r.validation.symmetric;
  ax["separated"] = r.validation.separated;
  ax["positive_weights"] = r.validation.positive_weights;
  ax["cube_ok"] = r.axioms.ok;
  ax["cube_checks"] = r.axioms.checks;
  ax["cube_violations"] = static_cast<long long>(r.axioms.violations.size());
  j["axioms"] = std::move(ax);
  json bc;
  bc["gram_deviation"] = r.basis_checks.gram_deviation;
  bc["moment_max"] = r.basis_checks.moment_max;
  bc["parseval_rel_max"] = r.basis_checks.parseval_rel_max;
  bc["recon_rel_max"] = r.basis_checks.recon_rel_max;
  bc["basis_count"] = r.basis_checks.basis_count;
  j["basis_checks"] = std::move(bc);
  json probes = json::array();
  for (const ProbeResult& p : r.probes) {
    json jp;
    jp["name"] = p.name;
    jp["lip"] = p.lip.value;
    jp["carleson"] = p.carleson.value;
    jp["ratio"] = p.ratio;
    jp["degenerate"] = p.degenerate;
    jp["in_envelope"] = p.in_envelope;
    json w;
    json wl;
    wl["center"] = p.lip.witness.center;
    wl["radius"] = p.lip.witness.radius;
    wl["branch"] =
        p.lip.witness.branch == LipBranch::oscillation ? "oscillation" : "sup";
    w["lip"] = std::move(wl);
    json wc;
    wc["level"] = p.carleson.witness_k;
    wc["cube"] = p.carleson.witness_cube;
    w["carleson"] = std::move(wc);
    jp["witnesses"] = std::move(w);
    if (!p.l2_err.empty()) {
      json partial;
      partial["l2_err"] = p.l2_err;
      partial["lip"] = p.partial_lip;
      jp["partial"] = std::move(partial);
    }
    probes.push_back(std::move(jp));
  }
  j["probes"] = std::move(probes);
  j["envelope_C"] = r.envelope_C;
  j["geometry"] = geometry_to_json(r.geometry);
  json v;
  v["lower"] = r.geometry.lower.pass;
  v["upper"] = r.geometry.upper.pass;
  v["regular"] = r.geometry.ahlfors.pass;
  v["omega_hat"] = r.geometry.ahlfors.omega_hat;
  v["envelope_finite"] = r.envelope_finite;
  j["verdicts"] = std::move(v);
  return j;
}

KernelReport kernel_experiment(const FiniteHomSpace& space, const KernelOptions& opts) {
  KernelReport rep;
  rep.theta = opts.theta;
  rep.beta = opts.beta;
  rep.gamma = opts.gamma;
  rep.r = opts.r;
  const ValidationReport val = validate_space(space);
  rep.a0 = val.a0;
  rep.omega = doubling_profile(space).omega;

  const int n = space.size();
  std::vector<double> psi(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x)
    psi[static_cast<size_t>(x)] = kernel_P(space, opts.x0, x, opts.r, opts.gamma);
  rep.psi_norm = test_function_norm(psi, space, opts.x0, opts.r, opts.beta,
                                    opts.gamma, rep.a0);

  std::vector<std::pair<std::string, std::vector<double>>> fns;
  std::vector<double> u(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x)
    u[static_cast<size_t>(x)] = x == opts.x0 ? 0.0 : space.dist(opts.x0, x);
  fns.push_back({"dist", u});
  for (int m : {1, 3}) {
    std::vector<double> s(static_cast<size_t>(n));
    const double w = 2.0 * std::numbers::pi_v<double> * m / 4.0;
    for (int x = 0; x < n; ++x)
      s[static_cast<size_t>(x)] = std::sin(w * u[static_cast<size_t>(x)]);
    fns.push_back({"sin" + std::to_string(m), std::move(s)});
  }

  for (const auto& [name, f] : fns) {
    KernelProbeRow row;
    row.name = name;
    const BoundRatio mult =
        check_multiplier_bound(psi, f, space, opts.x0, opts.r, opts.theta,
                               rep.omega, opts.beta, opts.gamma, rep.a0);
    const BoundRatio pair =
        check_pairing_bound(psi, f, space, opts.x0, opts.r, opts.theta,
                            rep.omega, opts.beta, opts.gamma, rep.a0);
    row.multiplier = mult.ratio;
    row.pairing = pair.ratio;
    row.degenerate = mult.degenerate || pair.degenerate;
    if (!row.degenerate) {
      rep.multiplier_C = std::max(rep.multiplier_C, row.multiplier);
      rep.pairing_C = std::max(rep.pairing_C, row.pairing);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

json kernel_to_json(const KernelReport& r) {
  json j;
  json params;
  params["theta"] = r.theta;
  params["beta"] = r.beta;
  params["gamma"] = r.gamma;
  params["r"] = r.r;
  params["a0"] = r.a0;
  params["omega"] = r.omega;
  j["params"] = std::move(params);
  json psi;
  psi["size_part"] = r.psi_norm.size_part;
  psi["reg_part"] = r.psi_norm.reg_part;
  psi["value"] = r.psi_norm.value;
  j["psi_norm"] = std::move(psi);
  json rows = json::array();
  for (const KernelProbeRow& row : r.rows) {
    json jr;
    jr["name"] = row.name;
    jr["multiplier"] = row.multiplier;
    jr["pairing"] = row.pairing;
    jr["degenerate"] = row.degenerate;
    rows.push_back(std::move(jr));
  }
  j["probes"] = std::move(rows);
  j["multiplier_C"] = r.multiplier_C;
  j["pairing_C"] = r.pairing_C;
  return j;
}

}  // namespace hmtk
