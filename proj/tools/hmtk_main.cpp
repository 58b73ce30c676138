// hmtk: build and inspect dyadic structures, Haar-type bases and the two
// norms on finite doubling metric-measure spaces.
//
// Exit codes: 0 success, 1 a check or computation failed on valid input,
// 2 bad usage or unreadable/malformed files.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hmtk/diagnostics.hpp"
#include "hmtk/generators.hpp"
#include "hmtk/io.hpp"

namespace {

using namespace hmtk;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SpaceArg {
  std::string path;
  std::string csv_kind = "euclidean";
  double csv_param = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--space", path, "space file (.json, or .csv of id,weight,coords)")
        ->required();
    cmd->add_option("--csv-kind", csv_kind,
                    "metric for csv input: euclidean, snowflake or power");
    cmd->add_option("--csv-param", csv_param, "snowflake epsilon / power exponent");
  }

  FiniteHomSpace load() const {
    if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
      MetricSpec ms;
      ms.kind = csv_kind;
      ms.param = csv_param;
      return load_space_csv(path, ms);
    }
    return load_space(path);
  }
};

int run_generate(const std::string& kind, int n, double spacing, double exponent,
                 const std::string& out) {
  GeneratorSpec spec;
  spec.kind = kind == "power" ? "power_metric" : kind == "weighted" ? "weighted_grid" : kind;
  spec.n = n;
  spec.spacing = spacing;
  spec.exponent = exponent;
  const FiniteHomSpace space = generate(spec);
  save_space(space, out);
  std::cout << "wrote " << out << " (" << space.name() << ", n=" << space.size()
            << ", diameter=" << fmt(space.diameter()) << ")\n";
  return 0;
}

int run_validate(const FiniteHomSpace& space, const std::string& json_out) {
  ValidateOptions vopts;
  vopts.throw_on_violation = false;
  const ValidationReport rep = validate_space(space, vopts);
  const bool ok = rep.symmetric && rep.separated && rep.positive_weights;
  std::cout << "space: " << space.name() << " (n=" << space.size() << ")\n"
            << "symmetric: " << (rep.symmetric ? "yes" : "NO") << "\n"
            << "separated: " << (rep.separated ? "yes" : "NO") << "\n"
            << "positive weights: " << (rep.positive_weights ? "yes" : "NO") << "\n"
            << "a0: " << fmt(rep.a0) << (rep.a0_exact ? " (exact)" : " (sampled)") << "\n";
  if (!rep.note.empty()) std::cout << "note: " << rep.note << "\n";
  if (ok) {
    const DoublingProfile dp = doubling_profile(space);
    std::cout << "c_mu: " << fmt(dp.c_mu) << " over radii [" << fmt(dp.r_lo) << ", "
              << fmt(dp.r_hi) << "]\n"
              << "omega: " << fmt(dp.omega) << "\n";
    if (!json_out.empty()) {
      json j;
      j["space"] = space.name();
      j["n"] = space.size();
      j["a0"] = rep.a0;
      j["a0_exact"] = rep.a0_exact;
      j["symmetric"] = rep.symmetric;
      j["separated"] = rep.separated;
      j["positive_weights"] = rep.positive_weights;
      j["c_mu"] = dp.c_mu;
      j["omega"] = dp.omega;
      write_text_file(json_out, dump_json_17(j));
    }
  }
  return ok ? 0 : 1;
}

int run_cubes(const FiniteHomSpace& space, NetOptions nopts, const std::string& out,
              bool verify) {
  const ValidationReport val = validate_space(space);
  const TreeBuildResult tb = build_tree(space, val.a0, nopts);
  std::cout << "delta: " << fmt(tb.tree.delta) << " (attempts: " << tb.attempts << ")\n"
            << "levels: " << tb.tree.k_min << " .. " << tb.tree.k_max << "\n";
  for (int k = tb.tree.k_min; k <= tb.tree.k_max; ++k)
    std::cout << "  level " << k << ": " << tb.tree.cubes(k).size() << " cubes\n";
  if (verify) std::cout << tb.report.summary() << "\n";
  if (!out.empty()) {
    save_tree(tb.tree, space, out);
    std::cout << "wrote " << out << "\n";
  }
  return tb.report.ok ? 0 : 1;
}

int run_wavelets(const FiniteHomSpace& space, const std::string& tree_path,
                 const std::string& out, bool plain, bool check) {
  const ValidationReport val = validate_space(space);
  DyadicTree tree;
  if (tree_path.empty()) {
    tree = build_tree(space, val.a0).tree;
  } else {
    tree = load_tree(tree_path, space);
  }
  const WaveletBasis basis = build_mra(space, tree);
  std::cout << "basis: " << basis.fathers.size() << " fathers + " << basis.mothers.size()
            << " mothers = " << space.size() << "\n";
  int rc = 0;
  if (check) {
    const DoublingProfile dp = doubling_profile(space);
    std::vector<std::vector<double>> pv;
    for (auto& p : make_probes(space, basis, 0.3, dp.omega)) pv.push_back(std::move(p.values));
    const BasisChecks bc = check_basis(basis, space, pv);
    std::cout << "gram deviation:   " << fmt(bc.gram_deviation) << "\n"
              << "mother moments:   " << fmt(bc.moment_max) << "\n"
              << "parseval (rel):   " << fmt(bc.parseval_rel_max) << "\n"
              << "reconstruction:   " << fmt(bc.recon_rel_max) << "\n";
    if (bc.gram_deviation > 1e-8 || bc.moment_max > 1e-8 || bc.recon_rel_max > 1e-6) {
      std::cout << "basis check FAILED\n";
      rc = 1;
    }
  }
  if (!out.empty()) {
    save_basis(basis, tree, space, out, plain);
    std::cout << "wrote " << out << "\n";
  }
  return rc;
}

int run_norm(const FiniteHomSpace& space, const std::string& basis_path, double theta,
             const std::string& fn, const std::string& fn_file,
             const std::string& report_out) {
  const LoadedBasis lb = basis_path.empty()
                             ? [&] {
                                 const ValidationReport val = validate_space(space);
                                 LoadedBasis b;
                                 b.tree = build_tree(space, val.a0).tree;
                                 b.basis = build_mra(space, b.tree);
                                 return b;
                               }()
                             : load_basis(basis_path, space);
  std::vector<double> f;
  std::string fname;
  if (!fn_file.empty()) {
    f = load_values_csv(fn_file, space.size());
    fname = fn_file;
  } else {
    fname = fn.empty() ? "dist" : fn;
    std::string lookup = fname == "sin(x)" ? "sin1" : fname;
    const DoublingProfile dp = doubling_profile(space);
    for (auto& p : make_probes(space, lb.basis, theta, dp.omega)) {
      if (p.name == lookup) {
        f = std::move(p.values);
        break;
      }
    }
    if (f.empty())
      throw IoError("unknown --fn '" + fname + "'; use --fn-file for custom values");
  }
  const LipResult lip = lip_norm(f, space, theta);
  const CoefficientSet cs = analyze(f, lb.basis, space);
  const CarlesonResult car = carleson_norm(cs, lb.basis, lb.tree, theta);
  std::cout << "fn: " << fname << "  theta: " << fmt(theta) << "\n"
            << "lip:      " << fmt(lip.value) << "  (center " << lip.witness.center
            << ", radius " << fmt(lip.witness.radius) << ", "
            << (lip.witness.branch == LipBranch::oscillation ? "oscillation" : "sup")
            << ")\n"
            << "carleson: " << fmt(car.value) << "  (level " << car.witness_k << ", cube "
            << car.witness_cube << ")\n";
  if (lip.degenerate) {
    std::cout << "ratio:    undefined (f vanishes)\n";
  } else {
    std::cout << "ratio:    " << fmt(car.value / lip.value) << "\n";
  }
  if (!report_out.empty()) {
    json j;
    j["space"] = space.name();
    j["theta"] = theta;
    j["fn"] = fname;
    j["lip"] = lip.value;
    j["carleson"] = car.value;
    j["ratio"] = lip.degenerate ? 0.0 : car.value / lip.value;
    j["degenerate"] = lip.degenerate;
    write_text_file(report_out, dump_json_17(j));
  }
  return 0;
}

int run_equiv(const FiniteHomSpace& space, double theta, const std::string& out) {
  EquivOptions opts;
  opts.theta = theta;
  const EquivReport rep = equiv_experiment(space, opts);
  std::cout << "envelope_C: " << fmt(rep.envelope_C) << " over " << rep.probes.size()
            << " probes (theta " << fmt(theta) << ")\n";
  if (!out.empty()) {
    write_text_file(out, dump_json_17(equiv_to_json(rep)));
    std::cout << "wrote " << out << "\n";
  }
  return rep.envelope_finite && rep.axioms.ok ? 0 : 1;
}

int run_geometry(const FiniteHomSpace& space, double theta, const std::string& out) {
  const ValidationReport val = validate_space(space);
  const TreeBuildResult tb = build_tree(space, val.a0);
  const WaveletBasis basis = build_mra(space, tb.tree);
  const GeometryReport g = classify_geometry(space, tb.tree, basis, theta);
  std::cout << "lower:   " << (g.lower.pass ? "pass" : "FAIL") << "  (min unit ball mass "
            << fmt(g.lower.m_min) << ")\n"
            << "upper:   " << (g.upper.pass ? "pass" : "FAIL") << "  (max unit ball mass "
            << fmt(g.upper.m_max) << ", max cube mass " << fmt(g.upper.max_cube_mass)
            << ")\n"
            << "regular: " << (g.ahlfors.pass ? "pass" : "FAIL") << "  (omega_hat "
            << fmt(g.ahlfors.omega_hat) << ", reg const " << fmt(g.ahlfors.reg_const)
            << ", cube spread " << fmt(g.ahlfors.cube_spread) << ")\n";
  if (!out.empty()) {
    json j;
    j["space"] = space.name();
    j["theta"] = theta;
    j["geometry"] = geometry_to_json(g);
    json v;
    v["lower"] = g.lower.pass;
    v["upper"] = g.upper.pass;
    v["regular"] = g.ahlfors.pass;
    v["omega_hat"] = g.ahlfors.omega_hat;
    j["verdicts"] = std::move(v);
    write_text_file(out, dump_json_17(j));
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_kernel(const FiniteHomSpace& space, const KernelOptions& kopts,
               const std::string& out) {
  const KernelReport rep = kernel_experiment(space, kopts);
  std::cout << "psi test norm: " << fmt(rep.psi_norm.value) << "\n"
            << "multiplier_C:  " << fmt(rep.multiplier_C) << "\n"
            << "pairing_C:     " << fmt(rep.pairing_C) << "\n";
  if (!out.empty()) {
    write_text_file(out, dump_json_17(kernel_to_json(rep)));
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int run_report(const std::vector<std::string>& inputs, const std::string& out) {
  json merged;
  merged["format"] = "hmtk-report-1";
  json reports = json::array();
  for (const std::string& path : inputs) {
    try {
      reports.push_back(json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw IoError("failed to parse " + path + ": " + e.what());
    }
  }
  merged["reports"] = std::move(reports);
  write_text_file(out, dump_json_17(merged));
  std::cout << "wrote " << out << " (" << inputs.size() << " reports)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harmonic analysis toolkit for finite doubling metric-measure spaces"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "accepted for compatibility; evaluation is single-threaded and "
                 "deterministic, so results do not depend on this value");

  // generate
  auto* gen = app.add_subcommand("generate", "write a benchmark space to JSON");
  std::string g_kind = "grid1d", g_out = "space.json";
  int g_n = 64;
  double g_spacing = 0.0625, g_exponent = 0.0;
  gen->add_option("--kind", g_kind, "grid1d, grid2d, snowflake, power or weighted");
  gen->add_option("--n", g_n, "point count (side length for grid2d)");
  gen->add_option("--spacing", g_spacing, "grid spacing, at most 1/16");
  gen->add_option("--exponent", g_exponent,
                  "snowflake epsilon / power p / weighted-grid exponent a");
  gen->add_option("--out", g_out, "output path")->required();

  // validate
  auto* val = app.add_subcommand("validate", "check the space axioms, estimate a0");
  SpaceArg v_space;
  v_space.attach(val);
  std::string v_json;
  val->add_option("--json", v_json, "also write the report as JSON");

  // cubes
  auto* cub = app.add_subcommand("cubes", "build and verify the dyadic cube tree");
  SpaceArg c_space;
  c_space.attach(cub);
  NetOptions c_nopts;
  std::string c_out;
  bool c_verify = false;
  cub->add_option("--delta", c_nopts.delta, "base scale, halved until admissible");
  cub->add_option("--c0", c_nopts.c0, "separation constant");
  cub->add_option("--C0", c_nopts.C0, "covering constant; <= 0 selects 1.5 * a0");
  cub->add_option("--out", c_out, "write the tree to this path");
  cub->add_flag("--verify", c_verify, "print the axiom verification summary");

  // wavelets
  auto* wav = app.add_subcommand("wavelets", "build the Haar-type basis");
  SpaceArg w_space;
  w_space.attach(wav);
  std::string w_tree, w_out;
  bool w_plain = false, w_check = false;
  wav->add_option("--tree", w_tree, "tree file; built fresh when omitted");
  wav->add_option("--out", w_out, "write the basis (tree embedded) to this path");
  wav->add_flag("--plain", w_plain, "store values as plain JSON instead of base64");
  wav->add_flag("--check", w_check, "run orthonormality and reconstruction checks");

  // norm
  auto* nrm = app.add_subcommand("norm", "evaluate the lip and Carleson norms");
  SpaceArg n_space;
  n_space.attach(nrm);
  std::string n_basis, n_fn, n_fn_file, n_report;
  double n_theta = 0.3;
  nrm->add_option("--basis", n_basis, "basis file; built fresh when omitted");
  nrm->add_option("--theta", n_theta, "smoothness parameter in (0, 1)");
  nrm->add_option("--fn", n_fn,
                  "built-in function: const_one, dist, dist_pow, sin1/sin3/sin9 "
                  "(alias sin(x)), haar_lo/mid/hi, bump_half, bump_two, random_smooth");
  nrm->add_option("--fn-file", n_fn_file, "csv of point values instead of --fn");
  nrm->add_option("--report", n_report, "write the result as JSON");

  // equiv
  auto* eqv = app.add_subcommand("equiv", "run the norm-equivalence experiment");
  SpaceArg e_space;
  e_space.attach(eqv);
  double e_theta = 0.3;
  std::string e_out;
  eqv->add_option("--theta", e_theta, "smoothness parameter in (0, 1)");
  eqv->add_option("--out", e_out, "write the full report as JSON");

  // geometry
  auto* geo = app.add_subcommand("geometry", "run the three geometry classifiers");
  SpaceArg geo_space;
  geo_space.attach(geo);
  double geo_theta = 0.3;
  std::string geo_out;
  geo->add_option("--theta", geo_theta, "smoothness parameter in (0, 1)");
  geo->add_option("--out", geo_out, "write the report as JSON");

  // kernel
  auto* ker = app.add_subcommand("kernel", "empirical multiplier and pairing constants");
  SpaceArg k_space;
  k_space.attach(ker);
  KernelOptions kopts;
  std::string k_out;
  ker->add_option("--theta", kopts.theta, "smoothness parameter");
  ker->add_option("--beta", kopts.beta, "test-function regularity exponent");
  ker->add_option("--gamma", kopts.gamma, "test-function decay exponent");
  ker->add_option("--r", kopts.r, "bump scale");
  ker->add_option("--x0", kopts.x0, "bump center point id");
  ker->add_option("--out", k_out, "write the report as JSON");

  // report
  auto* mrg = app.add_subcommand("report", "merge report JSON files");
  std::vector<std::string> m_inputs;
  std::string m_out;
  mrg->add_option("--inputs", m_inputs, "report files to merge")->required();
  mrg->add_option("--out", m_out, "merged output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*gen) return run_generate(g_kind, g_n, g_spacing, g_exponent, g_out);
    if (*val) return run_validate(v_space.load(), v_json);
    if (*cub) return run_cubes(c_space.load(), c_nopts, c_out, c_verify);
    if (*wav) return run_wavelets(w_space.load(), w_tree, w_out, w_plain, w_check);
    if (*nrm)
      return run_norm(n_space.load(), n_basis, n_theta, n_fn, n_fn_file, n_report);
    if (*eqv) return run_equiv(e_space.load(), e_theta, e_out);
    if (*geo) return run_geometry(geo_space.load(), geo_theta, geo_out);
    if (*ker) return run_kernel(k_space.load(), kopts, k_out);
    if (*mrg) return run_report(m_inputs, m_out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
