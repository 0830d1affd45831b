#include "codazzi/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "codazzi/calculus.hpp"
#include "codazzi/clifford.hpp"
#include "codazzi/dirac.hpp"
#include "codazzi/errors.hpp"

namespace codazzi {

namespace {

std::vector<double> parse_doubles(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size())
      throw config_error(key + ": expected a number, got '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw config_error(key + ": empty value");
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  const auto v = parse_doubles(s, key);
  if (v.size() != 1) throw config_error(key + ": expected a single number");
  return v[0];
}

int parse_int(const std::string& s, const std::string& key) {
  const double v = parse_double(s, key);
  if (v != std::floor(v)) throw config_error(key + ": expected an integer");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "1" || s == "true") return true;
  if (s == "0" || s == "false") return false;
  throw config_error(key + ": expected true/false");
}

Theorem parse_theorem(const std::string& s) {
  if (s == "classical") return Theorem::classical;
  if (s == "deformed") return Theorem::deformed;
  if (s == "traceless") return Theorem::traceless;
  if (s == "constant_invariants") return Theorem::constant_invariants;
  if (s == "surface_traceless") return Theorem::surface_traceless;
  if (s == "minimal_surface") return Theorem::minimal_surface;
  if (s == "family") return Theorem::family;
  throw config_error("run.theorem: unknown theorem '" + s + "'");
}

BetaKind parse_beta_kind(const std::string& s) {
  if (s == "constant") return BetaKind::constant;
  if (s == "diagonal_profile") return BetaKind::diagonal_profile;
  if (s == "hessian") return BetaKind::hessian;
  if (s == "samples") return BetaKind::samples;
  throw config_error("beta.kind: unknown kind '" + s + "'");
}

Eigen::MatrixXd parse_matrix(const std::string& s, int dim, const std::string& key) {
  const auto v = parse_doubles(s, key);
  if (static_cast<int>(v.size()) != dim * dim)
    throw config_error(key + ": expected " + std::to_string(dim * dim) + " entries");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = v[i * dim + j];
  return m;
}

bool is_constant_field(const ScalarField& f, double tol = 1e-12) {
  return f.maxCoeff() - f.minCoeff() <= tol * std::max(1.0, f.abs().maxCoeff());
}

std::string format_grid(const std::vector<int>& grid) {
  std::string out;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(grid[i]);
  }
  return out;
}

}  // namespace

TorusSpec ScenarioConfig::torus_spec() const {
  TorusSpec spec;
  spec.dim = dim;
  spec.lattice = lattice;
  spec.spin_shift = spin;
  spec.grid = grid;
  spec.validate();
  return spec;
}

int ScenarioConfig::beta_bandwidth() const {
  int bw = 0;
  if (beta_kind == BetaKind::diagonal_profile) bw = std::max(bw, b1.max_frequency());
  if (beta_kind == BetaKind::hessian) bw = std::max(bw, f.max_frequency());
  return bw;
}

ScenarioConfig parse_scenario(const std::string& text) {
  ScenarioConfig cfg;
  cfg.canonical_text = text;
  const auto kvs = parse_key_values(text);

  std::set<std::string> seen;
  bool manifold_seen = false;

  for (const auto& [key, value] : kvs) {
    if (!seen.insert(key).second) throw config_error("duplicate key: " + key);
    if (key == "scenario.name") {
      cfg.name = value;
    } else if (key == "manifold.kind") {
      manifold_seen = true;
      if (value == "torus") cfg.manifold = ManifoldKind::torus;
      else if (value == "sphere") cfg.manifold = ManifoldKind::sphere;
      else throw config_error("manifold.kind: expected torus or sphere");
    } else if (key == "manifold.dim") {
      cfg.dim = parse_int(value, key);
    } else if (key == "manifold.lattice" || key == "manifold.spin" || key == "manifold.grid" ||
               key == "manifold.radius" || key == "beta.kind" || key == "beta.constant" ||
               key == "beta.b1" || key == "beta.rest" || key == "beta.c0" ||
               key == "beta.f" || key == "beta.samples_file" || key == "beta.scale" ||
               key == "run.theorem" || key == "run.c" || key == "run.c_min" ||
               key == "run.c_max" || key == "run.c_steps" || key == "run.eigen_count" ||
               key == "run.limiting" || key == "run.kappa" || key == "run.kernel_tol" ||
               key == "tolerance.codazzi" || key == "tolerance.margin" ||
               key == "tolerance.nondegeneracy") {
      // handled in the typed pass below
    } else {
      throw config_error("unknown key: " + key);
    }
  }
  if (!manifold_seen) throw config_error("missing manifold.kind");

  auto find = [&](const std::string& key) -> const std::string* {
    for (const auto& [k, v] : kvs)
      if (k == key) return &v;
    return nullptr;
  };

  if (const auto* v = find("manifold.dim")) cfg.dim = parse_int(*v, "manifold.dim");
  if (cfg.dim < 1) throw config_error("manifold.dim must be >= 1");

  if (cfg.manifold == ManifoldKind::torus) {
    const auto* lat = find("manifold.lattice");
    if (!lat) throw config_error("missing manifold.lattice");
    cfg.lattice = parse_matrix(*lat, cfg.dim, "manifold.lattice");
    const auto* spin = find("manifold.spin");
    if (!spin) throw config_error("missing manifold.spin");
    const auto sv = parse_doubles(*spin, "manifold.spin");
    if (static_cast<int>(sv.size()) != cfg.dim)
      throw config_error("manifold.spin: expected dim entries");
    cfg.spin = Eigen::Map<const Eigen::VectorXd>(sv.data(), sv.size());
    const auto* grid = find("manifold.grid");
    if (!grid) throw config_error("missing manifold.grid");
    for (double g : parse_doubles(*grid, "manifold.grid")) {
      if (g != std::floor(g)) throw config_error("manifold.grid: expected integers");
      cfg.grid.push_back(static_cast<int>(g));
    }
    if (static_cast<int>(cfg.grid.size()) != cfg.dim)
      throw config_error("manifold.grid: expected dim entries");
  } else {
    if (const auto* v = find("manifold.radius"))
      cfg.radius = parse_double(*v, "manifold.radius");
    if (!(cfg.radius > 0.0)) throw config_error("manifold.radius must be positive");
    for (const char* k : {"manifold.lattice", "manifold.spin", "manifold.grid"})
      if (find(k)) throw config_error(std::string(k) + ": not a sphere key");
  }

  if (const auto* v = find("beta.kind")) {
    cfg.has_beta = true;
    cfg.beta_kind = parse_beta_kind(*v);
  }
  if (cfg.manifold == ManifoldKind::sphere) {
    for (const char* k : {"beta.kind", "beta.constant", "beta.b1", "beta.rest", "beta.c0",
                          "beta.f", "beta.samples_file"})
      if (find(k))
        throw config_error(std::string(k) +
                           ": sphere scenarios only admit beta.scale (identity-scalar)");
    if (const auto* v = find("beta.scale")) {
      cfg.has_beta = true;
      cfg.beta_scale = parse_double(*v, "beta.scale");
      if (cfg.beta_scale == 0.0) throw config_error("beta.scale must be nonzero");
    }
  } else if (cfg.has_beta) {
    switch (cfg.beta_kind) {
      case BetaKind::constant: {
        const auto* v = find("beta.constant");
        if (!v) throw config_error("beta.kind = constant requires beta.constant");
        cfg.beta_constant = parse_matrix(*v, cfg.dim, "beta.constant");
        break;
      }
      case BetaKind::diagonal_profile: {
        const auto* v = find("beta.b1");
        if (!v) throw config_error("beta.kind = diagonal_profile requires beta.b1");
        cfg.b1 = parse_trig_poly(*v, cfg.dim);
        const auto* r = find("beta.rest");
        if (cfg.dim > 1) {
          if (!r) throw config_error("beta.kind = diagonal_profile requires beta.rest");
          const auto rv = parse_doubles(*r, "beta.rest");
          if (static_cast<int>(rv.size()) != cfg.dim - 1)
            throw config_error("beta.rest: expected dim-1 entries");
          cfg.rest = Eigen::Map<const Eigen::VectorXd>(rv.data(), rv.size());
        } else {
          cfg.rest = Eigen::VectorXd();
        }
        break;
      }
      case BetaKind::hessian: {
        const auto* v = find("beta.f");
        if (!v) throw config_error("beta.kind = hessian requires beta.f");
        cfg.f = parse_trig_poly(*v, cfg.dim);
        if (const auto* cv = find("beta.c0")) cfg.c0 = parse_double(*cv, "beta.c0");
        break;
      }
      case BetaKind::samples: {
        const auto* v = find("beta.samples_file");
        if (!v) throw config_error("beta.kind = samples requires beta.samples_file");
        cfg.samples_file = *v;
        break;
      }
    }
  }

  if (const auto* v = find("run.theorem")) cfg.theorem = parse_theorem(*v);
  if (const auto* v = find("run.c")) cfg.c = parse_double(*v, "run.c");
  if (const auto* v = find("run.c_min")) cfg.c_min = parse_double(*v, "run.c_min");
  if (const auto* v = find("run.c_max")) cfg.c_max = parse_double(*v, "run.c_max");
  if (const auto* v = find("run.c_steps")) cfg.c_steps = parse_int(*v, "run.c_steps");
  if (const auto* v = find("run.eigen_count")) cfg.eigen_count = parse_int(*v, "run.eigen_count");
  if (const auto* v = find("run.limiting")) cfg.limiting = parse_bool(*v, "run.limiting");
  if (const auto* v = find("run.kappa")) cfg.kappa = parse_double(*v, "run.kappa");
  if (const auto* v = find("run.kernel_tol")) cfg.kernel_tol = parse_double(*v, "run.kernel_tol");
  if (const auto* v = find("tolerance.codazzi")) cfg.tol_codazzi = parse_double(*v, "tolerance.codazzi");
  if (const auto* v = find("tolerance.margin")) cfg.tol_margin = parse_double(*v, "tolerance.margin");
  if (const auto* v = find("tolerance.nondegeneracy"))
    cfg.tol_nondegeneracy = parse_double(*v, "tolerance.nondegeneracy");

  if (cfg.eigen_count < 1) throw config_error("run.eigen_count must be >= 1");

  const bool torus = cfg.manifold == ManifoldKind::torus;
  if (torus && cfg.theorem != Theorem::classical && !cfg.has_beta)
    throw config_error("torus theorems require a beta block");
  if (!torus && cfg.theorem != Theorem::classical &&
      cfg.theorem != Theorem::constant_invariants)
    throw config_error("sphere scenarios support run.theorem = classical or "
                       "constant_invariants");
  if ((cfg.theorem == Theorem::deformed || cfg.theorem == Theorem::family) && torus &&
      !cfg.c && cfg.c_steps == 0)
    throw config_error("run.theorem = deformed/family requires run.c (or a scan range)");

  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  return parse_scenario(read_file(path));
}

namespace {

CodazziField build_beta(const ScenarioConfig& cfg, const TorusSpec& spec) {
  switch (cfg.beta_kind) {
    case BetaKind::constant:
      return make_constant_beta(spec, cfg.beta_constant);
    case BetaKind::diagonal_profile:
      return make_diagonal_profile_beta(spec, cfg.b1, cfg.rest);
    case BetaKind::hessian:
      return make_hessian_beta(spec, cfg.c0, cfg.f);
    case BetaKind::samples: {
      const std::string text = read_file(cfg.samples_file);
      const auto comps = parse_field_dump(text, spec, spec.dim * (spec.dim + 1) / 2);
      SymField field(spec.dim, spec.node_count());
      field.comp = comps;
      return make_samples_beta(spec, std::move(field));
    }
  }
  throw config_error("unknown beta kind");
}

TorusSpec spec_with_override(const ScenarioConfig& cfg, const RunOptions& options) {
  TorusSpec spec = cfg.torus_spec();
  if (options.grid_override) {
    for (auto& g : spec.grid) g = *options.grid_override;
    spec.validate();
  }
  return spec;
}

// The theorem machinery needs the Codazzi property; spectra exports do not.
bool theorem_needs_codazzi(Theorem t) { return t != Theorem::classical; }

ValidationReport validate_torus(const ScenarioConfig& cfg, const TorusSpec& spec) {
  ValidationReport out;
  auto add = [&](ValidationCheck c) {
    if (!c.pass && out.pass) {
      out.pass = false;
      out.first_failure = c.note.empty() ? c.name : c.note;
    }
    out.checks.push_back(std::move(c));
  };

  // spin structure: harmonic spinors appear exactly for the trivial shift
  {
    ValidationCheck c;
    c.name = "spin_structure_nonzero";
    c.value = spec.trivial_spin() ? 0.0 : 1.0;
    c.threshold = 1.0;
    c.pass = !spec.trivial_spin();
    if (!c.pass) c.note = "zero Dirac eigenvalue: trivial spin structure admits harmonic spinors";
    add(std::move(c));
  }

  if (cfg.has_beta) {
    const CodazziField beta = build_beta(cfg, spec);
    {
      ValidationCheck c;
      c.name = "min_abs_det_beta";
      c.value = pointwise_determinant(beta.beta).abs().minCoeff();
      c.threshold = cfg.tol_nondegeneracy;
      c.pass = c.value >= c.threshold;
      if (!c.pass) c.note = "beta is degenerate: min |det beta| = " + fmt_double(c.value);
      add(std::move(c));
    }
    if (theorem_needs_codazzi(cfg.theorem)) {
      ValidationCheck c;
      c.name = "codazzi_residual";
      c.value = codazzi_residual(spec, beta);
      c.threshold = cfg.tol_codazzi;
      c.pass = c.value <= c.threshold;
      if (!c.pass)
        c.note = "Codazzi residual " + fmt_double(c.value) + " exceeds tolerance " +
                 fmt_double(c.threshold);
      add(std::move(c));
    }
  }
  return out;
}

ValidationReport validate_sphere(const ScenarioConfig& cfg) {
  ValidationReport out;
  ValidationCheck c;
  c.name = "beta_scale_nonzero";
  c.value = std::abs(cfg.beta_scale);
  c.threshold = cfg.tol_nondegeneracy;
  c.pass = c.value >= c.threshold;
  if (!c.pass) c.note = "identity-scalar beta is degenerate";
  out.checks.push_back(c);
  out.pass = c.pass;
  if (!c.pass) out.first_failure = c.note;
  return out;
}

std::string spectrum_csv(const ScenarioConfig& cfg, const TorusSpec& spec,
                         const char* kind, double asymmetry,
                         const std::vector<double>& values) {
  std::string out = "# spec=" + hex64(fnv1a(cfg.canonical_text)) +
                    " N=" + format_grid(spec.grid) + " kind=" + kind +
                    " asymmetry=" + fmt_double(asymmetry) + "\n";
  out += "index,eigenvalue\n";
  for (size_t i = 0; i < values.size(); ++i)
    out += std::to_string(i) + "," + fmt_double(values[i]) + "\n";
  return out;
}

std::string scan_csv(const ScanResult& scan) {
  std::string out = "c,feasible,universal,rhs_inf,margin,reason\n";
  for (const auto& e : scan.entries) {
    std::string reason = e.reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    out += fmt_double(e.c) + "," + (e.feasible ? "1" : "0") + "," +
           (e.universal ? "1" : "0") + "," +
           (e.feasible ? fmt_double(e.rhs_inf) : "") + "," +
           (e.feasible ? fmt_double(e.margin) : "") + "," + reason + "\n";
  }
  return out;
}

void add_bound_keys(KeyValueReport& report, const BoundReport& bound, double tol_margin) {
  report.add("bound.theorem", theorem_name(bound.theorem));
  if (bound.c) report.add("bound.c", *bound.c);
  report.add("bound.rhs_inf", bound.rhs_inf);
  report.add("bound.argmin_node", bound.argmin);
  report.add("bound.margin", bound.margin);
  report.add("bound.margin_tolerance", tol_margin);
  if (bound.chained_rhs) report.add("bound.chained_rhs", *bound.chained_rhs);
}

PQSolution traceless_endpoint_pq(const TorusSpec& spec, const Invariants& inv) {
  PQSolution pq;
  pq.c = 0.0;
  pq.mode = PQMode::traceless_fixed;
  pq.p = ScalarField::Constant(spec.node_count(), -1.0 / spec.dim);
  pq.q = -1.0 / inv.norm_inv_sq;
  pq.feasible.assign(spec.node_count(), 1);
  pq.degenerate.assign(spec.node_count(), 0);
  return pq;
}

// eigenvalue field a of a traceless 2x2 beta (eigenvalues +-a, a > 0)
ScalarField traceless_eigenvalue_field(const TorusSpec& spec, const CodazziField& beta) {
  if (spec.dim != 2)
    throw hypothesis_error("surface bounds require a 2-dimensional torus");
  double max_trace = 0.0;
  for (int x = 0; x < spec.node_count(); ++x)
    max_trace = std::max(max_trace, std::abs(beta.beta.at_node(x).trace()));
  if (max_trace > 1e-8)
    throw hypothesis_error("surface bounds require a traceless beta (max |tr| = " +
                           fmt_double(max_trace) + ")");
  const ScalarField det = pointwise_determinant(beta.beta);
  if ((det >= 0.0).any())
    throw hypothesis_error("traceless beta must have negative determinant");
  return (-det).sqrt();
}

RunArtifacts run_torus(const ScenarioConfig& cfg, const RunOptions& options) {
  RunArtifacts art;
  const TorusSpec spec = spec_with_override(cfg, options);

  const int bw = cfg.beta_bandwidth();
  const int min_grid = *std::min_element(spec.grid.begin(), spec.grid.end());
  if (bw > min_grid / 3)
    art.warnings.push_back("beta bandwidth " + std::to_string(bw) + " exceeds N/3 = " +
                           std::to_string(min_grid / 3) +
                           "; aliasing may degrade spectral accuracy");

  const ValidationReport val = validate_torus(cfg, spec);
  if (options.mode != RunMode::spectrum_only && !val.pass)
    throw hypothesis_error(val.first_failure);
  if (options.mode == RunMode::spectrum_only) {
    for (const auto& c : val.checks)
      if (c.name == "min_abs_det_beta" && !c.pass) throw hypothesis_error(c.note);
  }

  KeyValueReport& report = art.report;
  report.add("report.version", 1);
  if (!cfg.name.empty()) report.add("scenario.name", cfg.name);
  report.add("provenance.config_hash", hex64(fnv1a(cfg.canonical_text)));
  report.add("provenance.manifold", "torus");
  report.add("provenance.dim", spec.dim);
  report.add("provenance.grid", format_grid(spec.grid));
  report.add("provenance.kernel_tol", cfg.kernel_tol);
  report.add("provenance.tolerance.codazzi", cfg.tol_codazzi);
  report.add("provenance.tolerance.margin", cfg.tol_margin);
  report.add("provenance.tolerance.nondegeneracy", cfg.tol_nondegeneracy);
  for (const auto& c : val.checks) {
    report.add("validate." + c.name, c.value);
  }

  const CliffordRep rep = build_clifford(spec.dim);
  const bool want_vectors = cfg.limiting;
  const DiracMatrix d = assemble_dirac(spec, rep);
  const int count = std::min<Eigen::Index>(cfg.eigen_count, d.m.rows());
  const SpectrumResult spec_d = spectrum(d, count, want_vectors, cfg.kernel_tol);

  report.add("spectrum.zero_modes_d", spec_d.zero_modes);
  report.add("spectrum.asymmetry_d", spec_d.asymmetry_residual);

  std::optional<CodazziField> beta;
  std::optional<DiracMatrix> d_beta;
  std::optional<SpectrumResult> spec_db;
  std::optional<Invariants> inv;
  if (cfg.has_beta) {
    beta = build_beta(cfg, spec);
    inv = invariants(spec, *beta);
    d_beta = assemble_beta_dirac(spec, *beta, rep);
    spec_db = spectrum(*d_beta, count, false, cfg.kernel_tol);
    report.add("spectrum.zero_modes_dbeta", spec_db->zero_modes);
    report.add("spectrum.asymmetry_dbeta", spec_db->asymmetry_residual);
  }

  const bool bounds_mode = options.mode != RunMode::spectrum_only;
  if (bounds_mode) {
    if (spec_d.zero_modes > 0 || !spec_d.lambda1)
      throw hypothesis_error("zero Dirac eigenvalue: bound evaluation refused");
    if (spec_db && (spec_db->zero_modes > 0 || !spec_db->lambda1))
      throw hypothesis_error("zero deformed Dirac eigenvalue: bound evaluation refused");
  }
  const double lambda1 = spec_d.lambda1 ? *spec_d.lambda1 : 0.0;
  const double lambda_bar1 = spec_db && spec_db->lambda1 ? *spec_db->lambda1 : 0.0;
  report.add("spectrum.lambda1", lambda1);
  if (spec_db) report.add("spectrum.lambda_bar1", lambda_bar1);

  const ScalarField s_field = ScalarField::Zero(spec.node_count());

  if (options.mode == RunMode::scan) {
    if (cfg.c_steps < 2) throw config_error("scan requires run.c_steps >= 2");
    const ScanResult scan =
        scan_c(spec, s_field, lambda1, lambda_bar1, *inv, cfg.c_min, cfg.c_max, cfg.c_steps);
    report.add("scan.entries", static_cast<int>(scan.entries.size()));
    int feasible = 0;
    for (const auto& e : scan.entries) feasible += e.feasible ? 1 : 0;
    report.add("scan.feasible_entries", feasible);
    if (scan.best_c) {
      report.add("scan.best_c", *scan.best_c);
      report.add("scan.best_rhs_inf", *scan.best_rhs);
      report.add("scan.best_margin", lambda1 * lambda1 - *scan.best_rhs);
    }
    if (scan.universal_rhs) report.add("scan.universal_rhs_inf", *scan.universal_rhs);
    art.files["scan.csv"] = scan_csv(scan);
  } else if (bounds_mode) {
    std::optional<BoundReport> bound;
    std::optional<PQSolution> pq;
    switch (cfg.theorem) {
      case Theorem::classical: {
        BoundReport r;
        r.theorem = Theorem::classical;
        r.lambda1 = lambda1;
        r.lambda_bar1 = lambda_bar1;
        r.rhs_inf = classical_rhs(0.0, spec.dim);  // flat torus: S = 0
        r.margin = lambda1 * lambda1 - r.rhs_inf;
        bound = r;
        break;
      }
      case Theorem::deformed: {
        if (!cfg.c) throw config_error("run.theorem = deformed requires run.c");
        pq = solve_pq(*cfg.c, *inv, spec.dim);
        bound = deformed_bound(spec, s_field, lambda1, lambda_bar1, *pq, *inv);
        break;
      }
      case Theorem::traceless: {
        bound = traceless_bound(spec, s_field, lambda1, lambda_bar1, *inv);
        pq = traceless_endpoint_pq(spec, *inv);
        break;
      }
      case Theorem::constant_invariants: {
        if (!is_constant_field(inv->tr_inv) || !is_constant_field(inv->norm_inv_sq) ||
            !is_constant_field(inv->det_inv))
          throw hypothesis_error("constant_invariants bound requires constant beta "
                                 "invariants");
        const ScalarField sbar = scalar_curvature(spec, deform_metric(spec, *beta));
        bound = constant_invariants_bound(0.0, lambda1, lambda_bar1,
                                          inv->norm_inv_sq[0], sbar.minCoeff(), spec.dim);
        break;
      }
      case Theorem::surface_traceless: {
        const ScalarField a = traceless_eigenvalue_field(spec, *beta);
        bound = surface_traceless_bound(spec, s_field, lambda1, lambda_bar1, a);
        break;
      }
      case Theorem::minimal_surface: {
        const ScalarField a = traceless_eigenvalue_field(spec, *beta);
        bound = minimal_surface_bound(spec, cfg.kappa, a, lambda1, lambda_bar1);
        break;
      }
      case Theorem::family: {
        if (!cfg.c) throw config_error("run.theorem = family requires run.c");
        if (!is_constant_field(inv->tr_inv) || !is_constant_field(inv->norm_inv_sq))
          throw hypothesis_error("family bound requires constant beta invariants");
        const double margin = family_margin(*cfg.c, lambda1, lambda_bar1, 0.0,
                                            inv->tr_inv[0], inv->norm_inv_sq[0], spec.dim);
        BoundReport r;
        r.theorem = Theorem::family;
        r.lambda1 = lambda1;
        r.lambda_bar1 = lambda_bar1;
        r.c = *cfg.c;
        r.rhs_inf = lambda1 * lambda1 - margin;
        r.margin = margin;
        bound = r;
        break;
      }
    }
    if (bound) add_bound_keys(report, *bound, cfg.tol_margin);

    if (cfg.limiting && beta && spec_d.eigenspinors.cols() > 0) {
      if (!pq) pq = traceless_endpoint_pq(spec, *inv);
      const LimitingCaseReport lim =
          limiting_residuals(spec, rep, spec_d.eigenspinors.col(0), lambda1, lambda_bar1,
                             *pq, *beta, d, *d_beta);
      report.add("limiting.d_eigen_residual", lim.d_eigen_residual);
      report.add("limiting.dbeta_eigen_residual", lim.dbeta_eigen_residual);
      report.add("limiting.killing_residual", lim.killing_residual);
      report.add("limiting.traceless_killing_residual", lim.traceless_killing_residual);
      report.add("limiting.compat_residual_1", lim.compat_residual_1);
      report.add("limiting.compat_residual_2", lim.compat_residual_2);
      report.add("limiting.twistor_norm", lim.twistor_norm);
      report.add("limiting.c_ratio", lim.c_ratio);
    }
  }

  art.files["spectrum.csv"] =
      spectrum_csv(cfg, spec, "plain", spec_d.asymmetry_residual, spec_d.eigenvalues);
  if (spec_db)
    art.files["spectrum_beta.csv"] = spectrum_csv(cfg, spec, "beta_twist",
                                                  spec_db->asymmetry_residual,
                                                  spec_db->eigenvalues);

  if (options.dump_fields && beta) {
    art.files["field_beta.txt"] = dump_field("beta", spec, beta->beta.comp);
    art.files["field_tr_inv.txt"] = dump_field("tr_inv", spec, {inv->tr_inv});
    art.files["field_norm_inv_sq.txt"] = dump_field("norm_inv_sq", spec, {inv->norm_inv_sq});
    art.files["field_det_inv.txt"] = dump_field("det_inv", spec, {inv->det_inv});
    art.files["field_weight.txt"] = dump_field("weight", spec, {inv->weight});
  }

  art.files["report.txt"] = report.serialize();
  return art;
}

RunArtifacts run_sphere(const ScenarioConfig& cfg, const RunOptions&) {
  RunArtifacts art;
  const ValidationReport val = validate_sphere(cfg);
  if (!val.pass) throw hypothesis_error(val.first_failure);

  const int n = cfg.dim;
  const double r = cfg.radius;
  const double s = std::abs(cfg.beta_scale);
  const auto [lambda1, big_s] = sphere_closed_form(n, r);
  const double lambda_bar1 = n / (2.0 * r * s);  // deformed metric scales the radius

  KeyValueReport& report = art.report;
  report.add("report.version", 1);
  if (!cfg.name.empty()) report.add("scenario.name", cfg.name);
  report.add("provenance.config_hash", hex64(fnv1a(cfg.canonical_text)));
  report.add("provenance.manifold", "sphere");
  report.add("provenance.dim", n);
  report.add("provenance.radius", r);
  report.add("provenance.tolerance.margin", cfg.tol_margin);
  report.add("spectrum.lambda1", lambda1);
  report.add("spectrum.lambda_bar1", lambda_bar1);
  report.add("curvature.S", big_s);

  BoundReport bound;
  if (cfg.theorem == Theorem::classical) {
    bound.theorem = Theorem::classical;
    bound.lambda1 = lambda1;
    bound.lambda_bar1 = lambda_bar1;
    bound.rhs_inf = classical_rhs(big_s, n);
    bound.margin = lambda1 * lambda1 - bound.rhs_inf;
  } else {
    const double norm_inv_sq = n / (s * s);
    const double sbar_min = n * (n - 1.0) / (r * s * r * s);
    bound = constant_invariants_bound(big_s, lambda1, lambda_bar1, norm_inv_sq, sbar_min, n);
  }
  add_bound_keys(report, bound, cfg.tol_margin);

  art.files["report.txt"] = report.serialize();
  return art;
}

}  // namespace

KeyValueReport ValidationReport::to_report() const {
  KeyValueReport out;
  out.add("validate.pass", pass ? "1" : "0");
  for (const auto& c : checks) {
    out.add("validate." + c.name, c.value);
    out.add("validate." + c.name + ".threshold", c.threshold);
    out.add("validate." + c.name + ".pass", c.pass ? "1" : "0");
  }
  if (!pass) out.add("validate.first_failure", first_failure);
  return out;
}

ValidationReport validate_scenario(const ScenarioConfig& config) {
  if (config.manifold == ManifoldKind::sphere) return validate_sphere(config);
  return validate_torus(config, config.torus_spec());
}

RunArtifacts run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  if (config.manifold == ManifoldKind::sphere) return run_sphere(config, options);
  return run_torus(config, options);
}

void write_artifacts(const RunArtifacts& artifacts, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, contents] : artifacts.files)
    write_file((std::filesystem::path(out_dir) / name).string(), contents);
}

std::string CompareResult::summary() const {
  std::string out;
  for (const auto& l : lines) {
    out += l.key;
    if (l.numeric)
      out += " delta = " + fmt_double(l.delta);
    else
      out += " '" + l.a + "' vs '" + l.b + "'";
    out += l.informational ? " (info)" : (l.pass ? " PASS" : " FAIL");
    out += '\n';
  }
  if (lines.empty()) out = "identical\n";
  return out;
}

CompareResult compare_reports(const std::string& text_a, const std::string& text_b,
                              double tol) {
  const auto a = parse_key_values(text_a);
  const auto b = parse_key_values(text_b);
  std::map<std::string, std::string> bm(b.begin(), b.end());
  if (a.size() != b.size())
    throw config_error("compare: reports have different key counts (schema mismatch)");
  CompareResult out;
  for (const auto& [key, va] : a) {
    const auto it = bm.find(key);
    if (it == bm.end()) throw config_error("compare: key missing from second report: " + key);
    const std::string& vb = it->second;
    if (va == vb) continue;
    CompareLine line;
    line.key = key;
    line.a = va;
    line.b = vb;
    line.informational = key.rfind("provenance.", 0) == 0 || key == "scenario.name";
    char* enda = nullptr;
    char* endb = nullptr;
    const double da = std::strtod(va.c_str(), &enda);
    const double db = std::strtod(vb.c_str(), &endb);
    const bool numeric = enda == va.c_str() + va.size() && endb == vb.c_str() + vb.size() &&
                         !va.empty() && !vb.empty();
    line.numeric = numeric;
    if (numeric) {
      line.delta = std::abs(da - db);
      line.pass = line.informational || line.delta <= tol;
    } else {
      line.pass = line.informational;
    }
    if (!line.pass) out.pass = false;
    out.lines.push_back(std::move(line));
  }
  return out;
}

}  // namespace codazzi
