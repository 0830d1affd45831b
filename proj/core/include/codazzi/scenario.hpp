#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codazzi/deformation.hpp"
#include "codazzi/estimates.hpp"
#include "codazzi/report.hpp"
#include "codazzi/torus.hpp"
#include "codazzi/trigpoly.hpp"

namespace codazzi {

enum class ManifoldKind { torus, sphere };

// Parsed scenario: one manifold block, an optional beta block, and the run
// block. The config format is flat `section.key = value` lines with `#`
// comments; numbers are decimal doubles, matrices row-major lists.
struct ScenarioConfig {
  std::string name;

  ManifoldKind manifold = ManifoldKind::torus;
  int dim = 2;
  Eigen::MatrixXd lattice;
  Eigen::VectorXd spin;
  std::vector<int> grid;
  double radius = 1.0;

  bool has_beta = false;
  BetaKind beta_kind = BetaKind::constant;
  Eigen::MatrixXd beta_constant;
  TrigPoly b1;
  Eigen::VectorXd rest;
  double c0 = 1.0;
  TrigPoly f;
  std::string samples_file;
  double beta_scale = 1.0;  // sphere: beta = scale * identity

  Theorem theorem = Theorem::deformed;
  std::optional<double> c;
  double c_min = 0.2, c_max = 5.0;
  int c_steps = 0;
  int eigen_count = 20;
  bool limiting = false;
  double kappa = 1.0;
  double kernel_tol = 1e-8;

  double tol_codazzi = 1e-6;
  double tol_margin = 1e-6;
  double tol_nondegeneracy = 1e-10;

  std::string canonical_text;  // raw config bytes, hashed for provenance

  TorusSpec torus_spec() const;
  // Largest trig-poly frequency configured on any axis (0 when none).
  int beta_bandwidth() const;
};

ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool pass = true;
  std::string first_failure;

  KeyValueReport to_report() const;
};

// Hypothesis checks: Codazzi residual, nondegeneracy, spin structure free of
// harmonic spinors. Does not run spectra.
ValidationReport validate_scenario(const ScenarioConfig& config);

enum class RunMode { full, spectrum_only, scan };

struct RunOptions {
  RunMode mode = RunMode::full;
  std::optional<int> grid_override;  // all axes
  bool dump_fields = false;
};

struct RunArtifacts {
  KeyValueReport report;
  std::map<std::string, std::string> files;  // file name -> bytes
  std::vector<std::string> warnings;
};

// Validates, computes spectra and the configured bound, and assembles the
// deterministic output files (report.txt, spectrum CSVs, scan.csv).
RunArtifacts run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

void write_artifacts(const RunArtifacts& artifacts, const std::string& out_dir);

struct CompareLine {
  std::string key;
  std::string a, b;
  double delta = 0.0;
  bool numeric = false;
  bool informational = false;  // provenance keys are reported but never fail
  bool pass = true;
};

struct CompareResult {
  bool pass = true;
  std::vector<CompareLine> lines;  // only keys that differ
  std::string summary() const;
};

// Per-key diff of two serialized reports; numeric values compare against
// `tol`, strings must match. Key sets must agree (schema check).
CompareResult compare_reports(const std::string& text_a, const std::string& text_b,
                              double tol = 1e-6);

}  // namespace codazzi
