// Scenario runner: validate hypotheses, compute Dirac spectra, evaluate
// eigenvalue bounds, emit deterministic reports.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "codazzi/errors.hpp"
#include "codazzi/report.hpp"
#include "codazzi/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitHypothesis = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  int grid_override = 0;
  bool dump_fields = false;
};

codazzi::RunOptions make_options(const CommonArgs& args, codazzi::RunMode mode) {
  codazzi::RunOptions options;
  options.mode = mode;
  options.dump_fields = args.dump_fields;
  if (args.grid_override > 0) options.grid_override = args.grid_override;
  return options;
}

int run_mode(const CommonArgs& args, codazzi::RunMode mode) {
  const auto config = codazzi::load_scenario(args.config_path);
  const auto artifacts = codazzi::run_scenario(config, make_options(args, mode));
  for (const auto& w : artifacts.warnings) std::cerr << "warning: " << w << "\n";
  codazzi::write_artifacts(artifacts, args.out_dir);
  std::cout << artifacts.files.at("report.txt");
  return kExitOk;
}

int validate_mode(const CommonArgs& args) {
  auto config = codazzi::load_scenario(args.config_path);
  if (args.grid_override > 0) {
    for (auto& g : config.grid) g = args.grid_override;
  }
  const auto report = codazzi::validate_scenario(config);
  std::cout << report.to_report().serialize();
  return report.pass ? kExitOk : kExitHypothesis;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac-spectrum workbench for Codazzi-deformed eigenvalue bounds"};
  app.require_subcommand(1);

  CommonArgs args;
  double compare_tol = 1e-6;
  std::string compare_a, compare_b;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("config", args.config_path, "scenario config file")->required();
    sub->add_option("--grid", args.grid_override, "override every grid axis to N");
    if (with_out) {
      sub->add_option("--out", args.out_dir, "output directory (default .)");
      sub->add_flag("--dump-fields", args.dump_fields, "dump grid fields as text");
    }
  };

  CLI::App* validate = app.add_subcommand("validate", "check scenario hypotheses");
  add_common(validate, false);
  CLI::App* run = app.add_subcommand("run", "full pipeline: spectra, bound, report");
  add_common(run, true);
  CLI::App* spectrum = app.add_subcommand("spectrum", "spectra export only");
  add_common(spectrum, true);
  CLI::App* scan = app.add_subcommand("scan", "scan the free parameter c");
  add_common(scan, true);

  CLI::App* compare = app.add_subcommand("compare", "diff two reports");
  compare->add_option("a", compare_a, "first report.txt")->required();
  compare->add_option("b", compare_b, "second report.txt")->required();
  compare->add_option("--tol", compare_tol, "numeric tolerance (default 1e-6)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return validate_mode(args);
    if (run->parsed()) return run_mode(args, codazzi::RunMode::full);
    if (spectrum->parsed()) return run_mode(args, codazzi::RunMode::spectrum_only);
    if (scan->parsed()) return run_mode(args, codazzi::RunMode::scan);
    if (compare->parsed()) {
      const auto result = codazzi::compare_reports(codazzi::read_file(compare_a),
                                                   codazzi::read_file(compare_b), compare_tol);
      std::cout << result.summary();
      return result.pass ? kExitOk : kExitHypothesis;
    }
  } catch (const codazzi::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const codazzi::hypothesis_error& e) {
    std::cerr << "hypothesis failure: " << e.what() << "\n";
    return kExitHypothesis;
  } catch (const codazzi::numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
