// Command-line scenario runner.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "shadowgeo/cylinder_oracle.hpp"
#include "shadowgeo/scenario.hpp"

namespace fs = std::filesystem;
using namespace shadowgeo;

namespace {

int print_result(const RunResult& r) {
  std::cout << r.summary.dump(2) << '\n';
  if (r.summary.contains("error")) std::cerr << "error: " << r.summary["error"].value("message", "") << '\n';
  return r.exit_code;
}

RunOptions run_options(const std::string& out, int threads, bool reuse_cache) {
  RunOptions opts;
  if (!out.empty()) opts.output_root = fs::path(out);
  opts.threads = threads;
  opts.reuse_cache = reuse_cache;
  return opts;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shadow curves of segments on implicit hypersurfaces"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: SHADOWGEO_THREADS or 1)");

  auto* run = app.add_subcommand("run", "run a scenario file");
  std::string scenario_path;
  std::string out;
  bool reuse_cache = false;
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out, "output root (default: SHADOWGEO_OUTPUT_DIR or the scenario's output_dir)");
  run->add_flag("--reuse-cache", reuse_cache, "reuse a cached shadow curve when the scenario hash matches");

  auto* suite = app.add_subcommand("suite", "generate a deterministic scenario suite");
  std::string kind;
  int count = 0;
  std::uint64_t seed = 1;
  int dim = 3;
  std::string suite_out = ".";
  suite->add_option("kind", kind, "sphere | cylinder | revolution | graph")->required();
  suite->add_option("count", count, "number of scenarios")->required()->check(CLI::PositiveNumber);
  suite->add_option("--seed", seed, "random seed");
  suite->add_option("--dim", dim, "ambient dimension")->check(CLI::Range(3, 8));
  suite->add_option("--out", suite_out, "directory for the scenario files");

  auto* oracle = app.add_subcommand("oracle", "closed-form reference tables");
  auto* cylinder = oracle->add_subcommand("cylinder", "cylinder scenario table: t, T, T', sin_alpha, alpha_prime");
  oracle->require_subcommand(1);
  cylinder->set_help_flag("--help", "print this help");
  double R = 1.0, h = 1.0, a = 0.0, b = 1.0;
  int samples = 513;
  std::string oracle_out;
  cylinder->add_option("--R", R, "radius");
  cylinder->add_option("--h", h, "height");
  cylinder->add_option("--a", a, "upper point x");
  cylinder->add_option("--b", b, "upper point y");
  cylinder->add_option("--samples", samples, "rows")->check(CLI::Range(2, 1 << 24));
  cylinder->add_option("--out", oracle_out, "CSV file (default: stdout)");

  auto* canal = app.add_subcommand("canal", "canal surface of a scenario");
  std::string canal_path;
  std::string canal_out;
  canal->add_option("scenario", canal_path, "scenario JSON file")->required();
  canal->add_option("--out", canal_out, "output root");

  auto* report = app.add_subcommand("report", "combine run summaries");
  std::string merge_dir;
  report->add_option("--merge", merge_dir, "directory searched for summary.json files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return print_result(run_scenario_file(scenario_path, run_options(out, threads, reuse_cache)));

    if (*suite) {
      const auto docs = generate_suite(kind, count, seed, dim);
      fs::create_directories(suite_out);
      for (const auto& d : docs) {
        const fs::path path = fs::path(suite_out) / (d["name"].get<std::string>() + ".json");
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << d.dump(2) << '\n';
        std::cout << path.string() << '\n';
      }
      return 0;
    }

    if (*cylinder) {
      const auto sc = CylinderScenario::make(R, h, a, b);
      const auto rows = oracle_table(sc, samples);
      if (oracle_out.empty()) {
        write_csv(std::cout, rows);
      } else {
        std::ofstream os(oracle_out, std::ios::binary | std::ios::trunc);
        write_csv(os, rows);
      }
      return 0;
    }

    if (*canal) {
      Scenario sc;
      try {
        sc = Scenario::load(canal_path);
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalidInput;
      }
      return print_result(run_canal(sc, run_options(canal_out, threads, false)));
    }

    if (*report) {
      const auto merged = merge_reports(merge_dir);
      std::ofstream(fs::path(merge_dir) / "merged.json", std::ios::binary | std::ios::trunc) << merged.dump(2) << '\n';
      std::cout << merged["totals"].dump(2) << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
