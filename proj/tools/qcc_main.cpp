// qcc: configuration-driven experiment runner for the quasiconformal
// composition-operator toolkit. Subcommands wire the library modules into
// reproducible reports, CSV tables, and optional SVG charts.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qcc/runner.hpp"
#include "qcc/svg.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"quasiconformal composition-operator experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 0;
  bool seed_given = false;
  bool reproducible = false;
  bool emit_svg = false;

  app.add_option("--config", config_path, "experiment config (JSON)")
      ->envname("QCC_CONFIG");
  app.add_option("--out", out_dir, "output directory")->envname("QCC_OUT");
  auto* seed_opt =
      app.add_option("--seed", seed, "override the config seed")->envname("QCC_SEED");
  app.add_flag("--reproducible", reproducible,
               "bit-reproducible mode: zeroed timings, fixed reduction order")
      ->envname("QCC_REPRODUCIBLE");
  app.add_flag("--emit-svg", emit_svg, "also write SVG charts for every table")
      ->envname("QCC_EMIT_SVG");

  const char* names[] = {"distortion", "map-report", "norm",     "weak11",
                         "bmo",        "geometry-audit", "schatten", "full-report"};
  for (const char* n : names) app.add_subcommand(n);

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0 || std::getenv("QCC_SEED") != nullptr;
  std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    qcc::ExperimentConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw qcc::ConfigError("cannot open config file: " + config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = qcc::parse_config(ss.str());
    }
    if (seed_given) cfg.seed = seed;
    if (reproducible) cfg.reproducible = true;

    qcc::Report rep = qcc::runner::run(subcommand, cfg);

    fs::create_directories(out_dir);
    {
      std::ofstream out(fs::path(out_dir) / "report.json");
      out << rep.to_json(cfg.reproducible).dump(2) << "\n";
    }
    for (const auto& [name, table] : rep.tables)
      qcc::emit_plot_data(rep, name, out_dir, emit_svg);

    for (const auto& [name, ok] : rep.verdicts)
      std::cout << (ok ? "pass" : "FAIL") << "  " << name << "\n";
    std::cout << (rep.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
    return rep.all_pass() ? 0 : 1;
  } catch (const qcc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qcc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
