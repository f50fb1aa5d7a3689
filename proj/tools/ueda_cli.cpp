// Command-line driver: benchmark registry, experiment batches, ablation and
// the 1-D demos.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "ueda/analysis.hpp"
#include "ueda/harness.hpp"
#include "ueda/problems.hpp"

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string column_csv(const ueda::Vector& xs) {
  std::string out = "x\n";
  for (double x : xs) out += fmt::format("{:.17g}\n", x);
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> dims;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const long v = std::stol(item, &pos);
      if (pos != item.size() || v < 2) throw std::invalid_argument(item);
      dims.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ueda::ConfigError(fmt::format("--dims: '{}' is not an integer >= 2", item));
    }
  }
  if (dims.empty()) throw ueda::ConfigError("--dims: empty list");
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-assisted EDA and Bayesian optimization benchmark toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir = "results";
  std::size_t threads = 0;
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { seed = s; seed_given = true; },
                                         "Base seed (overrides the config's base_seed)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  auto* list_cmd = app.add_subcommand("list-problems", "Print the benchmark registry");

  std::string config_file;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment batch from a JSON config");
  run_cmd->add_option("--config", config_file, "Experiment config (JSON)")->required();

  std::string dims_arg = "20,50";
  std::size_t runs = 30;
  std::size_t budget = 500;
  auto* ablation_cmd = app.add_subcommand("ablation", "UEDA-RF variants versus EDA/LS on LZG");
  ablation_cmd->add_option("--dims", dims_arg, "Comma-separated dimensions");
  ablation_cmd->add_option("--runs", runs, "Independent runs per cell");
  ablation_cmd->add_option("--budget", budget, "Evaluation budget per run");

  double noise = ueda::kDemoNoiseStd;
  auto* demo1d_cmd = app.add_subcommand("demo-1d", "GP vs RF fit, EI and EI* on x sin(x)");
  demo1d_cmd->add_option("--noise", noise, "Observation noise std");

  std::size_t samples = 10000;
  auto* density_cmd = app.add_subcommand("demo-density", "Offspring density of P+O_all vs P+O_best");
  density_cmd->add_option("--samples", samples, "Offspring to sample per population");

  std::string stats_dir;
  auto* stats_cmd = app.add_subcommand("stats", "Recompute the report from stored summaries");
  stats_cmd->add_option("--dir", stats_dir, "Experiment output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const fs::path out(out_dir);
    if (*list_cmd) {
      fmt::print("{:<12} {:<5} {:<8} {:>10} {:>10} {:>7} {:>7}\n", "name", "suite", "dim", "lower",
                 "upper", "noisy", "f_star");
      for (const auto& p : ueda::problem_registry()) {
        fmt::print("{:<12} {:<5} {:<8} {:>10g} {:>10g} {:>7} {:>7g}\n", p.name, p.suite, ">=2", p.lower,
                   p.upper, p.noisy ? "yes" : "no", p.f_star);
      }
    } else if (*run_cmd) {
      ueda::ExperimentSpec spec = ueda::load_experiment_spec(config_file);
      if (seed_given) spec.base_seed = seed;
      spec.output_dir = out;
      const auto outcome = ueda::run_experiment(spec, threads);
      fmt::print("{}", ueda::report_text(outcome.report));
      fmt::print("wrote {}\n", out.string());
    } else if (*ablation_cmd) {
      ueda::AblationSpec spec;
      spec.dims = parse_dims(dims_arg);
      spec.runs = runs;
      spec.budget = budget;
      spec.base_seed = seed;
      spec.output_dir = out;
      if (runs < 1 || budget < 1) throw ueda::ConfigError("--runs and --budget must be >= 1");
      const auto ab = ueda::run_ablation(spec, threads);
      fmt::print("{}", ueda::report_text(ab.outcome.report));
      fmt::print("wrote {}\n", out.string());
    } else if (*demo1d_cmd) {
      if (noise < 0.0) throw ueda::ConfigError("--noise must be >= 0");
      const auto grid = ueda::demo_fit_1d(seed, noise);
      write_text(out / "demo_1d.csv", ueda::demo_grid_csv(grid));
      std::string train = "x,y\n";
      for (std::size_t i = 0; i < grid.train_x.size(); ++i) {
        train += fmt::format("{:.17g},{:.17g}\n", grid.train_x[i], grid.train_y[i]);
      }
      write_text(out / "demo_1d_train.csv", train);
      fmt::print("next_gp={:.4f} next_rf={:.4f}\nwrote {}\n", grid.next_gp, grid.next_rf,
                 (out / "demo_1d.csv").string());
    } else if (*density_cmd) {
      if (samples < 1000) throw ueda::ConfigError("--samples must be >= 1000");
      nlohmann::json summary = {{"seed", seed}, {"samples", samples}, {"interval", {7.0, 9.0}}};
      for (auto kind : {ueda::SurrogateKind::GP, ueda::SurrogateKind::RF}) {
        const auto d = ueda::demo_offspring_density(seed, samples, kind);
        const std::string tag = kind == ueda::SurrogateKind::GP ? "gp" : "rf";
        write_text(out / fmt::format("density_{}_all.csv", tag), column_csv(d.from_all));
        write_text(out / fmt::format("density_{}_best.csv", tag), column_csv(d.from_best));
        summary[tag] = {{"mass_all", ueda::mass_in(d.from_all, 7.0, 9.0)},
                        {"mass_best", ueda::mass_in(d.from_best, 7.0, 9.0)},
                        {"o_best", d.o_best},
                        {"o_all", d.o_all}};
      }
      write_text(out / "density_summary.json", summary.dump(2) + "\n");
      fmt::print("{}\n", summary.dump(2));
    } else if (*stats_cmd) {
      const auto report = ueda::load_report(stats_dir);
      fmt::print("{}", ueda::report_text(report));
      if (app.get_option("--out")->count() > 0) write_text(out / "report.json", ueda::report_json(report));
    }
  } catch (const ueda::ConfigError& e) {
    fmt::print(stderr, "configuration error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
