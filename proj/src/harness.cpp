#include "ueda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace ueda {

using nlohmann::json;
namespace fs = std::filesystem;

std::string ProblemSpec::label() const { return fmt::format("{}_d{}", name, dim); }

namespace {

std::string sanitize(std::string s) {
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Config parsing

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(fmt::format("{}: missing field '{}'", where, key));
  return obj.at(key);
}

std::size_t as_count(const json& v, const std::string& where, std::size_t min_value) {
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value)) {
    throw ConfigError(fmt::format("{}: expected an integer >= {}", where, min_value));
  }
  return v.get<std::size_t>();
}

double as_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(fmt::format("{}: expected a number", where));
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(fmt::format("{}: expected a string", where));
  return v.get<std::string>();
}

AlgorithmEntry parse_algorithm_entry(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", where));
  static const std::set<std::string> known = {
      "id", "algorithm", "surrogate", "pop_size", "o_all_size", "archive_cap", "acquisition",
      "lcb_beta", "init_samples", "bins", "best_fraction", "local_search_rate", "seed"};
  for (const auto& [k, _] : j.items()) {
    if (!known.contains(k)) throw ConfigError(fmt::format("{}: unknown field '{}'", where, k));
  }
  AlgorithmEntry e;
  e.id = as_string(require(j, "id", where), where + ".id");
  Algorithm algo;
  SurrogateKind sur = SurrogateKind::GP;
  try {
    algo = parse_algorithm(as_string(require(j, "algorithm", where), where + ".algorithm"));
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("{}.algorithm: {}", where, err.what()));
  }
  try {
    if (j.contains("surrogate")) sur = parse_surrogate(as_string(j["surrogate"], where + ".surrogate"));
  } catch (const ConfigError& err) {
    throw ConfigError(fmt::format("{}.surrogate: {}", where, err.what()));
  }
  e.config = default_config(algo, sur);
  auto& c = e.config;
  if (j.contains("pop_size")) {
    c.pop_size = as_count(j["pop_size"], where + ".pop_size", 1);
    c.o_all_size = std::max<std::size_t>(1, c.pop_size / 2);
  }
  if (j.contains("o_all_size")) c.o_all_size = as_count(j["o_all_size"], where + ".o_all_size", 1);
  if (j.contains("archive_cap")) c.archive_cap = as_count(j["archive_cap"], where + ".archive_cap", 1);
  if (j.contains("acquisition")) {
    try {
      c.acquisition = parse_acquisition(as_string(j["acquisition"], where + ".acquisition"));
    } catch (const ConfigError& err) {
      throw ConfigError(fmt::format("{}: {}", where, err.what()));
    }
  }
  if (j.contains("lcb_beta")) c.lcb_beta = as_real(j["lcb_beta"], where + ".lcb_beta");
  if (j.contains("init_samples")) c.init_samples = as_count(j["init_samples"], where + ".init_samples", 1);
  if (j.contains("bins")) c.reproduction.bins = as_count(j["bins"], where + ".bins", 3);
  if (j.contains("best_fraction")) c.reproduction.best_fraction = as_real(j["best_fraction"], where + ".best_fraction");
  if (j.contains("local_search_rate")) {
    c.reproduction.local_search_rate = as_real(j["local_search_rate"], where + ".local_search_rate");
  }
  return e;
}

json algorithm_entry_json(const AlgorithmEntry& e) {
  const auto& c = e.config;
  json j = {{"id", e.id},
            {"algorithm", std::string(to_string(c.algorithm))},
            {"surrogate", std::string(to_string(c.surrogate))},
            {"pop_size", c.pop_size},
            {"o_all_size", c.o_all_size},
            {"archive_cap", c.archive_cap},
            {"acquisition", std::string(to_string(c.acquisition))},
            {"lcb_beta", c.lcb_beta},
            {"bins", c.reproduction.bins},
            {"best_fraction", c.reproduction.best_fraction},
            {"local_search_rate", c.reproduction.local_search_rate}};
  if (c.init_samples) j["init_samples"] = *c.init_samples;
  return j;
}

// ---------------------------------------------------------------------------
// Persistence

std::string trace_csv(const std::string& algo, const ProblemSpec& p, std::uint64_t seed,
                      const ConvergenceTrace& trace) {
  std::string out = fmt::format("# algo={},problem={},dim={},seed={}\nfe,f,best_so_far\n", algo,
                                p.name, p.dim, seed);
  for (const auto& r : trace) out += fmt::format("{},{:.17g},{:.17g}\n", r.fe, r.f, r.best_so_far);
  return out;
}

constexpr const char* kSummaryHeader = "problem,dim,algo,seed,best_f,fes_used,wall_ms\n";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Runs fn(i) for i in [0, n) on a bounded pool; the first failure stops the
// pool and is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

fs::path trace_path(const std::string& algo, const ProblemSpec& p, std::uint64_t seed) {
  return fs::path("traces") / fmt::format("{}__{}__d{}__s{}.csv", sanitize(algo), sanitize(p.name), p.dim, seed);
}

fs::path summary_path(const std::string& algo, const ProblemSpec& p) {
  return fs::path("summaries") / fmt::format("{}_d{}__{}.csv", sanitize(p.name), p.dim, sanitize(algo));
}

void ExperimentSpec::validate() const {
  if (problems.empty()) throw ConfigError("experiment: no problems");
  if (algorithms.empty()) throw ConfigError("experiment: no algorithms");
  if (runs < 1) throw ConfigError("experiment: runs must be >= 1");
  if (budget < 1) throw ConfigError("experiment: budget must be >= 1");
  std::set<std::string> ids;
  std::set<std::string> files;
  for (const auto& a : algorithms) {
    if (a.id.empty()) throw ConfigError("experiment: empty algorithm id");
    if (!ids.insert(a.id).second) throw ConfigError(fmt::format("experiment: duplicate algorithm id '{}'", a.id));
    if (!files.insert(sanitize(a.id)).second) {
      throw ConfigError(fmt::format("experiment: algorithm id '{}' collides with another after sanitizing", a.id));
    }
  }
  if (!ids.contains(baseline_id)) {
    throw ConfigError(fmt::format("experiment: baseline_id '{}' is not an algorithm id", baseline_id));
  }
  for (const auto& p : problems) {
    (void)make_problem(p.name, p.dim);
    for (const auto& a : algorithms) {
      try {
        a.config.validate(p.dim);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("algorithm '{}' on {}: {}", a.id, p.label(), e.what()));
      }
    }
  }
}

ExperimentSpec parse_experiment_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(fmt::format("config line {}, column {}: malformed JSON", line, col));
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  static const std::set<std::string> known = {"problems", "algorithms", "runs", "budget", "base_seed", "baseline_id"};
  for (const auto& [k, _] : j.items()) {
    if (!known.contains(k)) throw ConfigError(fmt::format("config: unknown field '{}'", k));
  }

  ExperimentSpec s;
  const json& probs = require(j, "problems", "config");
  if (!probs.is_array()) throw ConfigError("problems: expected an array");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const std::string where = fmt::format("problems[{}]", i);
    if (!probs[i].is_object()) throw ConfigError(where + ": expected an object");
    ProblemSpec p;
    p.name = as_string(require(probs[i], "name", where), where + ".name");
    p.dim = as_count(require(probs[i], "dim", where), where + ".dim", 1);
    s.problems.push_back(p);
  }
  const json& algos = require(j, "algorithms", "config");
  if (!algos.is_array()) throw ConfigError("algorithms: expected an array");
  for (std::size_t i = 0; i < algos.size(); ++i) {
    s.algorithms.push_back(parse_algorithm_entry(algos[i], fmt::format("algorithms[{}]", i)));
  }
  s.runs = as_count(require(j, "runs", "config"), "runs", 1);
  s.budget = as_count(require(j, "budget", "config"), "budget", 1);
  if (j.contains("base_seed")) s.base_seed = as_count(j["base_seed"], "base_seed", 0);
  s.baseline_id = j.contains("baseline_id") ? as_string(j["baseline_id"], "baseline_id")
                                            : s.algorithms.empty() ? "" : s.algorithms.front().id;
  s.validate();
  return s;
}

ExperimentSpec load_experiment_spec(const fs::path& file) {
  return parse_experiment_spec(read_file(file));
}

std::string experiment_spec_json(const ExperimentSpec& spec) {
  json j;
  j["problems"] = json::array();
  for (const auto& p : spec.problems) j["problems"].push_back({{"name", p.name}, {"dim", p.dim}});
  j["algorithms"] = json::array();
  for (const auto& a : spec.algorithms) j["algorithms"].push_back(algorithm_entry_json(a));
  j["runs"] = spec.runs;
  j["budget"] = spec.budget;
  j["base_seed"] = spec.base_seed;
  j["baseline_id"] = spec.baseline_id;
  return j.dump(2) + "\n";
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec, std::size_t threads) {
  spec.validate();
  std::vector<Problem> problems;
  for (const auto& p : spec.problems) problems.push_back(make_problem(p.name, p.dim));

  ExperimentOutcome out;
  for (std::size_t p = 0; p < spec.problems.size(); ++p) {
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      for (std::size_t r = 0; r < spec.runs; ++r) {
        out.cells.push_back(CellResult{p, a, r, spec.base_seed + r, 0, {}});
      }
    }
  }

  parallel_for(out.cells.size(), threads, [&](std::size_t i) {
    CellResult& cell = out.cells[i];
    const auto& entry = spec.algorithms[cell.algorithm];
    OptimizerConfig cfg = entry.config;
    cfg.seed = cell.seed;
    EvaluationBudget budget(spec.budget);
    try {
      cell.result = run_optimizer(problems[cell.problem], cfg, budget);
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("cell algo={},problem={},seed={} failed: {}", entry.id,
                                           spec.problems[cell.problem].label(), cell.seed, e.what()));
    }
    cell.fes_used = budget.used();
    write_file(spec.output_dir / trace_path(entry.id, spec.problems[cell.problem], cell.seed),
               trace_csv(entry.id, spec.problems[cell.problem], cell.seed, cell.result.trace));
  });

  std::vector<std::string> labels;
  for (const auto& p : spec.problems) labels.push_back(p.label());
  std::vector<std::string> ids;
  for (const auto& a : spec.algorithms) ids.push_back(a.id);
  std::vector<std::vector<std::vector<double>>> samples(
      spec.problems.size(), std::vector<std::vector<double>>(spec.algorithms.size()));
  std::vector<std::vector<std::string>> summaries(
      spec.problems.size(), std::vector<std::string>(spec.algorithms.size(), kSummaryHeader));
  for (const auto& c : out.cells) {
    samples[c.problem][c.algorithm].push_back(c.result.best_f);
    const auto& p = spec.problems[c.problem];
    summaries[c.problem][c.algorithm] +=
        fmt::format("{},{},{},{},{:.17g},{},{:.3f}\n", p.name, p.dim, spec.algorithms[c.algorithm].id,
                    c.seed, c.result.best_f, c.fes_used, c.result.wall_ms);
  }
  for (std::size_t p = 0; p < spec.problems.size(); ++p) {
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      write_file(spec.output_dir / summary_path(spec.algorithms[a].id, spec.problems[p]), summaries[p][a]);
    }
  }
  out.report = build_report(labels, ids, spec.baseline_id, samples);
  write_file(spec.output_dir / "experiment.json", experiment_spec_json(spec));
  write_file(spec.output_dir / "report.json", report_json(out.report));
  write_file(spec.output_dir / "report.txt", report_text(out.report));
  return out;
}

ComparisonReport load_report(const fs::path& dir) {
  ExperimentSpec spec = load_experiment_spec(dir / "experiment.json");
  std::vector<std::string> labels;
  for (const auto& p : spec.problems) labels.push_back(p.label());
  std::vector<std::string> ids;
  for (const auto& a : spec.algorithms) ids.push_back(a.id);
  std::vector<std::vector<std::vector<double>>> samples(
      spec.problems.size(), std::vector<std::vector<double>>(spec.algorithms.size()));
  for (std::size_t p = 0; p < spec.problems.size(); ++p) {
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      const fs::path file = dir / summary_path(ids[a], spec.problems[p]);
      std::istringstream in(read_file(file));
      std::string line;
      std::getline(in, line);
      if (line + "\n" != kSummaryHeader) throw ConfigError(fmt::format("{}: unexpected header", file.string()));
      std::size_t lineno = 1;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7) {
          throw ConfigError(fmt::format("{} line {}: expected 7 columns", file.string(), lineno));
        }
        try {
          samples[p][a].push_back(std::stod(fields[4]));
        } catch (const std::exception&) {
          throw ConfigError(fmt::format("{} line {}: bad best_f", file.string(), lineno));
        }
      }
    }
  }
  return build_report(labels, ids, spec.baseline_id, samples);
}

std::string report_json(const ComparisonReport& r) {
  json j;
  j["problems"] = r.problems;
  j["algorithms"] = r.algorithms;
  j["baseline"] = r.baseline;
  j["direction_statistic"] = r.direction_statistic;
  j["alpha"] = r.alpha;
  j["cells"] = json::array();
  for (const auto& row : r.cells) {
    json jr = json::array();
    for (const auto& c : row) {
      jr.push_back({{"mean", c.mean},
                    {"std", c.std},
                    {"median", c.median},
                    {"rank", c.rank},
                    {"mark", c.mark ? json(std::string(to_string(*c.mark))) : json(nullptr)}});
    }
    j["cells"].push_back(jr);
  }
  j["mean_ranks"] = r.mean_ranks;
  j["tallies"] = json::array();
  for (const auto& t : r.tallies) {
    j["tallies"].push_back(t ? json{{"better", t->better}, {"worse", t->worse}, {"similar", t->similar}}
                             : json(nullptr));
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_text(const ComparisonReport& r) {
  std::string out = fmt::format("baseline: {}  (marks: rank-sum test at alpha={}, direction by {})\n\n",
                                r.baseline, r.alpha, r.direction_statistic);
  out += fmt::format("{:<18}", "problem");
  for (const auto& a : r.algorithms) out += fmt::format(" | {:<32}", a);
  out += "\n";
  for (std::size_t p = 0; p < r.problems.size(); ++p) {
    out += fmt::format("{:<18}", r.problems[p]);
    for (const auto& c : r.cells[p]) {
      const std::string mark = c.mark ? fmt::format("({})", to_string(*c.mark)) : "";
      out += fmt::format(" | {:<32}", fmt::format("{:.2e} ({:.2e}) [{:g}] {}", c.mean, c.std, c.rank, mark));
    }
    out += "\n";
  }
  out += fmt::format("{:<18}", "mean rank");
  for (double m : r.mean_ranks) out += fmt::format(" | {:<32.2f}", m);
  out += "\n";
  out += fmt::format("{:<18}", "+ / - / ≈");
  for (const auto& t : r.tallies) {
    out += fmt::format(" | {:<32}", t ? fmt::format("{}/{}/{}", t->better, t->worse, t->similar) : "/");
  }
  out += "\n";
  for (const auto& w : r.warnings) out += "warning: " + w + "\n";
  return out;
}

std::vector<AlgorithmEntry> ablation_algorithms() {
  return {
      {"UEDA-RF", default_config(Algorithm::UEDA, SurrogateKind::RF)},
      {"UEDA-RF-AL", default_config(Algorithm::UEDA_AL, SurrogateKind::RF)},
      {"UEDA-RF-NS", default_config(Algorithm::UEDA_NS, SurrogateKind::RF)},
      {"EDA/LS", default_config(Algorithm::EDALS)},
  };
}

std::vector<double> AblationOutcome::finals(std::size_t problem, std::size_t algorithm) const {
  std::vector<double> v;
  for (const auto& c : outcome.cells) {
    if (c.problem == problem && c.algorithm == algorithm) v.push_back(c.result.best_f);
  }
  return v;
}

AblationOutcome run_ablation(const AblationSpec& spec, std::size_t threads) {
  AblationOutcome ab;
  auto& ex = ab.experiment;
  for (std::size_t d : spec.dims) {
    for (const auto& name : spec.problems) ex.problems.push_back({name, d});
  }
  ex.algorithms = ablation_algorithms();
  ex.runs = spec.runs;
  ex.budget = spec.budget;
  ex.base_seed = spec.base_seed;
  ex.baseline_id = "EDA/LS";
  ex.output_dir = spec.output_dir;
  ab.outcome = run_experiment(ex, threads);

  for (std::size_t p = 0; p < ex.problems.size(); ++p) {
    std::string csv = "algo,fe,mean_best,std_best\n";
    for (std::size_t a = 0; a < ex.algorithms.size(); ++a) {
      ConvergenceCurve curve{ex.algorithms[a].id, ex.problems[p], {}, {}};
      for (std::size_t fe = 0; fe < ex.budget; ++fe) {
        std::vector<double> at;
        for (const auto& c : ab.outcome.cells) {
          if (c.problem == p && c.algorithm == a && fe < c.result.trace.size()) {
            at.push_back(c.result.trace[fe].best_so_far);
          }
        }
        if (at.empty()) break;
        curve.mean_best.push_back(mean(at));
        curve.std_best.push_back(sample_std(at));
        csv += fmt::format("{},{},{:.17g},{:.17g}\n", curve.algo, fe + 1, curve.mean_best.back(),
                           curve.std_best.back());
      }
      ab.curves.push_back(std::move(curve));
    }
    write_file(spec.output_dir / fmt::format("curves_{}.csv", sanitize(ex.problems[p].label())), csv);
  }
  return ab;
}

}  // namespace ueda
