#include "cli.hpp"

#include "wcs/direction.hpp"
#include "wcs/gnccp.hpp"
#include "wcs/io.hpp"
#include "wcs/objective.hpp"
#include "wcs/oracle.hpp"
#include "wcs/synthbench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace wcs::cli {
namespace fs = std::filesystem;
using io::Json;

namespace {

struct SolverFlags {
  std::string relaxation = "h1";
  std::string direction = "exact";
  std::string line_search = "backtracking";
  double dzeta = 0.01;
  int fw_max_iters = 100;
  double fw_gap_tol = 1e-4;
  bool literal_gradient = false;

  void attach(CLI::App* app) {
    app->add_option("--relaxation", relaxation, "h1 | h2 | piw")
        ->check(CLI::IsMember({"h1", "h2", "piw"}));
    app->add_option("--direction", direction, "exact | fast")
        ->check(CLI::IsMember({"exact", "fast"}));
    app->add_option("--linesearch", line_search, "backtracking | exact")
        ->check(CLI::IsMember({"backtracking", "exact"}));
    app->add_option("--dzeta", dzeta, "continuation step");
    app->add_option("--fw-max-iters", fw_max_iters);
    app->add_option("--fw-gap-tol", fw_gap_tol);
    app->add_flag("--literal-gradient", literal_gradient,
                  "use grad H + (1 - alpha) C as the gradient of F");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.relaxation = parse_relaxation(relaxation);
    c.direction = parse_direction(direction);
    c.line_search.kind = line_search == "exact" ? LineSearchKind::kExactQuartic
                                                : LineSearchKind::kBacktracking;
    c.zeta_step = dzeta;
    c.fw_max_iters = fw_max_iters;
    c.fw_gap_tol = fw_gap_tol;
    c.literal_structural_gradient = literal_gradient;
    c.validate();
    return c;
  }
};

struct GeneratorFlags {
  GeneratorParams params;
  std::string perturbation = "each";
  bool no_perturb = false;

  void attach(CLI::App* app, bool required) {
    auto* m = app->add_option("--m", params.m, "vertices of G");
    auto* n = app->add_option("--n", params.n, "vertices of H");
    auto* l = app->add_option("--l", params.l, "matched vertices");
    if (required) {
      m->required();
      n->required();
      l->required();
    }
    app->add_option("--sigma", params.sigma, "point noise std");
    app->add_option("--density", params.density, "edge density in (0, 1]");
    app->add_option("--seed", params.seed);
    app->add_option("--perturbation", perturbation, "each | total")
        ->check(CLI::IsMember({"each", "total"}));
    app->add_flag("--no-perturb", no_perturb, "skip edge add/remove noise");
  }

  GeneratorParams resolved() const {
    GeneratorParams p = params;
    p.perturbation = perturbation == "each" ? PerturbationCount::kEach
                                            : PerturbationCount::kTotal;
    p.perturb_edges = !no_perturb;
    p.validate();
    return p;
  }
};

MatchResult run_match(const ProblemInstance& instance,
                      const SolverConfig& config) {
  return config.relaxation == RelaxationKind::kPIW ? match_piw(instance, config)
                                                   : match(instance, config);
}

void write_instance(const fs::path& dir, const GeneratorParams& params,
                    const ProblemInstance& instance) {
  fs::create_directories(dir);
  io::write_graph(dir / "graph_g.json", instance.graph_g());
  io::write_graph(dir / "graph_h.json", instance.graph_h());
  io::write_cost_csv(dir / "cost.csv", instance.cost());
  io::write_permutation(dir / "gt.json", *instance.ground_truth());
  io::write_json_file(dir / "params.json", io::params_to_json(params));
}

double objective_ratio(double method, double oracle) {
  const double tol = 1e-9 * std::max(1.0, std::abs(oracle));
  if (std::abs(method - oracle) <= tol) return 1.0;
  if (oracle == 0.0) return std::numeric_limits<double>::infinity();
  return method / oracle;
}

Json oracle_report(const ProblemInstance& instance, const SolverConfig& config) {
  const OracleResult oracle = brute_force_min(instance);
  const MatchResult result = run_match(instance, config);
  const double ratio = objective_ratio(result.objective_f, oracle.best_value);
  return {{"oracle_value", oracle.best_value},
          {"method_value", result.objective_f},
          {"ratio", ratio},
          {"attained", ratio == 1.0},
          {"num_candidates", oracle.num_candidates},
          {"num_optima", oracle.num_optima},
          {"discretized_by_fallback", result.discretized_by_fallback}};
}

int cmd_generate(const GeneratorFlags& flags, const std::string& out_dir,
                 std::ostream& out) {
  const GeneratorParams params = flags.resolved();
  const ProblemInstance instance = generate_instance(params);
  write_instance(out_dir, params, instance);
  out << "wrote instance M=" << params.m << " N=" << params.n
      << " L=" << params.l << " to " << out_dir << '\n';
  return kExitOk;
}

struct MatchFlags {
  std::string g_path, h_path, cost_path, trace_path, gt_path;
  int l = 0;
  double alpha = 1.0;
};

int cmd_match(const MatchFlags& f, const SolverFlags& solver,
              std::ostream& out) {
  const SolverConfig config = solver.config();
  WeightedGraph g = io::read_graph(f.g_path);
  WeightedGraph h = io::read_graph(f.h_path);
  CostMatrix cost;
  if (!f.cost_path.empty()) {
    cost = io::read_cost_csv(f.cost_path);
  } else if (f.alpha == 1.0) {
    cost = CostMatrix::zeros(g.size(), h.size());
  } else if (g.has_labels() && h.has_labels()) {
    cost = CostMatrix::from_labels(g, h);
  } else {
    throw std::invalid_argument(
        "a cost matrix is required when alpha < 1 and the graphs are unlabeled");
  }
  std::optional<PartialPermutation> gt;
  if (!f.gt_path.empty()) {
    gt = io::read_permutation(f.gt_path, std::make_pair(g.size(), h.size()));
  }
  if (config.relaxation == RelaxationKind::kPIW && f.l != g.size()) {
    throw std::invalid_argument("piw requires L = M");
  }
  const ProblemInstance instance(std::move(g), std::move(h), std::move(cost),
                                 f.l, f.alpha, gt);
  const MatchResult result = run_match(instance, config);

  Json j = io::match_result_to_json(result);
  j["relaxation"] = to_string(config.relaxation);
  j["direction"] = to_string(config.direction);
  if (gt) j["accuracy"] = accuracy(result.assignment, *gt);
  out << j.dump(2) << '\n';

  if (!f.trace_path.empty()) {
    std::ofstream trace(f.trace_path);
    if (!trace) throw io::FormatError("cannot write " + f.trace_path);
    io::write_trace_jsonl(trace, result.trace);
  }
  return result.discretized_by_fallback ? kExitFallback : kExitOk;
}

struct BenchFlags {
  std::string scenario = "noise";
  std::string mode = "wcs";
  int trials = 30;
  bool paper_scale = false;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 0;
  std::vector<std::string> methods;
};

int cmd_bench(const BenchFlags& f, const SolverFlags& solver, std::ostream& out,
              std::ostream& err) {
  ScenarioSpec spec = make_scenario(parse_scenario(f.scenario),
                                    parse_mode(f.mode), f.paper_scale, f.trials);
  spec.seed = f.seed;
  if (!f.methods.empty()) {
    std::vector<MethodVariant> chosen;
    for (const std::string& id : f.methods) {
      auto it = std::find_if(spec.methods.begin(), spec.methods.end(),
                             [&](const MethodVariant& m) { return m.id == id; });
      if (it == spec.methods.end()) {
        throw std::invalid_argument("unknown method '" + id + "' for mode " +
                                    f.mode);
      }
      chosen.push_back(*it);
    }
    spec.methods = std::move(chosen);
  }
  RunOptions options;
  options.threads = f.threads;
  options.progress = [&err](std::size_t done, std::size_t total) {
    err << "\r[" << done << "/" << total << "] trials" << std::flush;
    if (done == total) err << '\n';
  };
  const std::vector<TrialRecord> records =
      run_scenario(spec, solver.config(), options);

  fs::create_directories(f.out_dir);
  const fs::path csv = fs::path(f.out_dir) / "records.csv";
  std::ofstream records_out(csv);
  if (!records_out) throw io::FormatError("cannot write " + csv.string());
  io::write_records_csv(records_out, records);
  const fs::path summary = fs::path(f.out_dir) / "summary.json";
  io::write_json_file(summary, io::summary_to_json(aggregate(records)));

  std::size_t failed = 0;
  for (const TrialRecord& r : records) failed += r.failed() ? 1 : 0;
  out << "wrote " << records.size() << " records (" << failed
      << " failed) to " << csv.string() << " and " << summary.string() << '\n';
  return kExitOk;
}

struct OracleFlags {
  std::string instance_dir;
  int batch = 0;
  GeneratorFlags generator;
};

int cmd_oracle_check(const OracleFlags& f, const SolverFlags& solver,
                     std::ostream& out) {
  const SolverConfig config = solver.config();
  if (!f.instance_dir.empty()) {
    out << oracle_report(load_instance_dir(f.instance_dir), config).dump(2)
        << '\n';
    return kExitOk;
  }
  if (f.batch < 1) {
    throw std::invalid_argument("oracle-check needs --instance or --batch");
  }
  GeneratorParams params = f.generator.resolved();
  const std::uint64_t base_seed = params.seed;
  std::vector<double> ratios;
  int attained = 0, fallbacks = 0;
  for (int k = 0; k < f.batch; ++k) {
    params.seed = base_seed + static_cast<std::uint64_t>(k);
    const Json report = oracle_report(generate_instance(params), config);
    ratios.push_back(report["ratio"].get<double>());
    attained += report["attained"].get<bool>() ? 1 : 0;
    fallbacks += report["discretized_by_fallback"].get<bool>() ? 1 : 0;
  }
  std::sort(ratios.begin(), ratios.end());
  const double median =
      ratios.size() % 2 == 1
          ? ratios[ratios.size() / 2]
          : 0.5 * (ratios[ratios.size() / 2 - 1] + ratios[ratios.size() / 2]);
  Json j = {{"instances", f.batch},
            {"attained", attained},
            {"attainment_rate", static_cast<double>(attained) / f.batch},
            {"min_ratio", ratios.front()},
            {"median_ratio", median},
            {"max_ratio", ratios.back()},
            {"fallbacks", fallbacks}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_slope(const std::string& in_path, const std::string& method,
              std::ostream& out) {
  std::ifstream in(in_path);
  if (!in) throw io::FormatError("cannot open " + in_path);
  std::vector<TrialRecord> records = io::read_records_csv(in);
  if (!method.empty()) {
    std::erase_if(records, [&](const TrialRecord& r) { return r.method != method; });
    if (records.empty()) {
      throw std::invalid_argument("no records for method '" + method + "'");
    }
  }
  Json j = Json::object();
  for (const auto& [name, slope] : time_slopes(records)) j[name] = slope;
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace

ProblemInstance load_instance_dir(const fs::path& dir) {
  WeightedGraph g = io::read_graph(dir / "graph_g.json");
  WeightedGraph h = io::read_graph(dir / "graph_h.json");
  const Json params = io::read_json_file(dir / "params.json");
  if (!params.contains("L")) {
    throw io::FormatError((dir / "params.json").string() + ": missing L");
  }
  const int l = params.at("L").get<int>();
  const double alpha = params.value("alpha", 1.0);
  CostMatrix cost = fs::exists(dir / "cost.csv")
                        ? io::read_cost_csv(dir / "cost.csv")
                        : CostMatrix::zeros(g.size(), h.size());
  std::optional<PartialPermutation> gt;
  if (fs::exists(dir / "gt.json")) {
    gt = io::read_permutation(dir / "gt.json",
                              std::make_pair(g.size(), h.size()));
  }
  return ProblemInstance(std::move(g), std::move(h), std::move(cost), l, alpha,
                         std::move(gt));
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Weighted common subgraph matching"};
  app.require_subcommand(1);

  GeneratorFlags gen_flags;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a synthetic instance");
  gen_flags.attach(generate, true);
  generate->add_option("--out", gen_out, "output directory")->required();

  MatchFlags match_flags;
  SolverFlags match_solver;
  auto* match_cmd = app.add_subcommand("match", "match two graphs");
  match_cmd->set_help_flag("--help", "print this help message and exit");
  match_cmd->add_option("--g", match_flags.g_path, "graph G (JSON)")->required();
  match_cmd->add_option("--h", match_flags.h_path, "graph H (JSON)")->required();
  match_cmd->add_option("--cost", match_flags.cost_path, "M x N cost CSV");
  match_cmd->add_option("--l", match_flags.l, "matched vertices")->required();
  match_cmd->add_option("--alpha", match_flags.alpha, "structural weight")
      ->check(CLI::Range(0.0, 1.0));
  match_cmd->add_option("--trace", match_flags.trace_path, "JSON lines trace");
  match_cmd->add_option("--gt", match_flags.gt_path, "ground truth JSON");
  match_solver.attach(match_cmd);

  BenchFlags bench_flags;
  SolverFlags bench_solver;
  auto* bench = app.add_subcommand("bench", "run a synthetic scenario sweep");
  bench->add_option("--scenario", bench_flags.scenario)
      ->check(CLI::IsMember({"noise", "size", "outlier", "density"}));
  bench->add_option("--mode", bench_flags.mode)
      ->check(CLI::IsMember({"wcs", "piw"}));
  bench->add_option("--trials", bench_flags.trials)->check(CLI::PositiveNumber);
  bench->add_flag("--paper-scale", bench_flags.paper_scale,
                  "full-size grids instead of the desk grids");
  bench->add_option("--out", bench_flags.out_dir, "output directory")->required();
  bench->add_option("--seed", bench_flags.seed);
  bench->add_option("--threads", bench_flags.threads,
                    "worker threads (default WCS_MATCH_THREADS or all cores)");
  bench->add_option("--methods", bench_flags.methods, "subset of method ids")
      ->delimiter(',');
  bench_solver.attach(bench);

  OracleFlags oracle_flags;
  SolverFlags oracle_solver;
  auto* oracle = app.add_subcommand("oracle-check",
                                    "compare a match with brute force");
  oracle->add_option("--instance", oracle_flags.instance_dir,
                     "instance directory written by generate");
  oracle->add_option("--batch", oracle_flags.batch,
                     "generate and check this many instances instead");
  oracle_flags.generator.attach(oracle, false);
  oracle_solver.attach(oracle);

  std::string slope_in, slope_method;
  auto* slope = app.add_subcommand("slope", "log-log time slope per method");
  slope->add_option("--in", slope_in, "records.csv from bench")->required();
  slope->add_option("--method", slope_method);

  std::vector<const char*> argv{"wcs_match"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
  }

  try {
    if (*generate) return cmd_generate(gen_flags, gen_out, out);
    if (*match_cmd) return cmd_match(match_flags, match_solver, out);
    if (*bench) return cmd_bench(bench_flags, bench_solver, out, err);
    if (*oracle) return cmd_oracle_check(oracle_flags, oracle_solver, out);
    if (*slope) return cmd_slope(slope_in, slope_method, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace wcs::cli
