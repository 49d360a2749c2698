#include "wcs/synthbench.hpp"

#include "wcs/objective.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <utility>

namespace wcs {
namespace {

using Pair = std::pair<int, int>;
using EdgeSet = std::vector<std::vector<char>>;

std::vector<Pair> all_pairs(int n) {
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

int target_edges(int n, double density) {
  return static_cast<int>(std::lround(density * n * (n - 1) / 2.0));
}

void set_edge(EdgeSet& e, int i, int j, char on) { e[i][j] = e[j][i] = on; }

int count_edges(const EdgeSet& e) {
  int count = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) count += e[i][j];
  }
  return count;
}

// Adds and removes random edges. Additions are drawn from the pairs that were
// non-edges before the perturbation, removals from the original edges, so
// the two never cancel. Both shuffles happen regardless of sigma to keep the
// random stream aligned across noise levels.
void perturb(EdgeSet& e, double sigma, PerturbationCount mode,
             std::mt19937_64& rng) {
  const int n = static_cast<int>(e.size());
  std::vector<Pair> present, absent;
  for (const Pair& p : all_pairs(n)) {
    (e[p.first][p.second] ? present : absent).push_back(p);
  }
  std::shuffle(present.begin(), present.end(), rng);
  std::shuffle(absent.begin(), absent.end(), rng);

  const int k = static_cast<int>(
      std::ceil(0.5 * sigma * static_cast<double>(present.size()) - 1e-12));
  int n_add = k;
  int n_remove = k;
  if (mode == PerturbationCount::kTotal) {
    n_add = k / 2;
    n_remove = k - n_add;
  }
  n_add = std::min<int>(n_add, static_cast<int>(absent.size()));
  n_remove = std::min<int>(n_remove, static_cast<int>(present.size()));
  for (int t = 0; t < n_remove; ++t) {
    set_edge(e, present[t].first, present[t].second, 0);
  }
  for (int t = 0; t < n_add; ++t) {
    set_edge(e, absent[t].first, absent[t].second, 1);
  }
}

Matrix weighted_adjacency(const EdgeSet& e, const Matrix& points) {
  const int n = static_cast<int>(e.size());
  Matrix a = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (e[i][j]) a(i, j) = a(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return a;
}

std::uint64_t trial_seed(std::uint64_t scenario_seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(scenario_seed),
                    static_cast<std::uint32_t>(scenario_seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<double> grid(double from, double to, double step) {
  std::vector<double> values;
  const int count = static_cast<int>(std::lround((to - from) / step));
  for (int k = 0; k <= count; ++k) {
    // Rounded to suppress representation noise in CSV and JSON output.
    values.push_back(std::round((from + k * step) * 1e9) / 1e9);
  }
  return values;
}

}  // namespace

void GeneratorParams::validate() const {
  if (m < 1 || n < 1) throw std::invalid_argument("M and N must be positive");
  if (m > n) throw std::invalid_argument("M must be ≤ N");
  if (l < 1 || l > m) throw std::invalid_argument("L must satisfy 1 ≤ L ≤ M");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be >= 0");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1]");
  }
}

ProblemInstance generate_instance(const GeneratorParams& params) {
  params.validate();
  const int m = params.m;
  const int n = params.n;
  const int l = params.l;
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix h_points(n, 2);
  for (int j = 0; j < n; ++j) {
    h_points(j, 0) = unit(rng);
    h_points(j, 1) = unit(rng);
  }

  std::vector<int> rows(m), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  std::vector<int> partner(m, -1);
  std::vector<Pair> gt_pairs;
  for (int k = 0; k < l; ++k) {
    partner[rows[k]] = cols[k];
    gt_pairs.emplace_back(rows[k], cols[k]);
  }

  Matrix g_points(m, 2);
  for (int i = 0; i < m; ++i) {
    if (partner[i] >= 0) {
      for (int c = 0; c < 2; ++c) {
        g_points(i, c) = h_points(partner[i], c) + params.sigma * gauss(rng);
      }
    } else {
      g_points(i, 0) = unit(rng);
      g_points(i, 1) = unit(rng);
    }
  }

  EdgeSet g_edges(m, std::vector<char>(m, 0));
  std::vector<Pair> g_pairs = all_pairs(m);
  std::shuffle(g_pairs.begin(), g_pairs.end(), rng);
  const int g_target = target_edges(m, params.density);
  for (int t = 0; t < g_target; ++t) {
    set_edge(g_edges, g_pairs[t].first, g_pairs[t].second, 1);
  }

  EdgeSet h_edges(n, std::vector<char>(n, 0));
  std::vector<char> h_matched(n, 0);
  for (const auto& [i, j] : gt_pairs) h_matched[j] = 1;
  for (const auto& [i, j] : gt_pairs) {
    for (const auto& [k, q] : gt_pairs) {
      if (i < k && g_edges[i][k]) set_edge(h_edges, j, q, 1);
    }
  }
  std::vector<Pair> h_free;
  for (const Pair& p : all_pairs(n)) {
    if (!(h_matched[p.first] && h_matched[p.second])) h_free.push_back(p);
  }
  std::shuffle(h_free.begin(), h_free.end(), rng);
  const int h_missing = std::clamp(
      target_edges(n, params.density) - count_edges(h_edges), 0,
      static_cast<int>(h_free.size()));
  for (int t = 0; t < h_missing; ++t) {
    set_edge(h_edges, h_free[t].first, h_free[t].second, 1);
  }

  if (params.perturb_edges) {
    perturb(g_edges, params.sigma, params.perturbation, rng);
    perturb(h_edges, params.sigma, params.perturbation, rng);
  }

  WeightedGraph g(weighted_adjacency(g_edges, g_points), g_points);
  WeightedGraph h(weighted_adjacency(h_edges, h_points), h_points);
  return ProblemInstance(std::move(g), std::move(h), CostMatrix::zeros(m, n),
                         l, 1.0, PartialPermutation(m, n, gt_pairs));
}

double accuracy(const PartialPermutation& predicted,
                const PartialPermutation& ground_truth) {
  if (predicted.rows() != ground_truth.rows() ||
      predicted.cols() != ground_truth.cols()) {
    throw std::invalid_argument("accuracy: dimension mismatch");
  }
  if (predicted.target_size() != ground_truth.target_size()) {
    throw std::invalid_argument("accuracy: mismatched L");
  }
  int hits = 0;
  for (int i = 0; i < predicted.rows(); ++i) {
    if (predicted.row_matched(i) && predicted.col_of(i) == ground_truth.col_of(i)) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / ground_truth.target_size();
}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kNoiseLevel: return "noise";
    case ScenarioKind::kProblemSize: return "size";
    case ScenarioKind::kOutlierNumber: return "outlier";
    case ScenarioKind::kEdgeDensity: return "density";
  }
  return "?";
}

std::string_view to_string(ProblemMode mode) {
  return mode == ProblemMode::kWcs ? "wcs" : "piw";
}

ScenarioKind parse_scenario(std::string_view name) {
  if (name == "noise") return ScenarioKind::kNoiseLevel;
  if (name == "size") return ScenarioKind::kProblemSize;
  if (name == "outlier") return ScenarioKind::kOutlierNumber;
  if (name == "density") return ScenarioKind::kEdgeDensity;
  throw std::invalid_argument("unknown scenario '" + std::string(name) + "'");
}

ProblemMode parse_mode(std::string_view name) {
  if (name == "wcs") return ProblemMode::kWcs;
  if (name == "piw") return ProblemMode::kPiw;
  throw std::invalid_argument("unknown mode '" + std::string(name) + "'");
}

std::vector<MethodVariant> default_methods(ProblemMode mode) {
  using R = RelaxationKind;
  using D = DirectionMethod;
  if (mode == ProblemMode::kPiw) {
    return {{"piw", R::kPIW, D::kExactFlow},
            {"h1-exact", R::kH1, D::kExactFlow},
            {"h2-exact", R::kH2, D::kExactFlow}};
  }
  return {{"h1-exact", R::kH1, D::kExactFlow},
          {"h2-exact", R::kH2, D::kExactFlow},
          {"h1-fast", R::kH1, D::kFastHungarian},
          {"h2-fast", R::kH2, D::kFastHungarian}};
}

ScenarioSpec make_scenario(ScenarioKind kind, ProblemMode mode,
                           bool paper_scale, int trials) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  ScenarioSpec spec;
  spec.kind = kind;
  spec.mode = mode;
  spec.trials = trials;
  spec.methods = default_methods(mode);
  spec.base.sigma = 0.05;
  spec.base.density = 0.5;

  if (mode == ProblemMode::kWcs) {
    const int m = paper_scale ? 30 : 16;
    spec.base.m = m;
    spec.base.n = m + 5;
    spec.base.l = m - 5;
    switch (kind) {
      case ScenarioKind::kNoiseLevel: spec.sweep = grid(0.0, 0.1, 0.01); break;
      case ScenarioKind::kProblemSize:
        spec.sweep = paper_scale ? grid(20, 40, 2) : grid(10, 24, 2);
        break;
      case ScenarioKind::kOutlierNumber: spec.sweep = grid(m, m - 10, -1); break;
      case ScenarioKind::kEdgeDensity: spec.sweep = grid(0.1, 1.0, 0.1); break;
    }
  } else {
    const int n = paper_scale ? 50 : 21;
    spec.base.n = n;
    spec.base.m = n - 5;
    spec.base.l = n - 5;
    switch (kind) {
      case ScenarioKind::kNoiseLevel: spec.sweep = grid(0.0, 0.1, 0.01); break;
      case ScenarioKind::kProblemSize:
        spec.sweep = paper_scale ? grid(40, 60, 2) : grid(14, 28, 2);
        break;
      case ScenarioKind::kOutlierNumber: spec.sweep = grid(n, n - 10, -1); break;
      case ScenarioKind::kEdgeDensity: spec.sweep = grid(0.1, 1.0, 0.1); break;
    }
  }
  return spec;
}

GeneratorParams point_params(const ScenarioSpec& spec, double value,
                             int trial) {
  GeneratorParams p = spec.base;
  const int iv = static_cast<int>(std::lround(value));
  const bool wcs = spec.mode == ProblemMode::kWcs;
  switch (spec.kind) {
    case ScenarioKind::kNoiseLevel: p.sigma = value; break;
    case ScenarioKind::kProblemSize:
      if (wcs) {
        p.m = iv;
        p.n = iv + 5;
        p.l = iv - 5;
      } else {
        p.n = iv;
        p.m = p.l = iv - 5;
      }
      break;
    case ScenarioKind::kOutlierNumber:
      p.l = iv;
      if (!wcs) p.m = iv;
      break;
    case ScenarioKind::kEdgeDensity: p.density = value; break;
  }
  p.seed = trial_seed(spec.seed, trial);
  return p;
}

int default_thread_count() {
  if (const char* env = std::getenv("WCS_MATCH_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec,
                                      const SolverConfig& base_config,
                                      const RunOptions& options) {
  if (spec.sweep.empty() || spec.methods.empty() || spec.trials < 1) {
    throw std::invalid_argument("scenario needs sweep values, methods, trials");
  }
  base_config.validate();
  const std::size_t n_methods = spec.methods.size();
  const std::size_t n_tasks = spec.sweep.size() * spec.trials;
  std::vector<TrialRecord> records(n_tasks * n_methods);

  auto run_task = [&](std::size_t task) {
    const std::size_t point = task / spec.trials;
    const int trial = static_cast<int>(task % spec.trials);
    const double value = spec.sweep[point];
    const GeneratorParams params = point_params(spec, value, trial);

    std::optional<ProblemInstance> instance;
    std::string generation_error;
    try {
      instance.emplace(generate_instance(params));
    } catch (const std::exception& e) {
      generation_error = e.what();
    }

    for (std::size_t k = 0; k < n_methods; ++k) {
      const MethodVariant& method = spec.methods[k];
      TrialRecord& rec = records[task * n_methods + k];
      rec.scenario = to_string(spec.kind);
      rec.mode = to_string(spec.mode);
      rec.sweep_value = value;
      rec.trial = trial;
      rec.method = method.id;
      rec.params = params;
      if (!instance) {
        rec.error = generation_error;
        continue;
      }
      try {
        SolverConfig config = base_config;
        config.relaxation = method.relaxation;
        config.direction = method.direction;
        config.seed = params.seed;
        const MatchResult result =
            method.relaxation == RelaxationKind::kPIW
                ? match_piw(*instance, config)
                : match(*instance, config);
        rec.accuracy = accuracy(result.assignment, *instance->ground_truth());
        rec.objective = result.objective_f;
        rec.wall_time_s = result.wall_time.count();
        rec.fallback = result.discretized_by_fallback;
      } catch (const std::exception& e) {
        rec.error = e.what();
        if (rec.error.empty()) rec.error = "unknown error";
      }
    }
  };

  const int threads = std::max(
      1, std::min<int>(options.threads > 0 ? options.threads
                                           : default_thread_count(),
                       static_cast<int>(n_tasks)));
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      run_task(task);
      const std::size_t finished = ++done;
      if (options.progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        options.progress(finished, n_tasks);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  // Preserve first-seen order of (sweep value, method).
  std::vector<SummaryRow> rows;
  std::map<std::pair<double, std::string>, std::size_t> index;
  std::vector<std::vector<const TrialRecord*>> members;
  for (const TrialRecord& r : records) {
    const auto key = std::make_pair(r.sweep_value, r.method);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      SummaryRow row;
      row.scenario = r.scenario;
      row.mode = r.mode;
      row.sweep_value = r.sweep_value;
      row.method = r.method;
      rows.push_back(row);
      members.emplace_back();
    }
    members[it->second].push_back(&r);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    SummaryRow& row = rows[k];
    double sum_acc = 0.0, sum_time = 0.0;
    for (const TrialRecord* r : members[k]) {
      if (r->failed()) {
        ++row.failed;
        continue;
      }
      ++row.trials;
      sum_acc += r->accuracy;
      sum_time += r->wall_time_s;
    }
    if (row.trials == 0) continue;
    row.mean_acc = sum_acc / row.trials;
    row.mean_time = sum_time / row.trials;
    double ss = 0.0;
    for (const TrialRecord* r : members[k]) {
      if (!r->failed()) ss += (r->accuracy - row.mean_acc) * (r->accuracy - row.mean_acc);
    }
    row.std_acc = row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) : 0.0;
  }
  return rows;
}

double fit_time_slope(std::span<const double> sizes,
                      std::span<const double> times) {
  if (sizes.size() != times.size()) {
    throw std::invalid_argument("sizes and times differ in length");
  }
  if (sizes.size() < 4) {
    throw std::invalid_argument("slope fit needs at least four points");
  }
  const std::size_t n = sizes.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(sizes[k] > 0.0) || !(times[k] > 0.0)) {
      throw std::invalid_argument("sizes and times must be positive");
    }
    xs[k] = std::log(sizes[k]);
    ys[k] = std::log(times[k]);
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  if (sxx <= 1e-300) throw std::invalid_argument("degenerate size range");
  return sxy / sxx;
}

std::map<std::string, double> time_slopes(
    const std::vector<TrialRecord>& records) {
  const std::vector<SummaryRow> rows = aggregate(records);
  std::map<std::string, double> slopes;
  for (const SummaryRow& row : rows) slopes[row.method] = 0.0;
  for (auto& [method, slope] : slopes) {
    std::vector<double> sizes, times;
    for (const SummaryRow& row : rows) {
      if (row.method != method || row.trials == 0) continue;
      sizes.push_back(row.sweep_value);
      times.push_back(row.mean_time);
    }
    slope = fit_time_slope(sizes, times);
  }
  return slopes;
}

}  // namespace wcs
