#pragma once

#include "wcs/gnccp.hpp"
#include "wcs/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wcs {

// How many edges the structural perturbation touches per graph, with
// k = ceil(sigma * #Edge / 2):
//   kEach:  k edges added and k edges removed.
//   kTotal: k edge edits in all, split between additions and removals.
enum class PerturbationCount { kEach, kTotal };

struct GeneratorParams {
  int m = 0;
  int n = 0;
  int l = 0;
  double sigma = 0.0;
  double density = 1.0;
  std::uint64_t seed = 0;
  PerturbationCount perturbation = PerturbationCount::kEach;
  bool perturb_edges = true;

  void validate() const;
};

// Random point-set instance with a planted partial permutation.
//
// H gets N uniform points in the unit square. A random ground truth picks L
// rows of G and L columns of H; matched G points are copies of their H
// partner plus N(0, sigma^2) noise per coordinate, the rest are fresh uniform
// points. G keeps a uniform random subset of round(density * M(M-1)/2) vertex
// pairs as edges; H copies that pattern on the matched vertices and fills the
// remaining pairs up to round(density * N(N-1)/2). Each graph then has
// ceil(sigma * #Edge / 2) edges added and removed at random. Edge weights are
// Euclidean distances. alpha = 1 and C = 0; the points are kept as labels.
ProblemInstance generate_instance(const GeneratorParams& params);

// Fraction of the ground truth pairs that the prediction reproduces.
double accuracy(const PartialPermutation& predicted,
                const PartialPermutation& ground_truth);

enum class ScenarioKind { kNoiseLevel, kProblemSize, kOutlierNumber, kEdgeDensity };
enum class ProblemMode { kWcs, kPiw };

std::string_view to_string(ScenarioKind kind);
std::string_view to_string(ProblemMode mode);
ScenarioKind parse_scenario(std::string_view name);
ProblemMode parse_mode(std::string_view name);

struct MethodVariant {
  std::string id;
  RelaxationKind relaxation = RelaxationKind::kH1;
  DirectionMethod direction = DirectionMethod::kExactFlow;
};

// WCS: h1-exact, h2-exact, h1-fast, h2-fast. PIW: piw, h1-exact, h2-exact.
std::vector<MethodVariant> default_methods(ProblemMode mode);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kNoiseLevel;
  ProblemMode mode = ProblemMode::kWcs;
  std::vector<double> sweep;
  int trials = 30;
  GeneratorParams base;
  std::vector<MethodVariant> methods;
  std::uint64_t seed = 1;
};

// Sweep grids of the synthetic protocol. paper_scale selects the full sizes
// (WCS M = 30, PIW N = 50); otherwise a smaller desk grid (WCS M = 16,
// PIW N = 21) with the same structure.
ScenarioSpec make_scenario(ScenarioKind kind, ProblemMode mode,
                           bool paper_scale, int trials);

// Generator parameters for one sweep value and trial. The trial seed depends
// on the scenario seed and trial index only, so sweep points are paired.
GeneratorParams point_params(const ScenarioSpec& spec, double sweep_value,
                             int trial);

struct TrialRecord {
  std::string scenario;
  std::string mode;
  double sweep_value = 0.0;
  int trial = 0;
  std::string method;
  GeneratorParams params;
  double accuracy = 0.0;
  double objective = 0.0;
  double wall_time_s = 0.0;
  bool fallback = false;
  std::string error;  // non-empty when the trial failed

  bool failed() const { return !error.empty(); }
};

struct RunOptions {
  // 0 = default_thread_count().
  int threads = 0;
  std::function<void(std::size_t done, std::size_t total)> progress;
};

// WCS_MATCH_THREADS if set and positive, else the hardware concurrency.
int default_thread_count();

// One record per sweep value x trial x method, in that order. Failed trials
// are recorded with their error message.
std::vector<TrialRecord> run_scenario(const ScenarioSpec& spec,
                                      const SolverConfig& base_config,
                                      const RunOptions& options = {});

struct SummaryRow {
  std::string scenario;
  std::string mode;
  double sweep_value = 0.0;
  std::string method;
  double mean_acc = 0.0;
  double std_acc = 0.0;
  double mean_time = 0.0;
  int trials = 0;
  int failed = 0;
};

// Mean and sample standard deviation per (sweep value, method), over the
// successful trials.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

// Least-squares slope of log(time) against log(size). Needs at least four
// points, positive values and more than one distinct size.
double fit_time_slope(std::span<const double> sizes,
                      std::span<const double> times);

// fit_time_slope per method, averaging the wall time of each sweep value.
std::map<std::string, double> time_slopes(
    const std::vector<TrialRecord>& records);

}  // namespace wcs
