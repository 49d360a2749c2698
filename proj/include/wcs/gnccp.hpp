#pragma once

#include "wcs/direction.hpp"
#include "wcs/objective.hpp"
#include "wcs/types.hpp"

#include <chrono>
#include <cstdint>
#include <vector>

namespace wcs {

enum class LineSearchKind {
  kBacktracking,
  // Minimizes J(X + t d) exactly on [0, 1]. The restriction is a quartic in t
  // for H1 and PIW; not available for H2 (degree six).
  kExactQuartic,
};

struct LineSearchParams {
  LineSearchKind kind = LineSearchKind::kBacktracking;
  double shrink = 0.5;
  double armijo = 1e-4;
  int max_halvings = 30;
};

struct SolverConfig {
  RelaxationKind relaxation = RelaxationKind::kH1;
  DirectionMethod direction = DirectionMethod::kExactFlow;
  double zeta_step = 0.01;
  int fw_max_iters = 100;
  // Relative Frank-Wolfe duality gap: stop when gap <= tol * (1 + |J|).
  double fw_gap_tol = 1e-4;
  LineSearchParams line_search;
  double binarity_tol = kBinarityTol;
  // Reproduce grad F = grad H + (1 - alpha) C instead of the true derivative.
  bool literal_structural_gradient = false;
  // The solver is deterministic; the seed is carried for bookkeeping.
  std::uint64_t seed = 0;

  // Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct TraceStep {
  double zeta = 0.0;
  double value = 0.0;  // J at the end of the Frank-Wolfe run
  int fw_iterations = 0;
  double gap = 0.0;
  double binarity = 0.0;  // binarity_gap of the iterate

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct FwOutcome {
  Matrix x;
  int iterations = 0;
  double gap = 0.0;
  double value = 0.0;
  // J before the first step followed by J after every accepted step.
  std::vector<double> values;
};

struct MatchResult {
  PartialPermutation assignment;
  double objective_h0 = 0.0;
  double objective_f = 0.0;
  std::vector<TraceStep> trace;
  bool discretized_by_fallback = false;
  std::chrono::duration<double> wall_time{};
};

// Frank-Wolfe minimization of J at a fixed zeta, starting from x0 in D.
FwOutcome fw_minimize(const Matrix& x0, const Objective& objective,
                      double zeta, const SolverConfig& config);

// Continuation from the barycenter at zeta = 1 down to zeta = -1, stopping
// early once the iterate rounds onto P.
MatchResult match(const ProblemInstance& instance, const SolverConfig& config);

// match with the part-in-whole objective; requires L = M.
MatchResult match_piw(const ProblemInstance& instance, SolverConfig config);

}  // namespace wcs
