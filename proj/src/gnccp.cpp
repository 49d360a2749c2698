#include "wcs/gnccp.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace wcs {
namespace {

struct Step {
  double size = 0.0;
  double value = 0.0;
};

Step backtracking(const Objective& objective, double zeta, const Matrix& x,
                  const Matrix& d, double value, double slope,
                  const LineSearchParams& params) {
  double t = 1.0;
  for (int k = 0; k <= params.max_halvings; ++k) {
    const double trial = objective.j(x + t * d, zeta);
    if (trial <= value + params.armijo * t * slope) return {t, trial};
    t *= params.shrink;
  }
  return {0.0, value};
}

// J(x + t d) restricted to t in [0, 1] is a quartic for H1 and PIW. Recover
// its coefficients from five samples, then compare the endpoints with every
// stationary point in between.
Step exact_quartic(const Objective& objective, double zeta, const Matrix& x,
                   const Matrix& d, double value) {
  constexpr std::array<double, 5> nodes = {0.0, 0.25, 0.5, 0.75, 1.0};
  Eigen::Matrix<double, 5, 5> vandermonde;
  Eigen::Matrix<double, 5, 1> samples;
  for (int r = 0; r < 5; ++r) {
    double p = 1.0;
    for (int c = 0; c < 5; ++c) {
      vandermonde(r, c) = p;
      p *= nodes[r];
    }
    samples(r) = r == 0 ? value : objective.j(x + nodes[r] * d, zeta);
  }
  const Eigen::Matrix<double, 5, 1> coef =
      vandermonde.fullPivLu().solve(samples);
  auto derivative = [&](double t) {
    return coef(1) + t * (2.0 * coef(2) + t * (3.0 * coef(3) + t * 4.0 * coef(4)));
  };

  Step best{0.0, value};
  auto consider = [&](double t) {
    const double v = objective.j(x + t * d, zeta);
    if (v < best.value) best = {t, v};
  };
  if (samples(4) < best.value) best = {1.0, samples(4)};

  constexpr int kIntervals = 64;
  double lo = 0.0;
  double dlo = derivative(lo);
  for (int k = 1; k <= kIntervals; ++k) {
    const double hi = static_cast<double>(k) / kIntervals;
    const double dhi = derivative(hi);
    // A minimum of the quartic: derivative crosses from negative to positive.
    if (dlo < 0.0 && dhi >= 0.0) {
      double a = lo, b = hi;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        (derivative(mid) < 0.0 ? a : b) = mid;
      }
      consider(0.5 * (a + b));
    }
    lo = hi;
    dlo = dhi;
  }
  return best;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(zeta_step > 0.0 && zeta_step <= 2.0)) {
    throw std::invalid_argument("zeta step must lie in (0, 2]");
  }
  if (fw_max_iters < 1) {
    throw std::invalid_argument("fw_max_iters must be positive");
  }
  if (!(fw_gap_tol > 0.0) || !(binarity_tol > 0.0) || binarity_tol >= 0.5) {
    throw std::invalid_argument("tolerances must be positive (binarity < 0.5)");
  }
  if (!(line_search.shrink > 0.0 && line_search.shrink < 1.0) ||
      !(line_search.armijo > 0.0 && line_search.armijo < 1.0) ||
      line_search.max_halvings < 0) {
    throw std::invalid_argument("invalid line search parameters");
  }
  if (line_search.kind == LineSearchKind::kExactQuartic &&
      relaxation == RelaxationKind::kH2) {
    throw std::invalid_argument("exact line search supports h1 and piw only");
  }
}

FwOutcome fw_minimize(const Matrix& x0, const Objective& objective,
                      double zeta, const SolverConfig& config) {
  const int target = objective.instance().target_size();
  FwOutcome out;
  out.x = x0;
  out.value = objective.j(out.x, zeta);
  out.values.push_back(out.value);

  for (int it = 0; it < config.fw_max_iters; ++it) {
    const Matrix grad = objective.grad_j(out.x, zeta);
    const Matrix y =
        solve_direction(-grad, target, config.direction).to_matrix();
    const Matrix d = y - out.x;
    const double slope = grad.cwiseProduct(d).sum();
    out.gap = -slope;
    if (out.gap <= config.fw_gap_tol * (1.0 + std::abs(out.value))) break;

    const Step step =
        config.line_search.kind == LineSearchKind::kExactQuartic
            ? exact_quartic(objective, zeta, out.x, d, out.value)
            : backtracking(objective, zeta, out.x, d, out.value, slope,
                           config.line_search);
    if (step.size <= 0.0) break;
    out.x += step.size * d;
    out.value = step.value;
    out.values.push_back(out.value);
    ++out.iterations;
  }
  return out;
}

MatchResult match(const ProblemInstance& instance,
                  const SolverConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Objective objective(instance, config.relaxation,
                            config.literal_structural_gradient);
  const int target = instance.target_size();

  MatchResult result;
  Matrix x = RelaxedAssignment::uniform(instance.m(), instance.n(), target)
                 .entries();
  bool in_p = false;
  for (int k = 0;; ++k) {
    double zeta = 1.0 - k * config.zeta_step;
    if (zeta < -1.0 - 1e-9) break;
    zeta = std::max(zeta, -1.0);

    FwOutcome fw = fw_minimize(x, objective, zeta, config);
    x = std::move(fw.x);
    result.trace.push_back(
        {zeta, fw.value, fw.iterations, fw.gap, binarity_gap(x)});
    if (validate_partial_permutation(x, target, config.binarity_tol)) {
      in_p = true;
      break;
    }
  }

  result.assignment = in_p ? PartialPermutation::from_matrix(
                                 x, target, config.binarity_tol)
                           : discretize(x, target);
  result.discretized_by_fallback = !in_p;
  const Matrix y = result.assignment.to_matrix();
  result.objective_h0 = eval_h0(y, instance.graph_g().adjacency(),
                                instance.graph_h().adjacency());
  result.objective_f = true_objective(y, instance);
  result.wall_time = std::chrono::steady_clock::now() - start;
  return result;
}

MatchResult match_piw(const ProblemInstance& instance, SolverConfig config) {
  if (instance.target_size() != instance.m()) {
    throw std::invalid_argument("piw requires L = M");
  }
  config.relaxation = RelaxationKind::kPIW;
  MatchResult result = match(instance, config);
  for (int i = 0; i < result.assignment.rows(); ++i) {
    if (!result.assignment.row_matched(i)) {
      throw std::logic_error("part-in-whole result left a row unmatched");
    }
  }
  return result;
}

}  // namespace wcs
