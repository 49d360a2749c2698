#include "wcs/gnccp.hpp"

#include "test_support.hpp"
#include "wcs/oracle.hpp"
#include "wcs/synthbench.hpp"

#include <gtest/gtest.h>

namespace wcs {
namespace {

using testing::random_adjacency;

ProblemInstance random_instance(int m, int n, int l, std::uint64_t seed,
                                double alpha = 1.0) {
  std::mt19937_64 rng(seed);
  const Matrix ag = random_adjacency(m, rng);
  const Matrix ah = random_adjacency(n, rng);
  return ProblemInstance(WeightedGraph(ag), WeightedGraph(ah),
                         CostMatrix(testing::random_matrix(m, n, rng, 0.0, 1.0)),
                         l, alpha);
}

// A copy of g embedded into a larger graph on randomly chosen vertices.
ProblemInstance planted_instance(int m, int n, std::uint64_t seed,
                                 PartialPermutation* truth) {
  std::mt19937_64 rng(seed);
  const Matrix ag = random_adjacency(m, rng);
  Matrix ah = random_adjacency(n, rng);
  *truth = testing::random_partial_permutation(m, n, m, rng);
  for (const auto& [i, j] : truth->pairs()) {
    for (const auto& [k, q] : truth->pairs()) ah(j, q) = ag(i, k);
  }
  return ProblemInstance(WeightedGraph(ag), WeightedGraph(ah),
                         CostMatrix::zeros(m, n), m, 1.0, *truth);
}

TEST(FwMinimize, ConvexEndReachesBarycenter) {
  const ProblemInstance inst = random_instance(3, 5, 2, 31);
  const Objective obj(inst, RelaxationKind::kH1);
  SolverConfig config;
  config.fw_max_iters = 2000;
  config.fw_gap_tol = 1e-10;
  config.line_search.kind = LineSearchKind::kExactQuartic;
  std::mt19937_64 rng(1);
  const Matrix x0 = testing::random_partial_permutation(3, 5, 2, rng).to_matrix();
  const FwOutcome out = fw_minimize(x0, obj, 1.0, config);
  const Matrix bary = RelaxedAssignment::uniform(3, 5, 2).entries();
  EXPECT_LT((out.x - bary).cwiseAbs().maxCoeff(), 1e-2);
  EXPECT_NEAR(out.value, bary.squaredNorm(), 1e-4);
}

TEST(FwMinimize, ConcaveEndStopsAtVertex) {
  const ProblemInstance inst = random_instance(3, 4, 2, 32);
  const Objective obj(inst, RelaxationKind::kH1);
  SolverConfig config;
  // The barycenter itself is stationary for -tr(X^T X); start off it.
  std::mt19937_64 rng(2);
  const Matrix x0 = testing::random_interior_point(3, 4, 2, rng);
  const FwOutcome out = fw_minimize(x0, obj, -1.0, config);
  EXPECT_TRUE(validate_partial_permutation(out.x, 2, kBinarityTol));
  EXPECT_NEAR(out.value, -2.0, 1e-9);
}

TEST(FwMinimize, ValuesNeverIncreaseAndIteratesStayFeasible) {
  for (auto kind : {RelaxationKind::kH1, RelaxationKind::kH2}) {
    for (double zeta : {0.8, 0.3, 0.0, -0.2, -0.7}) {
      const ProblemInstance inst = random_instance(5, 7, 3, 33);
      const Objective obj(inst, kind);
      SolverConfig config;
      config.relaxation = kind;
      const Matrix x0 = RelaxedAssignment::uniform(5, 7, 3).entries();
      const FwOutcome out = fw_minimize(x0, obj, zeta, config);
      for (std::size_t k = 1; k < out.values.size(); ++k) {
        EXPECT_LE(out.values[k], out.values[k - 1] + 1e-12);
      }
      EXPECT_TRUE(in_relaxed_polytope(out.x, 3, kFeasibilityTol));
      EXPECT_EQ(static_cast<int>(out.values.size()), out.iterations + 1);
    }
  }
}

TEST(FwMinimize, ExactLineSearchIsNoWorseOnFirstStep) {
  const ProblemInstance inst = random_instance(4, 6, 3, 34);
  const Objective obj(inst, RelaxationKind::kH1);
  SolverConfig back;
  back.fw_max_iters = 1;
  SolverConfig exact = back;
  exact.line_search.kind = LineSearchKind::kExactQuartic;
  const Matrix x0 = RelaxedAssignment::uniform(4, 6, 3).entries();
  for (double zeta : {0.5, 0.0, -0.5}) {
    EXPECT_LE(fw_minimize(x0, obj, zeta, exact).value,
              fw_minimize(x0, obj, zeta, back).value + 1e-12);
  }
}

TEST(SolverConfig, RejectsInvalidSettings) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.zeta_step = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.fw_max_iters = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.relaxation = RelaxationKind::kH2;
  c.line_search.kind = LineSearchKind::kExactQuartic;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Match, ReturnsPartialPermutationOfSizeL) {
  for (auto kind : {RelaxationKind::kH1, RelaxationKind::kH2}) {
    for (auto dir : {DirectionMethod::kExactFlow, DirectionMethod::kFastHungarian}) {
      const ProblemInstance inst = random_instance(5, 8, 3, 35, 0.7);
      SolverConfig config;
      config.relaxation = kind;
      config.direction = dir;
      const MatchResult r = match(inst, config);
      EXPECT_EQ(r.assignment.target_size(), 3);
      EXPECT_TRUE(validate_partial_permutation(r.assignment.to_matrix(), 3, kBinarityTol));
      EXPECT_NEAR(r.objective_f, true_objective(r.assignment.to_matrix(), inst), 1e-12);
      ASSERT_FALSE(r.trace.empty());
      EXPECT_DOUBLE_EQ(r.trace.front().zeta, 1.0);
      for (std::size_t k = 1; k < r.trace.size(); ++k) {
        EXPECT_LT(r.trace[k].zeta, r.trace[k - 1].zeta);
        EXPECT_GE(r.trace[k].zeta, -1.0);
      }
    }
  }
}

TEST(Match, IsDeterministic) {
  const ProblemInstance inst = random_instance(6, 9, 4, 36);
  SolverConfig config;
  const MatchResult a = match(inst, config);
  const MatchResult b = match(inst, config);
  EXPECT_EQ(a.assignment, b.assignment);
  EXPECT_EQ(a.trace, b.trace);
}

TEST(Match, RecoversIdenticalGraph) {
  std::mt19937_64 rng(37);
  const Matrix a = random_adjacency(6, rng);
  const ProblemInstance inst{WeightedGraph(a), WeightedGraph(a),
                             CostMatrix::zeros(6, 6), 6, 1.0};
  for (auto kind : {RelaxationKind::kH1, RelaxationKind::kH2, RelaxationKind::kPIW}) {
    SolverConfig config;
    config.relaxation = kind;
    const MatchResult r = match(inst, config);
    EXPECT_NEAR(r.objective_h0, 0.0, 1e-12) << to_string(kind);
  }
}

TEST(Match, RecoversPlantedPermutation) {
  PartialPermutation truth;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ProblemInstance inst = planted_instance(6, 6, seed, &truth);
    const MatchResult r = match_piw(inst, SolverConfig{});
    EXPECT_NEAR(r.objective_h0, 0.0, 1e-12);
    EXPECT_EQ(r.assignment, truth);
  }
}

// With spare vertices in H the relaxation has fractional near-minimizers, so
// recovery is not guaranteed; a zero-cost result must still be the planted one.
TEST(Match, PlantedSubgraphWithSpareVertices) {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PartialPermutation truth;
    const ProblemInstance inst = planted_instance(4, 5, seed, &truth);
    const MatchResult r = match_piw(inst, SolverConfig{});
    EXPECT_GE(r.objective_h0, 0.0);
    if (r.objective_h0 < 1e-12) {
      EXPECT_EQ(r.assignment, truth);
      ++recovered;
    }
  }
  EXPECT_GE(recovered, 5);
}

TEST(Match, LinearObjectiveGivesOptimalAssignment) {
  const ProblemInstance inst = random_instance(4, 5, 3, 39, 0.0);
  const MatchResult r = match(inst, SolverConfig{});
  const OracleResult best = brute_force_min(inst);
  EXPECT_NEAR(r.objective_f, best.best_value, 1e-9);
}

TEST(Match, NeverBeatsTheOracle) {
  for (int t = 0; t < 20; ++t) {
    const ProblemInstance inst = random_instance(4, 5, 3, 100 + t, 0.8);
    for (auto kind : {RelaxationKind::kH1, RelaxationKind::kH2}) {
      SolverConfig config;
      config.relaxation = kind;
      const MatchResult r = match(inst, config);
      EXPECT_GE(r.objective_f, brute_force_min(inst).best_value - 1e-12);
    }
  }
}

TEST(MatchPiw, AgreesWithH1WhenAllRowsMatch) {
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    const ProblemInstance inst = random_instance(5, 8, 5, seed);
    SolverConfig h1;
    const MatchResult a = match(inst, h1);
    const MatchResult b = match_piw(inst, h1);
    EXPECT_EQ(a.assignment, b.assignment);
  }
}

TEST(MatchPiw, RequiresFullRowMatching) {
  const ProblemInstance inst = random_instance(4, 6, 3, 46);
  EXPECT_THROW(match_piw(inst, SolverConfig{}), std::invalid_argument);
}

TEST(Match, ReportsFallbackWhenContinuationIsCut) {
  // A single zeta step of 2 jumps from the convex end straight to -1; the
  // outcome is still a valid partial permutation.
  const ProblemInstance inst = random_instance(4, 6, 3, 47);
  SolverConfig config;
  config.zeta_step = 2.0;
  config.fw_max_iters = 1;
  const MatchResult r = match(inst, config);
  EXPECT_EQ(r.assignment.target_size(), 3);
  EXPECT_LE(r.trace.size(), 2u);
}

}  // namespace
}  // namespace wcs
