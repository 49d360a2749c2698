#include "wcs/oracle.hpp"

#include "test_support.hpp"
#include "wcs/objective.hpp"

#include <gtest/gtest.h>

#include <set>

namespace wcs {
namespace {

std::uint64_t count_by_visiting(int m, int n, int l) {
  std::uint64_t count = 0;
  std::set<std::vector<std::pair<int, int>>> seen;
  enumerate_partial_permutations(m, n, l, [&](const PartialPermutation& p) {
    ++count;
    EXPECT_TRUE(validate_partial_permutation(p.to_matrix(), l, kBinarityTol));
    EXPECT_TRUE(seen.insert(p.pairs()).second);
  });
  return count;
}

TEST(CountPartialPermutations, SmallCases) {
  EXPECT_EQ(count_partial_permutations(2, 2, 2), 2u);
  EXPECT_EQ(count_partial_permutations(2, 3, 2), 6u);
  EXPECT_EQ(count_partial_permutations(3, 3, 2), 18u);
  EXPECT_EQ(count_partial_permutations(3, 4, 2), 36u);
  EXPECT_EQ(count_partial_permutations(1, 1, 1), 1u);
  EXPECT_EQ(count_partial_permutations(40, 60, 30),
            std::numeric_limits<std::uint64_t>::max());
}

TEST(EnumeratePartialPermutations, VisitsEachMemberOnce) {
  for (int m = 1; m <= 4; ++m) {
    for (int n = m; n <= 5; ++n) {
      for (int l = 1; l <= m; ++l) {
        EXPECT_EQ(count_by_visiting(m, n, l), count_partial_permutations(m, n, l))
            << m << "x" << n << " L=" << l;
      }
    }
  }
}

TEST(EnumeratePartialPermutations, RejectsBadShapesAndHugeSpaces) {
  auto noop = [](const PartialPermutation&) {};
  EXPECT_THROW(enumerate_partial_permutations(3, 2, 1, noop), std::invalid_argument);
  EXPECT_THROW(enumerate_partial_permutations(2, 3, 3, noop), std::invalid_argument);
  EXPECT_THROW(enumerate_partial_permutations(2, 3, 0, noop), std::invalid_argument);
  EXPECT_THROW(enumerate_partial_permutations(12, 12, 12, noop), std::length_error);
  EXPECT_THROW(enumerate_partial_permutations(3, 4, 2, noop, 10), std::length_error);
}

TEST(BruteForceMin, HandComputedPair) {
  const Matrix a = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  const ProblemInstance inst(WeightedGraph(a), WeightedGraph(2.0 * a),
                             CostMatrix::zeros(2, 2), 2, 1.0);
  const OracleResult r = brute_force_min(inst);
  EXPECT_DOUBLE_EQ(r.best_value, 2.0);
  EXPECT_EQ(r.num_candidates, 2u);
  EXPECT_EQ(r.num_optima, 2u);
  EXPECT_EQ(r.best_assignment, PartialPermutation(2, 2, {{0, 0}, {1, 1}}));
}

TEST(BruteForceMin, IsNoWorseThanAnyMember) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix ag = testing::random_adjacency(3, rng);
    const Matrix ah = testing::random_adjacency(5, rng);
    const ProblemInstance inst(WeightedGraph(ag), WeightedGraph(ah),
                               CostMatrix(testing::random_matrix(3, 5, rng)), 2,
                               0.6);
    const OracleResult r = brute_force_min(inst);
    EXPECT_EQ(r.num_candidates, count_partial_permutations(3, 5, 2));
    EXPECT_GE(r.num_optima, 1u);
    EXPECT_NEAR(true_objective(r.best_assignment.to_matrix(), inst), r.best_value, 1e-12);
    enumerate_partial_permutations(3, 5, 2, [&](const PartialPermutation& p) {
      EXPECT_GE(true_objective(p.to_matrix(), inst), r.best_value - 1e-12);
    });
  }
}

TEST(BruteForceMin, FindsPlantedCopy) {
  std::mt19937_64 rng(52);
  const Matrix ag = testing::random_adjacency(3, rng);
  Matrix ah = testing::random_adjacency(5, rng);
  const PartialPermutation truth(3, 5, {{0, 4}, {1, 0}, {2, 2}});
  for (const auto& [i, j] : truth.pairs()) {
    for (const auto& [k, q] : truth.pairs()) ah(j, q) = ag(i, k);
  }
  const ProblemInstance inst(WeightedGraph(ag), WeightedGraph(ah),
                             CostMatrix::zeros(3, 5), 3, 1.0);
  const OracleResult r = brute_force_min(inst);
  EXPECT_EQ(r.best_value, 0.0);
}

}  // namespace
}  // namespace wcs
