#include "wcs/types.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

namespace wcs {
namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(ValidatePartialPermutation, AcceptsBinaryFeasiblePoint) {
  EXPECT_TRUE(validate_partial_permutation(mat({{1, 0, 0}, {0, 1, 0}}), 2, 1e-3));
}

TEST(ValidatePartialPermutation, RejectsFractionalEntries) {
  EXPECT_FALSE(
      validate_partial_permutation(mat({{0.5, 0.5, 0}, {0, 0, 1}}), 2, 1e-3));
}

TEST(ValidatePartialPermutation, RejectsColumnSumTwo) {
  EXPECT_FALSE(validate_partial_permutation(mat({{1, 0, 0}, {1, 0, 0}}), 2, 1e-3));
}

TEST(ValidatePartialPermutation, RejectsWrongTotal) {
  EXPECT_FALSE(validate_partial_permutation(mat({{1, 0, 0}, {0, 1, 0}}), 1, 1e-3));
}

TEST(ValidatePartialPermutation, AcceptsWithinToleranceOnly) {
  Matrix x = mat({{1, 0, 0}, {0, 1, 0}});
  x(0, 0) = 1.0 - 5e-4;
  x(1, 2) = 5e-4;
  EXPECT_TRUE(validate_partial_permutation(x, 2, 1e-3));
  x(1, 2) = 2e-3;
  EXPECT_FALSE(validate_partial_permutation(x, 2, 1e-3));
}

TEST(ValidatePartialPermutation, EmptyMatrixIsNotFeasible) {
  EXPECT_FALSE(validate_partial_permutation(Matrix(0, 0), 0, 1e-3));
}

// Every enumerated member passes; every single-entry perturbation by more
// than tol fails.
TEST(ValidatePartialPermutation, EnumeratedMembersAndPerturbations) {
  const double tol = 1e-3;
  for (const auto [m, n, l] : {std::tuple{2, 3, 1}, {3, 3, 2}, {3, 4, 3}}) {
    enumerate_partial_permutations(m, n, l, [&](const PartialPermutation& p) {
      const Matrix x = p.to_matrix();
      ASSERT_TRUE(validate_partial_permutation(x, l, tol));
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        for (double delta : {2 * tol, -2 * tol, 0.3}) {
          Matrix y = x;
          y.data()[k] += delta;
          EXPECT_FALSE(validate_partial_permutation(y, l, tol));
        }
      }
    });
  }
}

TEST(SelectionMask, SingleMatchedVertex) {
  EXPECT_EQ(selection_mask(mat({{0, 1, 0}})), mat({{1}}));
}

TEST(SelectionMask, UnmatchedRowIsZeroed) {
  EXPECT_EQ(selection_mask(mat({{1, 0, 0}, {0, 0, 0}})), mat({{1, 0}, {0, 0}}));
}

TEST(SelectionMask, TwoMatchedRows) {
  EXPECT_EQ(selection_mask(mat({{1, 0, 0}, {0, 1, 0}})), mat({{1, 1}, {1, 1}}));
}

// U o U = U and U o (X A_H X^T) = X A_H X^T on P; U agrees with the
// X X^T-based form; X X^T X = X and X^T X X^T = X^T.
TEST(SelectionMask, IdentitiesOnPartialPermutations) {
  std::mt19937_64 rng(11);
  for (int m = 1; m <= 4; ++m) {
    for (int n = m; n <= 4; ++n) {
      for (int l = 1; l <= m; ++l) {
        const Matrix ah = testing::random_adjacency(n, rng);
        const Matrix ag = testing::random_adjacency(m, rng);
        enumerate_partial_permutations(m, n, l, [&](const PartialPermutation& p) {
          const Matrix x = p.to_matrix();
          const Matrix u = x * Matrix::Ones(n, n) * x.transpose();
          EXPECT_EQ(selection_mask(x), u);
          EXPECT_EQ(u.cwiseProduct(u), u);
          const Matrix k = x * ah * x.transpose();
          EXPECT_EQ(u.cwiseProduct(k), k);
          const Matrix xxt = x * x.transpose();
          EXPECT_EQ(u.cwiseProduct(ag), xxt * ag * xxt);
          EXPECT_EQ(xxt * xxt, xxt);
          EXPECT_EQ(xxt * x, x);
          EXPECT_EQ(x.transpose() * xxt, x.transpose());
        });
      }
    }
  }
}

TEST(WeightedGraph, RejectsSelfLoopsAndNegativeWeights) {
  EXPECT_THROW(WeightedGraph(mat({{1, 0}, {0, 0}})), std::invalid_argument);
  EXPECT_THROW(WeightedGraph(mat({{0, -1}, {-1, 0}})), std::invalid_argument);
  EXPECT_THROW(WeightedGraph(Matrix(2, 3)), std::invalid_argument);
}

TEST(WeightedGraph, FlagsAsymmetricInput) {
  EXPECT_FALSE(WeightedGraph(mat({{0, 2}, {2, 0}})).directed());
  EXPECT_TRUE(WeightedGraph(mat({{0, 2}, {1, 0}})).directed());
}

TEST(WeightedGraph, LabelsAreOptional) {
  const WeightedGraph g(mat({{0, 1}, {1, 0}}));
  EXPECT_FALSE(g.has_labels());
  EXPECT_EQ(g.label_dim(), 0);
  EXPECT_EQ(g.edge_count(), 1);
  EXPECT_THROW(WeightedGraph(mat({{0, 1}, {1, 0}}), Matrix::Zero(3, 2)),
               std::invalid_argument);
}

TEST(CostMatrix, FromLabelsIsEuclidean) {
  const WeightedGraph g(Matrix::Zero(1, 1), mat({{0, 0}}));
  const WeightedGraph h(Matrix::Zero(2, 2), mat({{3, 4}, {0, 1}}));
  const CostMatrix c = CostMatrix::from_labels(g, h);
  EXPECT_DOUBLE_EQ(c.entries()(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(c.entries()(0, 1), 1.0);
  EXPECT_THROW(CostMatrix(mat({{std::nan("")}})), std::invalid_argument);
}

TEST(PartialPermutation, RoundTripsThroughMatrix) {
  const PartialPermutation p(3, 4, {{0, 2}, {2, 1}});
  EXPECT_EQ(p.target_size(), 2);
  EXPECT_EQ(p.col_of(1), -1);
  EXPECT_EQ(PartialPermutation::from_matrix(p.to_matrix(), 2), p);
  EXPECT_THROW(PartialPermutation(2, 2, {{0, 0}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(PartialPermutation(2, 2, {{0, 2}}), std::invalid_argument);
}

TEST(RelaxedAssignment, UniformIsFeasible) {
  const RelaxedAssignment x = RelaxedAssignment::uniform(3, 5, 2);
  EXPECT_NEAR(x.entries().sum(), 2.0, 1e-12);
  EXPECT_THROW(RelaxedAssignment(Matrix::Constant(2, 2, 0.75), 3),
               std::invalid_argument);
  EXPECT_THROW(RelaxedAssignment::uniform(2, 3, 3), std::invalid_argument);
}

TEST(ProblemInstance, EnforcesOrientationAndSizes) {
  const WeightedGraph small(Matrix::Zero(2, 2));
  const WeightedGraph large(Matrix::Zero(3, 3));
  EXPECT_NO_THROW(ProblemInstance(small, large, CostMatrix::zeros(2, 3), 2, 1.0));
  EXPECT_THROW(ProblemInstance(large, small, CostMatrix::zeros(3, 2), 2, 1.0),
               std::invalid_argument);
  EXPECT_THROW(ProblemInstance(small, large, CostMatrix::zeros(2, 3), 3, 1.0),
               std::invalid_argument);
  EXPECT_THROW(ProblemInstance(small, large, CostMatrix::zeros(3, 2), 1, 1.0),
               std::invalid_argument);
  EXPECT_THROW(ProblemInstance(small, large, CostMatrix::zeros(2, 3), 1, 1.5),
               std::invalid_argument);
}

}  // namespace
}  // namespace wcs
