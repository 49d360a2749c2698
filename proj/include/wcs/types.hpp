#pragma once

#include <Eigen/Dense>

#include <optional>
#include <utility>
#include <vector>

namespace wcs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerance for membership in the relaxed polytope D.
inline constexpr double kFeasibilityTol = 1e-6;
// Tolerance for rounding a relaxed iterate onto the partial permutations P.
inline constexpr double kBinarityTol = 1e-3;

// Undirected labeled graph with nonnegative edge weights, stored densely.
// An absent edge is a zero weight. Labels are one row per vertex; an
// unlabeled graph has zero label columns.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(Matrix adjacency, Matrix labels = Matrix());

  int size() const { return static_cast<int>(adjacency_.rows()); }
  const Matrix& adjacency() const { return adjacency_; }
  const Matrix& labels() const { return labels_; }
  bool has_labels() const { return labels_.cols() > 0; }
  int label_dim() const { return static_cast<int>(labels_.cols()); }

  // Asymmetric adjacency is accepted but the objective assumes undirected
  // graphs; callers can check this flag.
  bool directed() const { return directed_; }

  // Number of undirected edges (pairs i < j with a nonzero weight in either
  // direction).
  int edge_count() const;

 private:
  Matrix adjacency_;
  Matrix labels_;
  bool directed_ = false;
};

class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(Matrix entries);

  static CostMatrix zeros(int rows, int cols);
  // Euclidean distance between vertex labels.
  static CostMatrix from_labels(const WeightedGraph& g, const WeightedGraph& h);

  const Matrix& entries() const { return entries_; }
  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }

 private:
  Matrix entries_;
};

// A binary rows x cols matrix with exactly L ones and at most one per row and
// column. Stored as a row -> column map.
class PartialPermutation {
 public:
  PartialPermutation() = default;
  PartialPermutation(int rows, int cols,
                     const std::vector<std::pair<int, int>>& pairs);

  // Rounds x onto P. Throws if x is not within tol of a member of P with
  // exactly L ones.
  static PartialPermutation from_matrix(const Matrix& x, int target_size,
                                        double tol = kBinarityTol);

  int rows() const { return static_cast<int>(row_to_col_.size()); }
  int cols() const { return cols_; }
  int target_size() const { return size_; }

  // Column matched to row i, or -1.
  int col_of(int row) const { return row_to_col_[row]; }
  bool row_matched(int row) const { return row_to_col_[row] >= 0; }

  // Matched (row, col) pairs in increasing row order.
  std::vector<std::pair<int, int>> pairs() const;
  Matrix to_matrix() const;

  friend bool operator==(const PartialPermutation&,
                         const PartialPermutation&) = default;

 private:
  std::vector<int> row_to_col_;
  int cols_ = 0;
  int size_ = 0;
};

// A point of the convex hull D of P: nonnegative entries, row and column sums
// at most one, total sum L.
class RelaxedAssignment {
 public:
  RelaxedAssignment(Matrix entries, int target_size,
                    double eps = kFeasibilityTol);

  // The barycenter L / (MN) * ones, the starting point of the continuation.
  static RelaxedAssignment uniform(int rows, int cols, int target_size);

  const Matrix& entries() const { return entries_; }
  int target_size() const { return size_; }

 private:
  Matrix entries_;
  int size_ = 0;
};

bool in_relaxed_polytope(const Matrix& x, int target_size,
                         double eps = kFeasibilityTol);

// Requires L <= M <= N; G is always the smaller graph.
class ProblemInstance {
 public:
  ProblemInstance(WeightedGraph g, WeightedGraph h, CostMatrix cost,
                  int target_size, double alpha,
                  std::optional<PartialPermutation> ground_truth = {});

  const WeightedGraph& graph_g() const { return g_; }
  const WeightedGraph& graph_h() const { return h_; }
  const CostMatrix& cost() const { return cost_; }
  int target_size() const { return size_; }
  double alpha() const { return alpha_; }
  const std::optional<PartialPermutation>& ground_truth() const { return gt_; }

  int m() const { return g_.size(); }
  int n() const { return h_.size(); }

  ProblemInstance with_alpha(double alpha) const;

 private:
  WeightedGraph g_;
  WeightedGraph h_;
  CostMatrix cost_;
  int size_;
  double alpha_;
  std::optional<PartialPermutation> gt_;
};

bool validate_partial_permutation(const Matrix& x, int target_size,
                                  double tol = kBinarityTol);

// U = X * ones(N, N) * X^T.
Matrix selection_mask(const Matrix& x);

// Largest distance of any entry from {0, 1}.
double binarity_gap(const Matrix& x);

}  // namespace wcs
