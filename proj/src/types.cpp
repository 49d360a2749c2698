#include "wcs/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wcs {

WeightedGraph::WeightedGraph(Matrix adjacency, Matrix labels)
    : adjacency_(std::move(adjacency)), labels_(std::move(labels)) {
  const auto n = adjacency_.rows();
  if (n <= 0 || adjacency_.cols() != n) {
    throw std::invalid_argument("adjacency must be a non-empty square matrix");
  }
  if (labels_.size() == 0) {
    labels_.resize(n, 0);
  } else if (labels_.rows() != n) {
    throw std::invalid_argument("expected one label per vertex");
  }
  if (!labels_.allFinite()) {
    throw std::invalid_argument("labels must be finite");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (adjacency_(i, i) != 0.0) {
      throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = adjacency_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("edge weights must be finite and >= 0");
      }
      if (w != adjacency_(j, i)) directed_ = true;
    }
  }
}

int WeightedGraph::edge_count() const {
  int count = 0;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (adjacency_(i, j) != 0.0 || adjacency_(j, i) != 0.0) ++count;
    }
  }
  return count;
}

CostMatrix::CostMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (!entries_.allFinite()) {
    throw std::invalid_argument("cost matrix entries must be finite");
  }
}

CostMatrix CostMatrix::zeros(int rows, int cols) {
  return CostMatrix(Matrix::Zero(rows, cols));
}

CostMatrix CostMatrix::from_labels(const WeightedGraph& g,
                                   const WeightedGraph& h) {
  if (!g.has_labels() || !h.has_labels()) {
    throw std::invalid_argument("both graphs need labels to derive costs");
  }
  if (g.label_dim() != h.label_dim()) {
    throw std::invalid_argument("label dimensions differ");
  }
  Matrix c(g.size(), h.size());
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < h.size(); ++j) {
      c(i, j) = (g.labels().row(i) - h.labels().row(j)).norm();
    }
  }
  return CostMatrix(std::move(c));
}

PartialPermutation::PartialPermutation(
    int rows, int cols, const std::vector<std::pair<int, int>>& pairs)
    : row_to_col_(rows > 0 ? rows : 0, -1), cols_(cols) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("partial permutation needs positive dims");
  }
  std::vector<char> col_used(cols, 0);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw std::invalid_argument("matched pair out of range");
    }
    if (row_to_col_[i] >= 0 || col_used[j]) {
      throw std::invalid_argument("row or column matched twice");
    }
    row_to_col_[i] = j;
    col_used[j] = 1;
  }
  size_ = static_cast<int>(pairs.size());
}

PartialPermutation PartialPermutation::from_matrix(const Matrix& x,
                                                   int target_size,
                                                   double tol) {
  if (!validate_partial_permutation(x, target_size, tol)) {
    throw std::invalid_argument("matrix is not a partial permutation");
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      if (std::round(x(i, j)) == 1.0) pairs.emplace_back(i, j);
    }
  }
  return PartialPermutation(static_cast<int>(x.rows()),
                            static_cast<int>(x.cols()), pairs);
}

std::vector<std::pair<int, int>> PartialPermutation::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(size_);
  for (int i = 0; i < rows(); ++i) {
    if (row_to_col_[i] >= 0) out.emplace_back(i, row_to_col_[i]);
  }
  return out;
}

Matrix PartialPermutation::to_matrix() const {
  Matrix x = Matrix::Zero(rows(), cols_);
  for (int i = 0; i < rows(); ++i) {
    if (row_to_col_[i] >= 0) x(i, row_to_col_[i]) = 1.0;
  }
  return x;
}

bool in_relaxed_polytope(const Matrix& x, int target_size, double eps) {
  if (x.size() == 0 || !x.allFinite()) return false;
  if (x.minCoeff() < -eps) return false;
  if (x.rowwise().sum().maxCoeff() > 1.0 + eps) return false;
  if (x.colwise().sum().maxCoeff() > 1.0 + eps) return false;
  return std::abs(x.sum() - target_size) <= eps * std::max(1, target_size);
}

RelaxedAssignment::RelaxedAssignment(Matrix entries, int target_size,
                                     double eps)
    : entries_(std::move(entries)), size_(target_size) {
  if (!in_relaxed_polytope(entries_, target_size, eps)) {
    throw std::invalid_argument("matrix is outside the relaxed polytope");
  }
}

RelaxedAssignment RelaxedAssignment::uniform(int rows, int cols,
                                             int target_size) {
  if (target_size < 1 || target_size > std::min(rows, cols)) {
    throw std::invalid_argument("target size must be in [1, min(M, N)]");
  }
  const double v = static_cast<double>(target_size) / (double(rows) * cols);
  return RelaxedAssignment(Matrix::Constant(rows, cols, v), target_size);
}

ProblemInstance::ProblemInstance(WeightedGraph g, WeightedGraph h,
                                 CostMatrix cost, int target_size,
                                 double alpha,
                                 std::optional<PartialPermutation> ground_truth)
    : g_(std::move(g)),
      h_(std::move(h)),
      cost_(std::move(cost)),
      size_(target_size),
      alpha_(alpha),
      gt_(std::move(ground_truth)) {
  if (g_.size() == 0 || h_.size() == 0) {
    throw std::invalid_argument("graphs must be non-empty");
  }
  if (size_ < 1 || size_ > g_.size()) {
    throw std::invalid_argument("L must satisfy 1 <= L <= M");
  }
  if (g_.size() > h_.size()) {
    throw std::invalid_argument("M must be <= N");
  }
  if (cost_.rows() != g_.size() || cost_.cols() != h_.size()) {
    throw std::invalid_argument("cost matrix must be M x N");
  }
  if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (gt_ && (gt_->rows() != g_.size() || gt_->cols() != h_.size() ||
              gt_->target_size() != size_)) {
    throw std::invalid_argument("ground truth does not match the instance");
  }
}

ProblemInstance ProblemInstance::with_alpha(double alpha) const {
  return ProblemInstance(g_, h_, cost_, size_, alpha, gt_);
}

bool validate_partial_permutation(const Matrix& x, int target_size,
                                  double tol) {
  if (x.rows() <= 0 || x.cols() <= 0) return false;
  Matrix rounded(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double v = x(i, j);
      if (std::abs(v) <= tol) {
        rounded(i, j) = 0.0;
      } else if (std::abs(v - 1.0) <= tol) {
        rounded(i, j) = 1.0;
      } else {
        return false;
      }
    }
  }
  return rounded.rowwise().sum().maxCoeff() <= 1.0 &&
         rounded.colwise().sum().maxCoeff() <= 1.0 &&
         rounded.sum() == static_cast<double>(target_size);
}

Matrix selection_mask(const Matrix& x) {
  const Vector r = x.rowwise().sum();
  return r * r.transpose();
}

double binarity_gap(const Matrix& x) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = x.data()[k];
    worst = std::max(worst, std::min(std::abs(v), std::abs(v - 1.0)));
  }
  return worst;
}

}  // namespace wcs
