#include "wcs/direction.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace wcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_score(const Matrix& score) {
  if (score.rows() <= 0 || score.cols() <= 0) {
    throw std::invalid_argument("score matrix must be non-empty");
  }
  if (!score.allFinite()) {
    throw std::invalid_argument("score matrix must be finite");
  }
}

// Min-cost flow of `units` units through source -> rows -> cols -> sink with
// unit capacities, by successive shortest paths with Johnson potentials.
// Every arc is implicit: the residual graph is fully determined by the
// current matching.
class BipartiteFlow {
 public:
  explicit BipartiteFlow(const Matrix& cost)
      : cost_(cost),
        m_(static_cast<int>(cost.rows())),
        n_(static_cast<int>(cost.cols())),
        row_match_(m_, -1),
        col_match_(n_, -1),
        potential_(node_count(), 0.0),
        dist_(node_count()),
        prev_(node_count()),
        done_(node_count()) {
    // The initial residual network is acyclic; shortest distances from the
    // source give feasible potentials.
    double best_col = kInf;
    for (int j = 0; j < n_; ++j) {
      potential_[col_node(j)] = cost_.col(j).minCoeff();
      best_col = std::min(best_col, potential_[col_node(j)]);
    }
    potential_[sink()] = best_col;
  }

  void augment() {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(prev_.begin(), prev_.end(), -1);
    std::fill(done_.begin(), done_.end(), 0);
    dist_[source()] = 0.0;

    for (;;) {
      int u = -1;
      for (int v = 0; v < node_count(); ++v) {
        if (!done_[v] && dist_[v] < kInf && (u < 0 || dist_[v] < dist_[u])) {
          u = v;
        }
      }
      if (u < 0) break;
      done_[u] = 1;
      if (u == sink()) break;

      if (u == source()) {
        for (int i = 0; i < m_; ++i) {
          if (row_match_[i] < 0) relax(u, row_node(i), 0.0);
        }
      } else if (u <= m_) {
        const int i = u - 1;
        for (int j = 0; j < n_; ++j) {
          if (row_match_[i] != j) relax(u, col_node(j), cost_(i, j));
        }
      } else {
        const int j = u - 1 - m_;
        const int i = col_match_[j];
        if (i >= 0) {
          relax(u, row_node(i), -cost_(i, j));
        } else {
          relax(u, sink(), 0.0);
        }
      }
    }

    if (dist_[sink()] == kInf) {
      throw std::runtime_error("no augmenting path: L exceeds min(M, N)");
    }

    // Forward row -> col arcs on the path become matched; the backward arcs
    // they displace are overwritten by the same walk.
    for (int v = sink(); prev_[v] >= 0; v = prev_[v]) {
      const int u = prev_[v];
      if (u >= 1 && u <= m_ && v > m_ && v != sink()) {
        const int i = u - 1;
        const int j = v - 1 - m_;
        row_match_[i] = j;
        col_match_[j] = i;
      }
    }

    const double cap = dist_[sink()];
    for (int v = 0; v < node_count(); ++v) {
      potential_[v] += std::min(dist_[v], cap);
    }
  }

  PartialPermutation result() const {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m_; ++i) {
      if (row_match_[i] >= 0) pairs.emplace_back(i, row_match_[i]);
    }
    return PartialPermutation(m_, n_, pairs);
  }

 private:
  int node_count() const { return m_ + n_ + 2; }
  int source() const { return 0; }
  int sink() const { return m_ + n_ + 1; }
  int row_node(int i) const { return 1 + i; }
  int col_node(int j) const { return 1 + m_ + j; }

  void relax(int u, int v, double arc_cost) {
    if (done_[v]) return;
    const double d = dist_[u] + arc_cost + potential_[u] - potential_[v];
    if (d < dist_[v]) {
      dist_[v] = d;
      prev_[v] = u;
    }
  }

  const Matrix& cost_;
  int m_;
  int n_;
  std::vector<int> row_match_;
  std::vector<int> col_match_;
  std::vector<double> potential_;
  std::vector<double> dist_;
  std::vector<int> prev_;
  std::vector<char> done_;
};

// Shortest augmenting path Hungarian method for rows <= cols; minimizes
// cost. O(rows^2 * cols).
std::vector<int> hungarian_min(const Matrix& cost) {
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
  std::vector<double> minv(cols + 1);
  std::vector<char> used(cols + 1);

  for (int i = 1; i <= rows; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace

std::string_view to_string(DirectionMethod method) {
  switch (method) {
    case DirectionMethod::kExactFlow: return "exact";
    case DirectionMethod::kFastHungarian: return "fast";
  }
  return "?";
}

DirectionMethod parse_direction(std::string_view name) {
  if (name == "exact") return DirectionMethod::kExactFlow;
  if (name == "fast") return DirectionMethod::kFastHungarian;
  throw std::invalid_argument("unknown direction method '" +
                              std::string(name) + "'");
}

double assignment_value(const Matrix& score, const PartialPermutation& y) {
  double total = 0.0;
  for (const auto& [i, j] : y.pairs()) total += score(i, j);
  return total;
}

PartialPermutation solve_direction_exact(const Matrix& score,
                                         int target_size) {
  check_score(score);
  if (target_size < 1 || target_size > std::min(score.rows(), score.cols())) {
    throw std::invalid_argument("infeasible L: need 1 <= L <= min(M, N)");
  }
  const Matrix cost = -score;
  BipartiteFlow flow(cost);
  for (int k = 0; k < target_size; ++k) flow.augment();
  return flow.result();
}

PartialPermutation solve_rectangular_assignment(const Matrix& score) {
  check_score(score);
  if (score.rows() > score.cols()) {
    throw std::invalid_argument("rectangular assignment requires M <= N");
  }
  const std::vector<int> row_to_col = hungarian_min(-score);
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(row_to_col.size());
  for (int i = 0; i < static_cast<int>(row_to_col.size()); ++i) {
    pairs.emplace_back(i, row_to_col[i]);
  }
  return PartialPermutation(static_cast<int>(score.rows()),
                            static_cast<int>(score.cols()), pairs);
}

PartialPermutation solve_direction_fast(const Matrix& score,
                                        int target_size) {
  const PartialPermutation full = solve_rectangular_assignment(score);
  const int m = full.rows();
  if (target_size < 1 || target_size > m) {
    throw std::invalid_argument("infeasible L: need 1 <= L <= M");
  }
  std::vector<std::tuple<double, int, int>> matched;
  matched.reserve(m);
  for (const auto& [i, j] : full.pairs()) matched.emplace_back(score(i, j), i, j);
  std::sort(matched.begin(), matched.end());

  std::vector<std::pair<int, int>> kept;
  kept.reserve(target_size);
  for (std::size_t k = m - target_size; k < matched.size(); ++k) {
    kept.emplace_back(std::get<1>(matched[k]), std::get<2>(matched[k]));
  }
  return PartialPermutation(m, full.cols(), kept);
}

PartialPermutation solve_direction(const Matrix& score, int target_size,
                                   DirectionMethod method) {
  switch (method) {
    case DirectionMethod::kExactFlow:
      return solve_direction_exact(score, target_size);
    case DirectionMethod::kFastHungarian:
      return solve_direction_fast(score, target_size);
  }
  throw std::logic_error("unreachable");
}

PartialPermutation discretize(const Matrix& x, int target_size) {
  return solve_direction_exact(x, target_size);
}

}  // namespace wcs
