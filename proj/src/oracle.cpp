#include "wcs/oracle.hpp"

#include "wcs/objective.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wcs {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    // r * (n - k + i) / i stays integral at every step.
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > kSaturated / num) return kSaturated;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

class Enumerator {
 public:
  Enumerator(int m, int n, int target,
             const std::function<void(const PartialPermutation&)>& visit)
      : m_(m), n_(n), target_(target), visit_(visit), col_used_(n, 0) {}

  void run() { descend(0); }

 private:
  void descend(int row) {
    const int placed = static_cast<int>(pairs_.size());
    if (placed == target_) {
      visit_(PartialPermutation(m_, n_, pairs_));
      return;
    }
    if (m_ - row < target_ - placed) return;
    // Row left unmatched first, then matched to each free column in order.
    descend(row + 1);
    for (int j = 0; j < n_; ++j) {
      if (col_used_[j]) continue;
      col_used_[j] = 1;
      pairs_.emplace_back(row, j);
      descend(row + 1);
      pairs_.pop_back();
      col_used_[j] = 0;
    }
  }

  int m_, n_, target_;
  const std::function<void(const PartialPermutation&)>& visit_;
  std::vector<char> col_used_;
  std::vector<std::pair<int, int>> pairs_;
};

}  // namespace

std::uint64_t count_partial_permutations(int m, int n, int target_size) {
  std::uint64_t total =
      saturating_mul(binomial(m, target_size), binomial(n, target_size));
  for (int k = 2; k <= target_size; ++k) {
    total = saturating_mul(total, static_cast<std::uint64_t>(k));
  }
  return total;
}

void enumerate_partial_permutations(
    int m, int n, int target_size,
    const std::function<void(const PartialPermutation&)>& visit,
    std::uint64_t cap) {
  if (m < 1 || target_size < 1 || target_size > m || m > n) {
    throw std::invalid_argument("enumeration requires 1 <= L <= M <= N");
  }
  if (count_partial_permutations(m, n, target_size) > cap) {
    throw std::length_error("partial permutation count exceeds the cap");
  }
  Enumerator(m, n, target_size, visit).run();
}

OracleResult brute_force_min(const ProblemInstance& instance,
                             std::uint64_t cap) {
  OracleResult result;
  result.best_value = std::numeric_limits<double>::infinity();
  enumerate_partial_permutations(
      instance.m(), instance.n(), instance.target_size(),
      [&](const PartialPermutation& y) {
        const double v = true_objective(y.to_matrix(), instance);
        ++result.num_candidates;
        const double tol = 1e-9 * std::max(1.0, std::abs(result.best_value));
        if (result.num_candidates == 1 || v < result.best_value - tol) {
          result.best_value = v;
          result.best_assignment = y;
          result.num_optima = 1;
        } else if (v <= result.best_value + tol) {
          ++result.num_optima;
          result.best_value = std::min(result.best_value, v);
        }
      },
      cap);
  return result;
}

}  // namespace wcs
