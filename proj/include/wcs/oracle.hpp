#pragma once

#include "wcs/types.hpp"

#include <cstdint>
#include <functional>

namespace wcs {

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// |P| = C(M, L) * C(N, L) * L!. Saturates at UINT64_MAX.
std::uint64_t count_partial_permutations(int m, int n, int target_size);

// Calls visit once for every member of P, in a fixed order. Throws
// std::invalid_argument unless L <= M <= N, and std::length_error when |P|
// exceeds cap.
void enumerate_partial_permutations(
    int m, int n, int target_size,
    const std::function<void(const PartialPermutation&)>& visit,
    std::uint64_t cap = kDefaultEnumerationCap);

struct OracleResult {
  PartialPermutation best_assignment;
  double best_value = 0.0;
  std::uint64_t num_candidates = 0;
  std::uint64_t num_optima = 0;
};

// Exact minimum of alpha * H0 + (1 - alpha) tr(C^T X) over P. Ties within
// 1e-9 (relative to max(1, |best|)) keep the first enumerated minimizer.
OracleResult brute_force_min(const ProblemInstance& instance,
                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace wcs
