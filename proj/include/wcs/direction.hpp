#pragma once

#include "wcs/types.hpp"

#include <string_view>

namespace wcs {

// How the Frank-Wolfe linear subproblem max tr(S^T Y), Y in D, is solved.
//   kExactFlow:     successive shortest paths on the bipartite network; the
//                   polytope's vertices are integral so the optimum lies in P.
//   kFastHungarian: rectangular assignment of all M rows, then the M - L
//                   weakest matches are dropped. Feasible but approximate.
enum class DirectionMethod { kExactFlow, kFastHungarian };

std::string_view to_string(DirectionMethod method);
DirectionMethod parse_direction(std::string_view name);

// tr(score^T Y).
double assignment_value(const Matrix& score, const PartialPermutation& y);

// Maximizes tr(score^T Y) over D; the result has exactly L ones.
// Throws std::invalid_argument if L > min(M, N) or the score is not finite.
PartialPermutation solve_direction_exact(const Matrix& score, int target_size);

// Maximizes tr(score^T Y) over partial permutations matching every row.
// Requires M <= N.
PartialPermutation solve_rectangular_assignment(const Matrix& score);

// Rectangular assignment, then removal of the M - L matched entries with the
// smallest score. Ties are removed in (row, col) order.
PartialPermutation solve_direction_fast(const Matrix& score, int target_size);

PartialPermutation solve_direction(const Matrix& score, int target_size,
                                   DirectionMethod method);

// Partial permutation closest to x in the inner-product sense.
PartialPermutation discretize(const Matrix& x, int target_size);

}  // namespace wcs
