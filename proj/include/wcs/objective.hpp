#pragma once

#include "wcs/types.hpp"

#include <string_view>

namespace wcs {

// Differentiable surrogates of the masked structural term H0. H1 and H2 agree
// with H0 on every partial permutation; PIW is the part-in-whole objective
// ||A_G - X A_H X^T||^2, valid only when every row of G is matched (L = M).
enum class RelaxationKind { kH1, kH2, kPIW };

std::string_view to_string(RelaxationKind kind);
RelaxationKind parse_relaxation(std::string_view name);

// ||U o A_G - X A_H X^T||_F^2 with U = X 1 X^T, evaluated directly. Reporting
// and test oracle only; never differentiated.
double eval_h0(const Matrix& x, const Matrix& ag, const Matrix& ah);

double eval_h1(const Matrix& x, const Matrix& ag, const Matrix& ah);
Matrix grad_h1(const Matrix& x, const Matrix& ag, const Matrix& ah);

double eval_h2(const Matrix& x, const Matrix& ag, const Matrix& ah);
Matrix grad_h2(const Matrix& x, const Matrix& ag, const Matrix& ah);

// Throws std::invalid_argument unless x has at least as many columns as rows
// (the PIW form needs L = M, which callers check on the instance).
double eval_piw(const Matrix& x, const Matrix& ag, const Matrix& ah);
Matrix grad_piw(const Matrix& x, const Matrix& ag, const Matrix& ah);

// F(X) = alpha * H(X) + (1 - alpha) tr(C^T X) for a fixed instance and
// relaxation, plus the continuation functional
//   J(X) = (1 - z) F(X) + z tr(X^T X)   for z in [0, 1]
//   J(X) = (1 + z) F(X) + z tr(X^T X)   for z in [-1, 0).
class Objective {
 public:
  // With literal_structural_gradient the structural gradient is not scaled by
  // alpha, i.e. grad F = grad H + (1 - alpha) C. That is not the derivative of
  // F unless alpha = 1; it exists for comparison runs only.
  Objective(const ProblemInstance& instance, RelaxationKind kind,
            bool literal_structural_gradient = false);

  RelaxationKind kind() const { return kind_; }
  const ProblemInstance& instance() const { return *instance_; }

  double structural(const Matrix& x) const;
  Matrix structural_gradient(const Matrix& x) const;

  double f(const Matrix& x) const;
  Matrix grad_f(const Matrix& x) const;

  double j(const Matrix& x, double zeta) const;
  Matrix grad_j(const Matrix& x, double zeta) const;

 private:
  const ProblemInstance* instance_;
  RelaxationKind kind_;
  bool literal_;
};

double eval_f(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind);
Matrix grad_f(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind);
double eval_j(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind, double zeta);
Matrix grad_j(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind, double zeta);

// The true objective alpha * H0(X) + (1 - alpha) tr(C^T X).
double true_objective(const Matrix& x, const ProblemInstance& instance);

}  // namespace wcs
