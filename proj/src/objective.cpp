#include "wcs/objective.hpp"

#include <stdexcept>
#include <string>

namespace wcs {
namespace {

void check_dims(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  if (ag.rows() != x.rows() || ag.cols() != x.rows() ||
      ah.rows() != x.cols() || ah.cols() != x.cols()) {
    throw std::invalid_argument(
        "dimension mismatch: expected X MxN, A_G MxM, A_H NxN");
  }
}

bool symmetric(const Matrix& a) { return a == a.transpose(); }

// Frobenius inner product <a, b> = tr(a^T b).
double inner(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace

std::string_view to_string(RelaxationKind kind) {
  switch (kind) {
    case RelaxationKind::kH1: return "h1";
    case RelaxationKind::kH2: return "h2";
    case RelaxationKind::kPIW: return "piw";
  }
  return "?";
}

RelaxationKind parse_relaxation(std::string_view name) {
  if (name == "h1") return RelaxationKind::kH1;
  if (name == "h2") return RelaxationKind::kH2;
  if (name == "piw") return RelaxationKind::kPIW;
  throw std::invalid_argument("unknown relaxation '" + std::string(name) + "'");
}

double eval_h0(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  const Matrix ones = Matrix::Ones(x.cols(), x.cols());
  const Matrix u = x * ones * x.transpose();
  const Matrix residual = u.cwiseProduct(ag) - x * ah * x.transpose();
  return residual.squaredNorm();
}

// tr((A_G o A_G) U^T) - 2 tr(A_G X A_H^T X^T) + tr(X A_H X^T X A_H^T X^T)
double eval_h1(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  const Vector r = x.rowwise().sum();
  const Matrix k = x * ah * x.transpose();
  const double masked = r.dot(ag.cwiseProduct(ag) * r);
  return masked - 2.0 * inner(ag, k) + k.squaredNorm();
}

Matrix grad_h1(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  const Matrix sq = ag.cwiseProduct(ag);
  // (A_G^T o A_G^T + A_G o A_G) X 1_{NxN}; every column equals (..) X 1_N.
  const Vector r = x.rowwise().sum();
  const Vector masked = (sq.transpose() + sq) * r;
  Matrix g = masked.replicate(1, x.cols());

  const Matrix xah = x * ah;
  const Matrix k = xah * x.transpose();  // X A_H X^T
  if (symmetric(ag) && symmetric(ah)) {
    g.noalias() -= 4.0 * ag * xah;
    g.noalias() += 4.0 * k * xah;
    return g;
  }
  const Matrix xaht = x * ah.transpose();
  g -= 2.0 * (ag.transpose() * xah + ag * xaht);
  g += 2.0 * (k * xaht + k.transpose() * xah);
  return g;
}

// T1 - 2 T2 + T3 with
//   T1 = tr(X X^T A_G^T X X^T A_G X X^T)
//   T2 = tr(X X^T A_G^T X A_H X^T)
//   T3 = tr(X A_H^T X^T X A_H X^T)
double eval_h2(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  const Matrix p = x * x.transpose();
  const Matrix k = x * ah * x.transpose();
  // With V = A_G X X^T: T1 = tr(V^T P V) and T2 = <V, K>.
  const Matrix v = ag * p;
  const double t1 = inner(v, p * v);
  const double t2 = inner(v, k);
  const double t3 = k.squaredNorm();
  return t1 - 2.0 * t2 + t3;
}

Matrix grad_h2(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  const Matrix xt = x.transpose();
  const Matrix p = x * xt;
  const Matrix v = ag * p;  // A_G X X^T
  const Matrix w = p * ag;  // X X^T A_G

  // grad T1 = 2 (X X^T A_G^T X X^T A_G X + A_G^T X X^T A_G X X^T X
  //              + A_G X X^T X X^T A_G^T X)
  Matrix grad_t1 = v.transpose() * (w * x);
  grad_t1.noalias() += w.transpose() * (v * x);
  grad_t1.noalias() += v * (v.transpose() * x);
  grad_t1 *= 2.0;

  // grad T2 = X A_H^T X^T A_G X + A_G^T X A_H X^T X + A_G X X^T X A_H^T
  //           + X X^T A_G^T X A_H
  const Matrix xah = x * ah;
  const Matrix xaht = x * ah.transpose();
  const Matrix xtx = xt * x;
  Matrix grad_t2 = xaht * (xt * (ag * x));
  grad_t2.noalias() += ag.transpose() * (xah * xtx);
  grad_t2.noalias() += v * xaht;
  grad_t2.noalias() += v.transpose() * xah;

  // grad T3 = 2 (X A_H^T X^T X A_H + X A_H X^T X A_H^T)
  Matrix grad_t3 = xaht * xtx * ah + xah * xtx * ah.transpose();
  grad_t3 *= 2.0;

  return grad_t1 - 2.0 * grad_t2 + grad_t3;
}

double eval_piw(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  if (x.rows() > x.cols()) {
    throw std::invalid_argument("part-in-whole objective requires M <= N");
  }
  return (ag - x * ah * x.transpose()).squaredNorm();
}

// 2 X (A_H^T X^T X A_H + A_H X^T X A_H^T) - 2 (A_G X A_H^T + A_G^T X A_H)
Matrix grad_piw(const Matrix& x, const Matrix& ag, const Matrix& ah) {
  check_dims(x, ag, ah);
  if (x.rows() > x.cols()) {
    throw std::invalid_argument("part-in-whole objective requires M <= N");
  }
  const Matrix xtx = x.transpose() * x;
  if (symmetric(ag) && symmetric(ah)) {
    const Matrix xah = x * ah;
    return 4.0 * (xah * xtx * ah - ag * xah);
  }
  const Matrix aht = ah.transpose();
  Matrix g = 2.0 * x * (aht * xtx * ah + ah * xtx * aht);
  g -= 2.0 * (ag * x * aht + ag.transpose() * x * ah);
  return g;
}

Objective::Objective(const ProblemInstance& instance, RelaxationKind kind,
                     bool literal_structural_gradient)
    : instance_(&instance), kind_(kind), literal_(literal_structural_gradient) {
  if (kind == RelaxationKind::kPIW && instance.target_size() != instance.m()) {
    throw std::invalid_argument("piw requires L = M");
  }
}

double Objective::structural(const Matrix& x) const {
  const Matrix& ag = instance_->graph_g().adjacency();
  const Matrix& ah = instance_->graph_h().adjacency();
  switch (kind_) {
    case RelaxationKind::kH1: return eval_h1(x, ag, ah);
    case RelaxationKind::kH2: return eval_h2(x, ag, ah);
    case RelaxationKind::kPIW: return eval_piw(x, ag, ah);
  }
  throw std::logic_error("unreachable");
}

Matrix Objective::structural_gradient(const Matrix& x) const {
  const Matrix& ag = instance_->graph_g().adjacency();
  const Matrix& ah = instance_->graph_h().adjacency();
  switch (kind_) {
    case RelaxationKind::kH1: return grad_h1(x, ag, ah);
    case RelaxationKind::kH2: return grad_h2(x, ag, ah);
    case RelaxationKind::kPIW: return grad_piw(x, ag, ah);
  }
  throw std::logic_error("unreachable");
}

double Objective::f(const Matrix& x) const {
  const double alpha = instance_->alpha();
  double value = (1.0 - alpha) * inner(instance_->cost().entries(), x);
  if (alpha != 0.0) value += alpha * structural(x);
  return value;
}

Matrix Objective::grad_f(const Matrix& x) const {
  const double alpha = instance_->alpha();
  Matrix g = (1.0 - alpha) * instance_->cost().entries();
  if (literal_) {
    g += structural_gradient(x);
  } else if (alpha != 0.0) {
    g += alpha * structural_gradient(x);
  }
  return g;
}

namespace {

double blend_weight(double zeta) {
  if (!(zeta >= -1.0 && zeta <= 1.0)) {
    throw std::invalid_argument("zeta must lie in [-1, 1]");
  }
  return zeta >= 0.0 ? 1.0 - zeta : 1.0 + zeta;
}

}  // namespace

double Objective::j(const Matrix& x, double zeta) const {
  const double w = blend_weight(zeta);
  const double quad = zeta * x.squaredNorm();
  return w == 0.0 ? quad : w * f(x) + quad;
}

Matrix Objective::grad_j(const Matrix& x, double zeta) const {
  const double w = blend_weight(zeta);
  if (w == 0.0) return 2.0 * zeta * x;
  return w * grad_f(x) + 2.0 * zeta * x;
}

double eval_f(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind) {
  return Objective(instance, kind).f(x);
}

Matrix grad_f(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind) {
  return Objective(instance, kind).grad_f(x);
}

double eval_j(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind, double zeta) {
  return Objective(instance, kind).j(x, zeta);
}

Matrix grad_j(const Matrix& x, const ProblemInstance& instance,
              RelaxationKind kind, double zeta) {
  return Objective(instance, kind).grad_j(x, zeta);
}

double true_objective(const Matrix& x, const ProblemInstance& instance) {
  const double alpha = instance.alpha();
  double value = (1.0 - alpha) * inner(instance.cost().entries(), x);
  if (alpha != 0.0) {
    value += alpha * eval_h0(x, instance.graph_g().adjacency(),
                             instance.graph_h().adjacency());
  }
  return value;
}

}  // namespace wcs
