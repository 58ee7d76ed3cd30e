#pragma once

// Lifting a genus-1 fixed character to a representation of the knot group,
// conjugation into SU(2), and the parabolic lifts at the holonomy character.

#include <Eigen/Dense>

#include <cmath>

#include "fibertor/sl2.hpp"
#include "fibertor/trace_map.hpp"

namespace fibertor {

enum class LiftBranch { Principal, Negated };

struct LiftOptions {
  Tolerance tol;
  // smallest/largest singular value of the intertwiner system above this
  // means no intertwiner exists
  double intertwiner = 1e-8;
  // |Tr[A,B] - 2| below this counts as reducible
  double reducible = 1e-8;
};

// A = [[l, 1], [0, 1/l]], B = [[m, 0], [r, 1/m]] with Tr A = x1, Tr B = x2,
// Tr AB = x3; l, m are the principal roots of the trace quadratics.
inline std::pair<Sl2Matrix, Sl2Matrix> fiber_normal_form(const Point3& x) {
  const cplx l = (x[0] + std::sqrt(x[0] * x[0] - 4.0)) / 2.0;
  const cplx m = (x[1] + std::sqrt(x[1] * x[1] - 4.0)) / 2.0;
  const cplx r = x[2] - l * m - 1.0 / (l * m);
  Mat2 a, b;
  a << l, 1, 0, 1.0 / l;
  b << m, 0, r, 1.0 / m;
  return {Sl2Matrix::checked(a), Sl2Matrix::checked(b)};
}

// Unit-determinant T with T rho(phi(x_j)) = rho(x_j) T for every fiber
// generator; T is determined up to sign when the fiber restriction is
// irreducible.
inline Sl2Matrix solve_intertwiner(const FiberedKnot& k, const Representation& fiber, const LiftOptions& opt = {}) {
  const int n = k.fiber_rank();
  Matrix sys(4 * n, 4);
  const Mat2 id = Mat2::Identity();
  for (int j = 0; j < n; ++j) {
    const Mat2 p = evaluate_word(fiber, k.monodromy[j]).matrix();
    const Mat2 x = fiber.image(j).matrix();
    // row-major vec(T P) = (I kron P^T) vec T, vec(X T) = (X kron I) vec T
    Matrix block = Matrix::Zero(4, 4);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        block.block(2 * r, 2 * c, 2, 2) += id(r, c) * p.transpose();
        block.block(2 * r, 2 * c, 2, 2) -= x(r, c) * id;
      }
    sys.middleRows(4 * j, 4) = block;
  }
  auto svd = full_svd(sys);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0 || s(3) > opt.intertwiner * s(0))
    fail(ErrorCode::NotFixedPoint, "no intertwiner: the character is not fixed by the monodromy");
  const Vector t = svd.matrixV().col(3);
  Mat2 tm;
  tm << t(0), t(1), t(2), t(3);
  const cplx det = tm.determinant();
  if (std::abs(det) <= 1e-10 * tm.squaredNorm())
    fail(ErrorCode::NonInvertibleIntertwiner, "intertwiner is singular");
  tm /= std::sqrt(det);
  return Sl2Matrix::checked(tm, 1e-8);
}

inline Representation lift_character_to_rep(const FiberedKnot& k, const Point3& x,
                                            LiftBranch branch = LiftBranch::Principal, const LiftOptions& opt = {}) {
  k.validate();
  if (k.genus != 1) fail(ErrorCode::NotGenusOne, "character lifting is implemented for genus 1");
  const cplx kappa = commutator_trace(x[0], x[1], x[2]);
  if (std::abs(kappa - 2.0) <= opt.reducible * std::max(1.0, std::abs(kappa)))
    fail(ErrorCode::ReducibleCharacter, "Tr[A,B] = 2: the character is reducible");
  const auto [a, b] = fiber_normal_form(x);
  const Representation fiber(Flavor::SL2C, {a, b});
  Sl2Matrix t = solve_intertwiner(k, fiber, opt);
  if (branch == LiftBranch::Negated) t = -t;
  Representation rep(Flavor::SL2C, {a, b, t});
  check_relators(k.presentation(), rep, opt.tol);
  return rep;
}

// Conjugates a representation preserving a positive Hermitian form into
// SU(2): solve X^* H X = H, factor H = S^* S, conjugate by S.
inline Representation conjugate_into_su2(const Representation& rep, double tol = 1e-8) {
  // H = [[p, q + i s], [q - i s, u]], real unknowns (p, q, s, u).
  const cplx I(0.0, 1.0);
  std::array<Mat2, 4> basis;
  basis[0] << 1, 0, 0, 0;
  basis[1] << 0, 1, 1, 0;
  basis[2] << 0, I, -I, 0;
  basis[3] << 0, 0, 0, 1;
  const int n = rep.generator_count();
  RealMatrix sys(8 * n, 4);
  for (int g = 0; g < n; ++g) {
    const Mat2& x = rep.image(g).matrix();
    for (int k = 0; k < 4; ++k) {
      const Mat2 e = x.adjoint() * basis[k] * x - basis[k];
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          sys(8 * g + 4 * r + 2 * c, k) = e(r, c).real();
          sys(8 * g + 4 * r + 2 * c + 1, k) = e(r, c).imag();
        }
    }
  }
  Eigen::JacobiSVD<RealMatrix> svd(sys, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(0) > 0 && s(3) > tol * s(0)) fail(ErrorCode::NotUnitarizable, "no invariant Hermitian form");
  Eigen::Vector4d h = svd.matrixV().col(3);
  Mat2 hm = h(0) * basis[0] + h(1) * basis[1] + h(2) * basis[2] + h(3) * basis[3];
  if (hm(0, 0).real() < 0) hm = -hm;
  const double det = hm.determinant().real();
  if (hm(0, 0).real() <= 0 || det <= tol * hm.squaredNorm())
    fail(ErrorCode::NotUnitarizable, "invariant Hermitian form is not definite");
  Eigen::LLT<Mat2> llt(hm);
  Mat2 sm = llt.matrixU();
  sm /= std::sqrt(sm.determinant());
  Representation out = rep.conjugated(Sl2Matrix::checked(sm, 1e-8));
  for (int g = 0; g < n; ++g)
    if (!out.image(g).is_special_unitary(1e-7)) fail(ErrorCode::NotUnitarizable, "conjugated image is not unitary");
  return Representation(Flavor::SU2, out.images());
}

// g with g P g^-1 = [[e, 1], [0, e]] for a parabolic P of trace 2e.
inline Sl2Matrix parabolic_normalizer(const Sl2Matrix& p) {
  const cplx e = p.trace() / 2.0;
  const Mat2 n = p.matrix() - e * Mat2::Identity();
  // n is nilpotent of rank 1: v spans ker n = im n, n w = v.
  const Matrix w0 = Matrix::Identity(2, 1);
  const Matrix w1 = Matrix::Identity(2, 2).col(1);
  const Matrix w = Matrix(n * w0).norm() >= Matrix(n * w1).norm() ? w0 : w1;
  const Matrix v = n * w;
  Mat2 basis;
  basis << v(0, 0), w(0, 0), v(1, 0), w(1, 0);
  basis /= std::sqrt(basis.determinant());
  return Sl2Matrix::checked(basis, 1e-8).inverse();
}

// The figure-eight holonomy character: x1 = (3 + i sqrt 3)/2, x2 = conj(x1),
// x3 = x1 (so Tr a + Tr b = 3 on the fixed locus). The lift whose meridian
// has trace 2 sign is conjugated to rho(t) = [[sign, 1], [0, sign]].
inline Point3 figure_eight_holonomy_character() {
  const cplx x1(1.5, std::sqrt(3.0) / 2.0);
  return {x1, std::conj(x1), x1};
}

inline Representation holonomy_representation(int sign, const LiftOptions& opt = {}) {
  if (sign != 1 && sign != -1) fail(ErrorCode::InvalidInput, "holonomy lift sign must be +1 or -1");
  const FiberedKnot k = figure_eight();
  Representation rep = lift_character_to_rep(k, figure_eight_holonomy_character(), LiftBranch::Principal, opt);
  if (std::abs(rep.image(2).trace() - 2.0 * sign) > 1e-6)
    rep = lift_character_to_rep(k, figure_eight_holonomy_character(), LiftBranch::Negated, opt);
  if (std::abs(rep.image(2).trace() - 2.0 * sign) > 1e-6)
    fail(ErrorCode::DegenerateLift, "meridian is not parabolic at the holonomy character");
  return rep.conjugated(parabolic_normalizer(rep.image(2)));
}

}  // namespace fibertor
