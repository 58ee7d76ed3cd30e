#pragma once

// Twisted monodromy on H^1(F; g_rho), its eigenvalues and the torsion
// formula T = -eps0 * prod 1/(1 - lambda_i) over the non-unit eigenvalues.

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fibertor/cochain.hpp"
#include "fibertor/knot.hpp"
#include "fibertor/lift.hpp"
#include "fibertor/torsion_core.hpp"
#include "fibertor/trace_map.hpp"

namespace fibertor {

enum class Method { Cohomology, Jacobian, ClosedForm };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Cohomology: return "cohomology";
    case Method::Jacobian: return "jacobian";
    case Method::ClosedForm: return "closed_form";
  }
  return "unknown";
}

struct TorsionReport {
  cplx torsion;
  int epsilon0 = 1;
  std::vector<cplx> eigenvalues;  // non-unit eigenvalues, sorted
  double unit_eigenvalue_gap = 0.0;
  Method method = Method::Cohomology;
  std::optional<std::vector<cplx>> jacobian_eigenvalues;  // full multiset, genus 1
};

// Sort by real part, then imaginary part; real parts closer than 1e-9 tie.
inline void sort_eigenvalues(std::vector<cplx>& v) {
  std::sort(v.begin(), v.end(), [](const cplx& a, const cplx& b) {
    if (std::abs(a.real() - b.real()) > 1e-9) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

inline std::vector<cplx> eigenvalues(const Matrix& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<Matrix> es(m, false);
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  sort_eigenvalues(out);
  return out;
}

inline std::vector<cplx> eigenvalues_excluding_one(const Matrix& m, const Tolerance& tol = {}) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "eigenvalues need a square matrix");
  const auto all = eigenvalues(m);
  std::vector<cplx> rest;
  int unit = 0;
  for (const auto& l : all) {
    if (std::abs(l - 1.0) < tol.unit_eigenvalue)
      ++unit;
    else
      rest.push_back(l);
  }
  if (unit == 0) fail(ErrorCode::NoUnitEigenvalue, "1 is not an eigenvalue: the representation is not regular");
  if (unit > 1)
    fail(ErrorCode::NonSimpleUnitEigenvalue, std::to_string(unit) + " eigenvalues within tolerance of 1");
  return rest;
}

// The action h -> Ad_{rho(t)} h(phi(.)) on C^1(F) = g^{2g} (left cocycle
// convention), with the coboundary space and an orthonormal complement Q
// realizing H^1(F) = C^1/B^1.
struct MonodromyAction {
  Matrix on_cochains;    // 6g x 6g
  Matrix coboundary;     // d^0 of the fiber, 6g x 3
  Matrix complement;     // Q, 6g x (6g - 3), orthonormal, Q^* B^1 = 0
  Matrix on_cohomology;  // Q^* M Q
};

inline MonodromyAction twisted_monodromy(const FiberedKnot& k, const Representation& rep, const Tolerance& tol = {}) {
  k.validate();
  check_relators(k.presentation(), rep, tol);
  const int n = k.fiber_rank();
  const Representation fiber = rep.restricted(n);
  MonodromyAction act;
  act.coboundary = coboundary_zero(fiber);
  if (numerical_rank(act.coboundary, tol) != 3)
    fail(ErrorCode::ReducibleFiberRestriction, "the fiber restriction fixes a nonzero vector of the Lie algebra");
  const Mat3 ad_t = adjoint(rep.image(k.meridian_index()), rep.flavor());
  act.on_cochains.resize(3 * n, 3 * n);
  for (int i = 0; i < n; ++i) act.on_cochains.middleRows(3 * i, 3) = ad_t * word_cocycle_row(fiber, k.monodromy[i]);
  act.complement = complement_basis(act.coboundary, 3 * n, tol);
  const Matrix moved = act.complement.adjoint() * act.on_cochains * act.coboundary;
  const double scale = std::max(1.0, act.on_cochains.norm() * act.coboundary.norm());
  if (moved.norm() > tol.complex_check * scale * 10)
    fail(ErrorCode::CoboundariesNotPreserved, "the monodromy does not preserve coboundaries");
  act.on_cohomology = act.complement.adjoint() * act.on_cochains * act.complement;
  return act;
}

inline Matrix twisted_monodromy_on_H1(const FiberedKnot& k, const Representation& rep, const Tolerance& tol = {}) {
  return twisted_monodromy(k, rep, tol).on_cohomology;
}

// Generator of ker(M - 1) for the simple unit eigenvalue.
inline Vector unit_eigenvector(const Matrix& m, const Tolerance& tol = {}) {
  eigenvalues_excluding_one(m, tol);
  const Matrix shifted = m - Matrix::Identity(m.rows(), m.cols());
  auto svd = full_svd(shifted);
  return svd.matrixV().col(m.cols() - 1);
}

inline TorsionReport torsion_from_eigenvalues(std::vector<cplx> lambdas, int eps0, Method method,
                                              const Tolerance& tol) {
  TorsionReport r;
  r.epsilon0 = eps0;
  r.method = method;
  cplx prod = 1.0;
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& l : lambdas) {
    const double d = std::abs(1.0 - l);
    if (d < tol.unit_eigenvalue) fail(ErrorCode::UnitEigenvalueDivision, "retained eigenvalue too close to 1");
    gap = std::min(gap, d);
    prod /= (1.0 - l);
  }
  r.unit_eigenvalue_gap = lambdas.empty() ? 0.0 : gap;
  r.torsion = -static_cast<double>(eps0) * prod;
  r.eigenvalues = std::move(lambdas);
  return r;
}

inline Point3 character_of(const Representation& rep) {
  return {rep.image(0).trace(), rep.image(1).trace(), (rep.image(0) * rep.image(1)).trace()};
}

inline TorsionReport main_theorem_torsion(const FiberedKnot& k, const Representation& rep, const Tolerance& tol = {}) {
  const int eps0 = epsilon0(k);
  const Matrix h1 = twisted_monodromy_on_H1(k, rep, tol);
  TorsionReport r = torsion_from_eigenvalues(eigenvalues_excluding_one(h1, tol), eps0, Method::Cohomology, tol);
  if (k.genus == 1 && k.trace_map) {
    const Matrix j = trace_jacobian(*k.trace_map, character_of(rep));
    r.jacobian_eigenvalues = eigenvalues(j);
  }
  return r;
}

// Same formula with the eigenvalues of the trace-map Jacobian at x.
inline TorsionReport jacobian_torsion(const FiberedKnot& k, const Point3& x, const Tolerance& tol = {}) {
  const TraceMap& p = require_trace_map(k);
  const double scale = std::max({1.0, std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
  if (fixed_point_defect(p, x) > tol.relator * scale * scale * scale)
    fail(ErrorCode::NotFixedPoint, "the character is not fixed by the trace map");
  const cplx kappa = commutator_trace(x[0], x[1], x[2]);
  if (std::abs(kappa - 2.0) <= tol.relator * std::max(1.0, std::abs(kappa)))
    fail(ErrorCode::ReducibleCharacter, "Tr[A,B] = 2: the character is reducible");
  const Matrix j = trace_jacobian(p, x);
  TorsionReport r = torsion_from_eigenvalues(eigenvalues_excluding_one(j, tol), epsilon0(k), Method::Jacobian, tol);
  r.jacobian_eigenvalues = eigenvalues(j);
  return r;
}

// 0 -> H^1(M) -> H^1(F) --(Id - phi^*)--> H^1(F) -> H^2(M) -> 0 on the
// H^1(F) coordinates of `action`. Both middle terms carry the basis
// (w_1..w_{n-1}, u): w spans im(Id - phi^*), u spans ker(Id - phi^*);
// the outer terms carry the generators mapping to u and dual to u.
inline BasedChainComplex wang_complex(const Matrix& action, const Tolerance& tol = {}) {
  const Eigen::Index n = action.rows();
  eigenvalues_excluding_one(action, tol);
  const Matrix id_minus = Matrix::Identity(n, n) - action;
  const Matrix w = image_basis(id_minus, tol);
  const Matrix u = kernel_basis(id_minus, tol);
  if (w.cols() != n - 1 || u.cols() != 1)
    fail(ErrorCode::NonSimpleUnitEigenvalue, "Id - phi^* does not have corank one");
  const Matrix basis = hstack({&w, &u}, n);
  const Matrix ell = Eigen::PartialPivLU<Matrix>(basis).inverse().bottomRows(1);
  auto c = BasedChainComplex::from_cochain({1, n, n, 1}, {u, id_minus, ell}, tol);
  c.set_reference_basis(1, basis);
  c.set_reference_basis(2, basis);
  return c;
}

inline cplx wang_sequence_torsion(const FiberedKnot& k, const Representation& rep, const Tolerance& tol = {}) {
  return torsion(wang_complex(twisted_monodromy_on_H1(k, rep, tol), tol), TorsionOptions{tol});
}

// Mapping-torus sequence 0 -> C^{*-1}(F) -> C^*(X_K) -> C^*(F) -> 0 of
// twisted cochain complexes. The inclusion sends v in C^0(F) to the
// t-component and w in C^1(F) to the relator cochain r_j -> Ad_{rho(t)^-1} w(x_j).
// Homology bases are the Wang bases: (w, u) lifted to C^1(F) on both
// fiber terms; on X_K a cocycle restricting to u and the image of u.
struct MappingTorusSequence {
  ShortExactSequence ses;
  BasedChainComplex wang;
};

inline MappingTorusSequence mapping_torus_sequence(const FiberedKnot& k, const Representation& rep,
                                                   const Tolerance& tol = {}) {
  const MonodromyAction act = twisted_monodromy(k, rep, tol);
  const int n = k.fiber_rank();
  const Eigen::Index c1 = 3 * n;
  const Eigen::Index h = act.on_cohomology.rows();

  const Matrix id_minus = Matrix::Identity(h, h) - act.on_cohomology;
  eigenvalues_excluding_one(act.on_cohomology, tol);
  const Matrix w = image_basis(id_minus, tol);
  const Matrix u = kernel_basis(id_minus, tol);
  const Matrix hbasis = act.complement * hstack({&w, &u}, h);  // in C^1(F)
  const Matrix u_cochain = act.complement * u;

  const Representation fiber = rep.restricted(n);
  const auto x_complex = twisted_cochain_complex(k.presentation(), rep, tol);
  const Matrix d1_x = coboundary_one(k.presentation(), rep);
  const Matrix d0_f = coboundary_zero(fiber);

  // C^*(F) padded to degrees 0..2, and its shift C^{*-1}(F).
  auto quot = BasedChainComplex::from_cochain({3, c1, 0}, {d0_f, Matrix(0, c1)}, tol);
  auto sub = BasedChainComplex::from_cochain({0, 3, c1}, {Matrix(3, 0), d0_f}, tol);
  quot.set_homology_basis(1, hbasis);
  sub.set_homology_basis(2, hbasis);

  const Mat3 ad_tinv = adjoint(rep.image(k.meridian_index()).inverse(), rep.flavor());
  Matrix incl1 = Matrix::Zero(c1 + 3, 3);
  incl1.bottomRows(3) = Matrix::Identity(3, 3);
  Matrix incl2 = Matrix::Zero(c1, c1);
  for (int j = 0; j < n; ++j) incl2.block(3 * j, 3 * j, 3, 3) = ad_tinv;
  Matrix proj0 = Matrix::Identity(3, 3);
  Matrix proj1 = Matrix::Zero(c1, c1 + 3);
  proj1.leftCols(c1) = Matrix::Identity(c1, c1);

  // H^1(X_K): cocycle whose restriction has class u.
  const Matrix z1 = kernel_basis(d1_x, tol);
  const Matrix restricted_classes = act.complement.adjoint() * z1.topRows(c1);
  const Matrix coeff = least_squares(restricted_classes, u);
  const Matrix h1 = z1 * coeff;
  const Matrix h2 = incl2 * u_cochain;

  auto mid = x_complex;
  mid.set_homology_basis(1, h1);
  mid.set_homology_basis(2, h2);

  MappingTorusSequence out;
  // chain degree j = 2 - cochain degree
  out.ses.sub = std::move(sub);
  out.ses.mid = std::move(mid);
  out.ses.quot = std::move(quot);
  out.ses.inclusion = {incl2, incl1, Matrix(3, 0)};
  out.ses.projection = {Matrix(0, c1), proj1, proj0};
  out.wang = wang_complex(act.on_cohomology, tol);
  return out;
}

}  // namespace fibertor
