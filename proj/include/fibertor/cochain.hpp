#pragma once

// Twisted cochain complex C^*(X; g_rho) of the presentation 2-complex X of
// a finitely presented group, with coefficients in the Lie algebra acted on
// through Ad o rho.
//
// Cocycle convention (left): a 1-cochain is its list of values h(g) on the
// generators, extended to words by h(uv) = h(u) + Ad_{rho(u)} h(v). Hence
//   (d^0 v)(g) = Ad_{rho(g)} v - v,
//   (d^1 h)(r) = h(r) = sum_g Ad o rho (dr/dg) h(g).

#include <vector>

#include "fibertor/sl2.hpp"
#include "fibertor/torsion_core.hpp"

namespace fibertor {

// 3n x 3 matrix: stacked blocks Ad_{rho(g)} - I.
inline Matrix coboundary_zero(const Representation& rep) {
  const int n = rep.generator_count();
  Matrix d0(3 * n, 3);
  for (int g = 0; g < n; ++g) d0.block(3 * g, 0, 3, 3) = adjoint(rep.image(g), rep.flavor()) - Mat3::Identity();
  return d0;
}

// 3 x 3n matrix sending generator values to the value on w.
inline Matrix word_cocycle_row(const Representation& rep, const Word& w) {
  const int n = rep.generator_count();
  Matrix row(3, 3 * n);
  for (int g = 0; g < n; ++g) row.block(0, 3 * g, 3, 3) = evaluate_group_ring(rep, fox_derivative(w, g));
  return row;
}

// 3m x 3n matrix: blocks Ad o rho(dr/dg).
inline Matrix coboundary_one(const GroupPresentation& p, const Representation& rep) {
  const int n = p.generator_count();
  const int m = static_cast<int>(p.relators.size());
  Matrix d1(3 * m, 3 * n);
  for (int r = 0; r < m; ++r) d1.middleRows(3 * r, 3) = word_cocycle_row(rep, p.relators[r]);
  return d1;
}

// C^0 = g (dim 3) -> C^1 = g^{#gens} -> C^2 = g^{#relators}, normalized to
// chain form by the torsion engine.
inline BasedChainComplex twisted_cochain_complex(const GroupPresentation& p, const Representation& rep,
                                                 const Tolerance& tol = {}) {
  p.validate();
  check_relators(p, rep, tol);
  const Eigen::Index n = p.generator_count();
  const Eigen::Index m = static_cast<Eigen::Index>(p.relators.size());
  return BasedChainComplex::from_cochain({3, 3 * n, 3 * m}, {coboundary_zero(rep), coboundary_one(p, rep)}, tol);
}

// Twisted cohomology dimensions (H^0, H^1, H^2).
inline std::vector<Eigen::Index> twisted_cohomology_dims(const GroupPresentation& p, const Representation& rep,
                                                          const Tolerance& tol = {}) {
  const auto c = twisted_cochain_complex(p, rep, tol);
  return homology(c, tol).dims_in(c);
}

}  // namespace fibertor
