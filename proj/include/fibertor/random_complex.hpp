#pragma once

// Seeded generators for based chain complexes and short exact sequences.
// Used by the property suites and by `fibertor verify`.

#include <random>
#include <vector>

#include "fibertor/torsion_core.hpp"

namespace fibertor {

struct RandomComplexSpec {
  int max_top = 4;            // degrees 0..top, top <= max_top
  Eigen::Index max_dim = 6;   // dim C_i <= max_dim
  bool complex_entries = true;
};

inline Matrix random_invertible(Eigen::Index n, std::mt19937_64& rng, bool complex_entries) {
  Matrix m = detail::random_matrix(n, n, rng, complex_entries);
  while (n > 0 && smallest_singular_ratio(m) < 1e-2) m = detail::random_matrix(n, n, rng, complex_entries);
  return m;
}

// Random complex with random boundary ranks, conjugated by random
// well-conditioned changes of coordinates in every degree.
inline BasedChainComplex random_complex(std::mt19937_64& rng, const RandomComplexSpec& spec = {}) {
  std::uniform_int_distribution<int> top_dist(0, spec.max_top);
  std::uniform_int_distribution<Eigen::Index> dim_dist(0, spec.max_dim);
  const int top = top_dist(rng);
  std::vector<Eigen::Index> dims(top + 1);
  for (auto& d : dims) d = dim_dist(rng);
  // rank[i] = rank d_i, i = 1..top; need rank[i] + rank[i+1] <= dims[i]
  std::vector<Eigen::Index> rank(top + 2, 0);
  for (int i = 1; i <= top; ++i) {
    const Eigen::Index room_below = dims[i - 1] - rank[i - 1];
    const Eigen::Index cap = std::min(room_below, dims[i]);
    std::uniform_int_distribution<Eigen::Index> r(0, cap);
    rank[i] = r(rng);
  }
  std::vector<Matrix> coords(top + 1);
  for (int i = 0; i <= top; ++i) coords[i] = random_invertible(dims[i], rng, spec.complex_entries);
  std::vector<Matrix> bd;
  for (int i = 1; i <= top; ++i) {
    // split form: last rank[i] coordinates of C_i onto the first rank[i] of C_{i-1}
    Matrix split = Matrix::Zero(dims[i - 1], dims[i]);
    for (Eigen::Index k = 0; k < rank[i]; ++k) split(k, dims[i] - rank[i] + k) = 1.0;
    bd.push_back(coords[i - 1] * split * coords[i].inverse());
  }
  return BasedChainComplex(dims, bd);
}

// Random valid homology basis for every degree (chain degrees).
inline void randomize_homology_bases(BasedChainComplex& c, std::mt19937_64& rng, bool complex_entries = true) {
  const HomologyData hd = homology(c);
  for (int i = 0; i <= c.top(); ++i) {
    const auto& deg = hd.degrees[i];
    Matrix h = deg.harmonic * random_invertible(deg.dim(), rng, complex_entries);
    if (deg.boundaries.cols() > 0 && deg.dim() > 0)
      h += deg.boundaries * detail::random_matrix(deg.boundaries.cols(), deg.dim(), rng, complex_entries);
    c.set_homology_basis(c.source_direction() == Direction::Cochain ? c.top() - i : i, h);
  }
}

inline BasedChainComplex with_top(const BasedChainComplex& c, int top) {
  std::vector<Eigen::Index> dims = c.dims();
  std::vector<Matrix> bd;
  for (int i = 1; i <= c.top(); ++i) bd.push_back(c.boundary(i));
  while (static_cast<int>(dims.size()) < top + 1) {
    bd.push_back(Matrix::Zero(dims.back(), 0));
    dims.push_back(0);
  }
  BasedChainComplex out(dims, bd);
  for (int i = 0; i <= c.top(); ++i) {
    if (c.has_homology_basis(i)) out.set_homology_basis(i, *c.homology_basis(i));
    out.set_reference_basis(i, c.reference_basis(i));
  }
  return out;
}

// C = C' (+) C'' with an off-diagonal twist d = [[d', X],[0, d'']], where
// X_i = d'_i K_i - K_{i-1} d''_i keeps d o d = 0. Block reference bases.
inline ShortExactSequence random_block_sequence(std::mt19937_64& rng, const RandomComplexSpec& spec = {}) {
  BasedChainComplex sub = random_complex(rng, spec);
  BasedChainComplex quot = random_complex(rng, spec);
  const int top = std::max(sub.top(), quot.top());
  sub = with_top(sub, top);
  quot = with_top(quot, top);
  std::vector<Matrix> homotopy(top + 1);
  for (int i = 0; i <= top; ++i) homotopy[i] = detail::random_matrix(sub.dim(i), quot.dim(i), rng, spec.complex_entries);
  std::vector<Eigen::Index> dims(top + 1);
  for (int i = 0; i <= top; ++i) dims[i] = sub.dim(i) + quot.dim(i);
  std::vector<Matrix> bd;
  for (int i = 1; i <= top; ++i) {
    Matrix d = Matrix::Zero(dims[i - 1], dims[i]);
    const Matrix x = sub.boundary(i) * homotopy[i] - homotopy[i - 1] * quot.boundary(i);
    d.topLeftCorner(sub.dim(i - 1), sub.dim(i)) = sub.boundary(i);
    d.topRightCorner(sub.dim(i - 1), quot.dim(i)) = x;
    d.bottomRightCorner(quot.dim(i - 1), quot.dim(i)) = quot.boundary(i);
    bd.push_back(d);
  }
  ShortExactSequence ses{sub, quot, quot, {}, {}};
  ses.mid = BasedChainComplex(dims, bd);
  for (int i = 0; i <= top; ++i) {
    Matrix in = Matrix::Zero(dims[i], sub.dim(i));
    in.topRows(sub.dim(i)) = Matrix::Identity(sub.dim(i), sub.dim(i));
    Matrix pr = Matrix::Zero(quot.dim(i), dims[i]);
    pr.rightCols(quot.dim(i)) = Matrix::Identity(quot.dim(i), quot.dim(i));
    ses.inclusion.push_back(in);
    ses.projection.push_back(pr);
  }
  randomize_homology_bases(ses.sub, rng, spec.complex_entries);
  randomize_homology_bases(ses.mid, rng, spec.complex_entries);
  randomize_homology_bases(ses.quot, rng, spec.complex_entries);
  return ses;
}

// Mapping cone of the identity: C_i = C'_i (+) C'_{i-1},
// d = [[d', 1],[0, -d']], quotient C''_i = C'_{i-1} with boundary -d'.
// C is acyclic and the connecting maps are isomorphisms.
inline ShortExactSequence random_cone_sequence(std::mt19937_64& rng, const RandomComplexSpec& spec = {}) {
  RandomComplexSpec inner = spec;
  inner.max_top = std::max(0, spec.max_top - 1);
  BasedChainComplex base = random_complex(rng, inner);
  const int top = base.top() + 1;
  BasedChainComplex sub = with_top(base, top);
  std::vector<Eigen::Index> qdims(top + 1, 0);
  for (int i = 1; i <= top; ++i) qdims[i] = base.dim(i - 1);
  std::vector<Matrix> qbd;
  for (int i = 1; i <= top; ++i) qbd.push_back(-base.boundary(i - 1));
  BasedChainComplex quot(qdims, qbd);
  std::vector<Eigen::Index> dims(top + 1);
  for (int i = 0; i <= top; ++i) dims[i] = sub.dim(i) + quot.dim(i);
  std::vector<Matrix> bd;
  for (int i = 1; i <= top; ++i) {
    Matrix d = Matrix::Zero(dims[i - 1], dims[i]);
    d.topLeftCorner(sub.dim(i - 1), sub.dim(i)) = sub.boundary(i);
    // quot_i = sub_{i-1}: identity block
    d.topRightCorner(sub.dim(i - 1), quot.dim(i)) = Matrix::Identity(sub.dim(i - 1), quot.dim(i));
    d.bottomRightCorner(quot.dim(i - 1), quot.dim(i)) = quot.boundary(i);
    bd.push_back(d);
  }
  ShortExactSequence ses{sub, BasedChainComplex(dims, bd), quot, {}, {}};
  for (int i = 0; i <= top; ++i) {
    Matrix in = Matrix::Zero(dims[i], sub.dim(i));
    in.topRows(sub.dim(i)) = Matrix::Identity(sub.dim(i), sub.dim(i));
    Matrix pr = Matrix::Zero(quot.dim(i), dims[i]);
    pr.rightCols(quot.dim(i)) = Matrix::Identity(quot.dim(i), quot.dim(i));
    ses.inclusion.push_back(in);
    ses.projection.push_back(pr);
  }
  randomize_homology_bases(ses.sub, rng, spec.complex_entries);
  randomize_homology_bases(ses.mid, rng, spec.complex_entries);
  randomize_homology_bases(ses.quot, rng, spec.complex_entries);
  return ses;
}

}  // namespace fibertor
