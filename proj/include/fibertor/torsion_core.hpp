#pragma once

// Reidemeister torsion of finite based, homology-based chain complexes over
// R or C, its sign-determined refinement, and the sign bookkeeping of the
// multiplicativity lemma for short exact sequences.
//
// Conventions. A complex is stored in chain form
//     0 -> C_n --d_n--> C_{n-1} -> ... --d_1--> C_0 -> 0
// with d_i a dim(C_{i-1}) x dim(C_i) matrix in standard coordinates.
// Cochain complexes C^0 -> ... -> C^n are normalized on construction by
// C_j = C^{n-j}. Reference bases c^i and homology bases h^i are column
// matrices in the same standard coordinates.
//
// The torsion is
//     tor(C) = prod_i [ d_{i+1}(b^{i+1}) h~^i b^i / c^i ]^{(-1)^{i+1}}
// with the concatenation order kept exactly as written.

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "fibertor/linalg.hpp"

namespace fibertor {

enum class Direction { Chain, Cochain };

// Ordered basis: the columns of `vectors`.
struct Basis {
  Matrix vectors;

  Basis() = default;
  explicit Basis(Matrix v) : vectors(std::move(v)) {}

  Eigen::Index size() const { return vectors.cols(); }
  Eigen::Index ambient() const { return vectors.rows(); }
};

// [a/b]: determinant of the matrix expressing the vectors of a in terms of b.
inline cplx change_of_basis_det(const Basis& a, const Basis& b, const Tolerance& tol = {}) {
  if (a.size() != b.size() || a.ambient() != b.ambient())
    fail(ErrorCode::DimensionMismatch, "change_of_basis_det: bases differ in size or ambient dimension");
  if (b.size() == 0) return 1.0;
  if (numerical_rank(b.vectors, tol) != b.size())
    fail(ErrorCode::SingularBasis, "change_of_basis_det: reference basis is not independent");
  const Matrix coeff = least_squares(b.vectors, a.vectors);
  const double scale = std::max(1.0, a.vectors.norm());
  if ((b.vectors * coeff - a.vectors).norm() > tol.complex_check * scale)
    fail(ErrorCode::InvalidInput, "change_of_basis_det: vectors do not lie in the span of the reference basis");
  return coeff.determinant();
}

class BasedChainComplex {
 public:
  BasedChainComplex() = default;

  // Chain form: dims[i] = dim C_i, boundaries[k] = d_{k+1}.
  BasedChainComplex(std::vector<Eigen::Index> dims, std::vector<Matrix> boundaries,
                    const Tolerance& tol = {})
      : dims_(std::move(dims)), boundaries_(std::move(boundaries)) {
    if (!dims_.empty() && boundaries_.size() + 1 != dims_.size())
      fail(ErrorCode::DimensionMismatch, "expected one boundary matrix per adjacent pair of degrees");
    if (dims_.empty() && !boundaries_.empty())
      fail(ErrorCode::DimensionMismatch, "boundaries given for an empty complex");
    for (std::size_t k = 0; k < boundaries_.size(); ++k) {
      const auto& d = boundaries_[k];
      if (d.rows() != dims_[k] || d.cols() != dims_[k + 1])
        fail(ErrorCode::DimensionMismatch, "boundary d_" + std::to_string(k + 1) + " has the wrong shape");
    }
    reference_.resize(dims_.size());
    homology_.resize(dims_.size());
    check_square_zero(tol);
  }

  // Cochain form: dims[k] = dim C^k, coboundaries[k] = d^k : C^k -> C^{k+1}.
  static BasedChainComplex from_cochain(const std::vector<Eigen::Index>& dims,
                                        const std::vector<Matrix>& coboundaries,
                                        const Tolerance& tol = {}) {
    if (!dims.empty() && coboundaries.size() + 1 != dims.size())
      fail(ErrorCode::DimensionMismatch, "expected one coboundary matrix per adjacent pair of degrees");
    std::vector<Eigen::Index> chain_dims(dims.rbegin(), dims.rend());
    std::vector<Matrix> chain_bd(coboundaries.rbegin(), coboundaries.rend());
    BasedChainComplex c(std::move(chain_dims), std::move(chain_bd), tol);
    c.direction_ = Direction::Cochain;
    return c;
  }

  Direction source_direction() const { return direction_; }
  int top() const { return static_cast<int>(dims_.size()) - 1; }
  std::size_t length() const { return dims_.size(); }
  bool empty() const { return dims_.empty(); }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index dim(int i) const { return (i < 0 || i > top()) ? 0 : dims_[i]; }

  // Chain degree corresponding to `degree` in the source convention.
  int chain_degree(int degree) const { return direction_ == Direction::Cochain ? top() - degree : degree; }

  // d_i : C_i -> C_{i-1}; zero for i <= 0 and i > top.
  Matrix boundary(int i) const {
    if (i >= 1 && i <= top()) return boundaries_[i - 1];
    return Matrix::Zero(dim(i - 1), dim(i));
  }

  Matrix reference_basis(int i) const {
    if (i >= 0 && i <= top() && reference_[i]) return *reference_[i];
    return Matrix::Identity(dim(i), dim(i));
  }
  const std::optional<Matrix>& homology_basis(int i) const {
    static const std::optional<Matrix> none;
    return (i >= 0 && i <= top()) ? homology_[i] : none;
  }
  bool has_homology_basis(int i) const { return homology_basis(i).has_value(); }

  // Setters take the degree in the source convention (cochain degree for
  // complexes built with from_cochain).
  BasedChainComplex& set_reference_basis(int degree, Matrix basis) {
    const int i = checked_degree(degree);
    if (basis.rows() != dims_[i] || basis.cols() != dims_[i])
      fail(ErrorCode::DimensionMismatch, "reference basis must be square of size dim C_i");
    reference_[i] = std::move(basis);
    return *this;
  }
  BasedChainComplex& set_homology_basis(int degree, Matrix basis) {
    const int i = checked_degree(degree);
    if (basis.rows() != dims_[i]) fail(ErrorCode::DimensionMismatch, "homology basis vectors have the wrong length");
    homology_[i] = std::move(basis);
    return *this;
  }
  BasedChainComplex& clear_homology_bases() {
    for (auto& h : homology_) h.reset();
    return *this;
  }

 private:
  int checked_degree(int degree) const {
    if (degree < 0 || degree > top()) fail(ErrorCode::InvalidInput, "degree out of range");
    return chain_degree(degree);
  }

  void check_square_zero(const Tolerance& tol) const {
    for (int i = 2; i <= top(); ++i) {
      const Matrix& a = boundaries_[i - 2];
      const Matrix& b = boundaries_[i - 1];
      if (a.size() == 0 || b.size() == 0) continue;
      const double scale = std::max(1.0, a.norm() * b.norm());
      if ((a * b).norm() > tol.complex_check * scale)
        fail(ErrorCode::NotAComplex, "d_" + std::to_string(i - 1) + " o d_" + std::to_string(i) + " != 0");
    }
  }

  std::vector<Eigen::Index> dims_;
  std::vector<Matrix> boundaries_;
  std::vector<std::optional<Matrix>> reference_;
  std::vector<std::optional<Matrix>> homology_;
  Direction direction_ = Direction::Chain;
};

struct HomologyDegree {
  Matrix cycles;      // orthonormal basis of Z_i
  Matrix boundaries;  // orthonormal basis of B_i
  Matrix harmonic;    // lift map H_i-coordinates -> Z_i (complement of B_i in Z_i)
  Eigen::Index dim() const { return harmonic.cols(); }
};

struct HomologyData {
  std::vector<HomologyDegree> degrees;  // chain degrees

  std::vector<Eigen::Index> dims() const {
    std::vector<Eigen::Index> out;
    for (const auto& d : degrees) out.push_back(d.dim());
    return out;
  }
  // Dimensions in the source convention of `c` (cohomological order for
  // complexes built from cochains).
  std::vector<Eigen::Index> dims_in(const BasedChainComplex& c) const {
    auto out = dims();
    if (c.source_direction() == Direction::Cochain) std::reverse(out.begin(), out.end());
    return out;
  }
};

inline HomologyData homology(const BasedChainComplex& c, const Tolerance& tol = {}) {
  HomologyData data;
  for (int i = 0; i <= c.top(); ++i) {
    HomologyDegree deg;
    const Eigen::Index n = c.dim(i);
    deg.cycles = (i == 0 || c.dim(i - 1) == 0) ? Matrix(Matrix::Identity(n, n)) : kernel_basis(c.boundary(i), tol);
    deg.boundaries = (i == c.top() || c.dim(i + 1) == 0) ? Matrix(n, 0) : image_basis(c.boundary(i + 1), tol);
    if (deg.boundaries.cols() > deg.cycles.cols())
      fail(ErrorCode::NotAComplex, "im d_{i+1} larger than ker d_i in degree " + std::to_string(i));
    // Complement of B_i inside Z_i, written in Z_i coordinates then mapped back.
    const Matrix b_in_z = deg.cycles.adjoint() * deg.boundaries;
    const Matrix comp = complement_basis(b_in_z, deg.cycles.cols(), tol);
    deg.harmonic = deg.cycles * comp;
    data.degrees.push_back(std::move(deg));
  }
  return data;
}

// Sign bookkeeping in chain degrees.
struct SignData {
  std::vector<int> alpha;
  std::vector<int> beta;
  int complex_sign = 0;
};

inline std::vector<int> parity_prefix(const std::vector<Eigen::Index>& dims) {
  std::vector<int> out;
  long long s = 0;
  for (auto d : dims) {
    s += d;
    out.push_back(static_cast<int>(s & 1));
  }
  return out;
}

inline SignData sign_data(const std::vector<Eigen::Index>& dims, const std::vector<Eigen::Index>& homology_dims) {
  if (dims.size() != homology_dims.size()) fail(ErrorCode::DimensionMismatch, "sign_data: length mismatch");
  SignData s;
  s.alpha = parity_prefix(dims);
  s.beta = parity_prefix(homology_dims);
  int acc = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) acc ^= (s.alpha[k] & s.beta[k]);
  s.complex_sign = acc;
  return s;
}

// Controls the internal choices b^i and lifts h~^i. The default is the
// deterministic pivoted choice; passing an engine randomizes both, which the
// invariance tests use.
struct TorsionOptions {
  Tolerance tol{};
  std::mt19937_64* randomize = nullptr;
};

namespace detail {

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, bool complex_entries) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(n(rng), complex_entries ? n(rng) : 0.0);
  return m;
}

// Vectors b in C_i with d_i(b) a basis of B_{i-1}.
inline Matrix choose_preimages(const BasedChainComplex& c, int i, const HomologyData& hd,
                               const TorsionOptions& opt) {
  const Eigen::Index n = c.dim(i);
  if (i == 0 || c.dim(i - 1) == 0 || n == 0) return Matrix(n, 0);
  const Matrix d = c.boundary(i);
  const auto cols = pivot_columns(d, opt.tol);
  Matrix b = Matrix::Zero(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) b(cols[k], static_cast<Eigen::Index>(k)) = 1.0;
  if (opt.randomize && b.cols() > 0) {
    auto& rng = *opt.randomize;
    Matrix mix = random_matrix(b.cols(), b.cols(), rng, true);
    while (smallest_singular_ratio(mix) < 1e-3) mix = random_matrix(b.cols(), b.cols(), rng, true);
    b = b * mix;
    const Matrix& z = hd.degrees[i].cycles;
    if (z.cols() > 0) b += z * random_matrix(z.cols(), b.cols(), rng, true);
  }
  return b;
}

inline Matrix lift_homology_basis(const BasedChainComplex& c, int i, const HomologyData& hd,
                                  const TorsionOptions& opt) {
  const auto& deg = hd.degrees[i];
  const Eigen::Index h = deg.dim();
  const auto& supplied = c.homology_basis(i);
  if (!supplied) {
    if (h > 0)
      fail(ErrorCode::MissingHomologyBasis, "H_" + std::to_string(i) + " is nonzero but has no reference basis");
    return Matrix(c.dim(i), 0);
  }
  if (supplied->cols() != h)
    fail(ErrorCode::NotAHomologyBasis, "homology basis in degree " + std::to_string(i) + " has " +
                                           std::to_string(supplied->cols()) + " vectors, dim H = " +
                                           std::to_string(h));
  if (h == 0) return Matrix(c.dim(i), 0);
  const Matrix& z = deg.cycles;
  Matrix lift = z * least_squares(z, *supplied);
  const double scale = std::max(1.0, supplied->norm());
  if ((lift - *supplied).norm() > opt.tol.complex_check * scale)
    fail(ErrorCode::NotAHomologyBasis, "homology basis vectors are not cycles in degree " + std::to_string(i));
  if (opt.randomize && deg.boundaries.cols() > 0)
    lift += deg.boundaries * random_matrix(deg.boundaries.cols(), h, *opt.randomize, true);
  return lift;
}

}  // namespace detail

// Per-degree factors [d(b^{i+1}) h~^i b^i / c^i], before exponentiation.
inline std::vector<cplx> torsion_factors(const BasedChainComplex& c, const TorsionOptions& opt = {}) {
  std::vector<cplx> factors;
  if (c.empty()) return factors;
  const HomologyData hd = homology(c, opt.tol);
  std::vector<Matrix> pre(c.length() + 1);
  for (int i = 0; i <= c.top(); ++i) pre[i] = detail::choose_preimages(c, i, hd, opt);
  pre[c.length()] = Matrix(0, 0);
  for (int i = 0; i <= c.top(); ++i) {
    const Eigen::Index n = c.dim(i);
    Matrix image = (i + 1 <= c.top()) ? Matrix(c.boundary(i + 1) * pre[i + 1]) : Matrix(n, 0);
    Matrix lift = detail::lift_homology_basis(c, i, hd, opt);
    Matrix combined = hstack({&image, &lift, &pre[i]}, n);
    if (combined.cols() != n)
      fail(ErrorCode::DegenerateLift, "degree " + std::to_string(i) + ": concatenated basis has " +
                                          std::to_string(combined.cols()) + " vectors, expected " +
                                          std::to_string(n));
    if (n == 0) {
      factors.push_back(1.0);
      continue;
    }
    if (smallest_singular_ratio(combined) <= opt.tol.rank)
      fail(ErrorCode::NotAHomologyBasis,
           "degree " + std::to_string(i) + ": homology basis does not project to a basis of H_i");
    factors.push_back(change_of_basis_det(Basis(combined), Basis(c.reference_basis(i)), opt.tol));
  }
  return factors;
}

inline cplx torsion(const BasedChainComplex& c, const TorsionOptions& opt = {}) {
  cplx result = 1.0;
  const auto factors = torsion_factors(c, opt);
  for (std::size_t i = 0; i < factors.size(); ++i) result *= (i % 2 == 1) ? factors[i] : 1.0 / factors[i];
  return result;
}

inline SignData sign_data(const BasedChainComplex& c, const Tolerance& tol = {}) {
  return sign_data(c.dims(), homology(c, tol).dims());
}

inline cplx sign_determined_torsion(const BasedChainComplex& c, const TorsionOptions& opt = {}) {
  const cplx t = torsion(c, opt);
  return sign_data(c, opt.tol).complex_sign ? -t : t;
}

// [h'/h] for two homology bases of H_i: coordinates of the classes of h'
// in terms of the classes of h.
inline cplx homology_change_det(const BasedChainComplex& c, int chain_deg, const Matrix& h_new,
                                const Matrix& h_old, const Tolerance& tol = {}) {
  const HomologyData hd = homology(c, tol);
  const Matrix& bnd = hd.degrees.at(chain_deg).boundaries;
  const Eigen::Index n = c.dim(chain_deg);
  const Matrix sys = hstack({&h_old, &bnd}, n);
  const Matrix coeff = least_squares(sys, h_new);
  return coeff.topRows(h_old.cols()).determinant();
}

// alpha(C', C'') and epsilon(C', C, C'') of the multiplicativity lemma.
// Lists are padded with zeros to a common length; alpha_{-1} = beta_{-1} = 0.
struct MultiplicativitySigns {
  int alpha = 0;
  int epsilon = 0;
  int total() const { return (alpha + epsilon) & 1; }
};

inline MultiplicativitySigns multiplicativity_signs(std::vector<Eigen::Index> dims_sub,
                                                    std::vector<Eigen::Index> dims_mid,
                                                    std::vector<Eigen::Index> dims_quot,
                                                    std::vector<Eigen::Index> hom_sub,
                                                    std::vector<Eigen::Index> hom_mid,
                                                    std::vector<Eigen::Index> hom_quot) {
  std::size_t len = 0;
  for (const auto* v : {&dims_sub, &dims_mid, &dims_quot, &hom_sub, &hom_mid, &hom_quot}) len = std::max(len, v->size());
  for (auto* v : {&dims_sub, &dims_mid, &dims_quot, &hom_sub, &hom_mid, &hom_quot}) v->resize(len, 0);
  const auto a_sub = parity_prefix(dims_sub);
  const auto a_quot = parity_prefix(dims_quot);
  const auto b_sub = parity_prefix(hom_sub);
  const auto b_mid = parity_prefix(hom_mid);
  const auto b_quot = parity_prefix(hom_quot);
  auto at = [](const std::vector<int>& v, std::size_t i, bool shifted) -> int {
    if (shifted) return i == 0 ? 0 : v[i - 1];
    return v[i];
  };
  MultiplicativitySigns s;
  for (std::size_t i = 0; i < len; ++i) {
    s.alpha ^= at(a_sub, i, true) & at(a_quot, i, false);
    const int term = ((b_mid[i] + 1) * (b_sub[i] + b_quot[i]) + at(b_sub, i, true) * b_quot[i]) & 1;
    s.epsilon ^= term;
  }
  return s;
}

// 0 -> C' --incl--> C --proj--> C'' -> 0, with one inclusion/projection
// matrix per chain degree.
struct ShortExactSequence {
  BasedChainComplex sub;
  BasedChainComplex mid;
  BasedChainComplex quot;
  std::vector<Matrix> inclusion;   // dim C_i x dim C'_i
  std::vector<Matrix> projection;  // dim C''_i x dim C_i
};

struct MultiplicativityResult {
  cplx tor_mid;
  cplx tor_sub;
  cplx tor_quot;
  cplx tor_long_sequence;
  MultiplicativitySigns signs;
  cplx rhs;
  double residual = 0.0;
};

namespace detail {

// Coordinates of the classes of the cycles z in the reference homology basis.
inline Matrix homology_coordinates(const BasedChainComplex& c, const HomologyData& hd, int i, const Matrix& z,
                                   const Tolerance& tol) {
  const auto& deg = hd.degrees[i];
  const Eigen::Index h = deg.dim();
  if (h == 0) return Matrix(0, z.cols());
  const Matrix& hb = *c.homology_basis(i);
  const Matrix sys = hstack({&hb, &deg.boundaries}, c.dim(i));
  const Matrix coeff = least_squares(sys, z);
  const double scale = std::max(1.0, z.norm());
  if ((sys * coeff - z).norm() > tol.complex_check * scale * 10)
    fail(ErrorCode::NotExact, "image is not a cycle in degree " + std::to_string(i));
  return coeff.topRows(h);
}

inline Matrix map_at(const std::vector<Matrix>& maps, int i, Eigen::Index rows, Eigen::Index cols) {
  if (i >= 0 && static_cast<std::size_t>(i) < maps.size()) return maps[i];
  return Matrix::Zero(rows, cols);
}

}  // namespace detail

// Long exact homology sequence H as an acyclic chain complex, based by the
// homology reference bases: H_{3i+2} = H_i(C'), H_{3i+1} = H_i(C),
// H_{3i} = H_i(C'').
inline BasedChainComplex long_exact_sequence(const ShortExactSequence& ses, const Tolerance& tol = {}) {
  const auto hd_sub = homology(ses.sub, tol);
  const auto hd_mid = homology(ses.mid, tol);
  const auto hd_quot = homology(ses.quot, tol);
  const int len = static_cast<int>(ses.mid.length());
  std::vector<Eigen::Index> dims(3 * len);
  for (int i = 0; i < len; ++i) {
    dims[3 * i + 2] = hd_sub.degrees[i].dim();
    dims[3 * i + 1] = hd_mid.degrees[i].dim();
    dims[3 * i] = hd_quot.degrees[i].dim();
  }
  std::vector<Matrix> bd(dims.empty() ? 0 : dims.size() - 1);
  for (int i = 0; i < len; ++i) {
    // H_i(C') -> H_i(C): boundary of degree 3i+2
    if (dims[3 * i + 2] > 0) {
      const Matrix img = ses.inclusion[i] * *ses.sub.homology_basis(i);
      bd[3 * i + 1] = detail::homology_coordinates(ses.mid, hd_mid, i, img, tol);
    } else {
      bd[3 * i + 1] = Matrix(dims[3 * i + 1], 0);
    }
    // H_i(C) -> H_i(C''): boundary of degree 3i+1
    if (dims[3 * i + 1] > 0) {
      const Matrix img = ses.projection[i] * *ses.mid.homology_basis(i);
      bd[3 * i] = detail::homology_coordinates(ses.quot, hd_quot, i, img, tol);
    } else {
      bd[3 * i] = Matrix(dims[3 * i], 0);
    }
    // connecting map H_i(C'') -> H_{i-1}(C'): boundary of degree 3i
    if (i >= 1) {
      if (dims[3 * i] > 0) {
        const Matrix pre = least_squares(ses.projection[i], *ses.quot.homology_basis(i));
        const Matrix down = ses.mid.boundary(i) * pre;
        const Matrix back = least_squares(ses.inclusion[i - 1], down);
        const double scale = std::max(1.0, down.norm());
        if ((ses.inclusion[i - 1] * back - down).norm() > tol.complex_check * scale * 10)
          fail(ErrorCode::NotExact, "connecting map: boundary of lift is not in the subcomplex");
        bd[3 * i - 1] = detail::homology_coordinates(ses.sub, hd_sub, i - 1, back, tol);
      } else {
        bd[3 * i - 1] = Matrix(dims[3 * i - 1], 0);
      }
    }
  }
  return BasedChainComplex(std::move(dims), std::move(bd), tol);
}

inline void check_short_exact(const ShortExactSequence& ses, const Tolerance& tol) {
  const int len = static_cast<int>(ses.mid.length());
  if (ses.sub.length() != ses.mid.length() || ses.quot.length() != ses.mid.length())
    fail(ErrorCode::DimensionMismatch, "short exact sequence: complexes have different lengths");
  if (ses.inclusion.size() != static_cast<std::size_t>(len) || ses.projection.size() != static_cast<std::size_t>(len))
    fail(ErrorCode::DimensionMismatch, "short exact sequence: one map per degree required");
  for (int i = 0; i < len; ++i) {
    const Matrix& in = ses.inclusion[i];
    const Matrix& pr = ses.projection[i];
    if (in.rows() != ses.mid.dim(i) || in.cols() != ses.sub.dim(i) || pr.rows() != ses.quot.dim(i) ||
        pr.cols() != ses.mid.dim(i))
      fail(ErrorCode::DimensionMismatch, "short exact sequence: map shapes in degree " + std::to_string(i));
    if (ses.sub.dim(i) + ses.quot.dim(i) != ses.mid.dim(i))
      fail(ErrorCode::NotExact, "dimensions do not add up in degree " + std::to_string(i));
    if (numerical_rank(in, tol) != in.cols() || numerical_rank(pr, tol) != pr.rows())
      fail(ErrorCode::NotExact, "inclusion not injective or projection not surjective in degree " + std::to_string(i));
    const double scale = std::max(1.0, in.norm() * pr.norm());
    if (in.size() > 0 && pr.size() > 0 && (pr * in).norm() > tol.complex_check * scale)
      fail(ErrorCode::NotExact, "projection o inclusion != 0 in degree " + std::to_string(i));
    if (i >= 1) {
      const Matrix lhs = ses.mid.boundary(i) * in;
      const Matrix rhs = detail::map_at(ses.inclusion, i - 1, ses.mid.dim(i - 1), ses.sub.dim(i - 1)) * ses.sub.boundary(i);
      if ((lhs - rhs).norm() > tol.complex_check * std::max(1.0, lhs.norm()))
        fail(ErrorCode::NotExact, "inclusion is not a chain map in degree " + std::to_string(i));
      const Matrix l2 = ses.quot.boundary(i) * pr;
      const Matrix r2 = ses.projection[i - 1] * ses.mid.boundary(i);
      if ((l2 - r2).norm() > tol.complex_check * std::max(1.0, l2.norm()))
        fail(ErrorCode::NotExact, "projection is not a chain map in degree " + std::to_string(i));
    }
  }
}

// Checks c^i ~ c'^i c''^i, i.e. [incl(c') s(c'') / c] = 1 for a section s.
inline void check_compatible_bases(const ShortExactSequence& ses, const Tolerance& tol) {
  for (int i = 0; i <= ses.mid.top(); ++i) {
    if (ses.mid.dim(i) == 0) continue;
    const Matrix a = ses.inclusion[i] * ses.sub.reference_basis(i);
    const Matrix b = least_squares(ses.projection[i], ses.quot.reference_basis(i));
    const Matrix combined = hstack({&a, &b}, ses.mid.dim(i));
    const cplx det = change_of_basis_det(Basis(combined), Basis(ses.mid.reference_basis(i)), tol);
    if (std::abs(det - 1.0) > tol.complex_check * 10)
      fail(ErrorCode::BasesIncompatible, "reference bases are not compatible in degree " + std::to_string(i));
  }
}

inline MultiplicativityResult multiplicativity_check(const ShortExactSequence& ses, const TorsionOptions& opt = {}) {
  check_short_exact(ses, opt.tol);
  check_compatible_bases(ses, opt.tol);
  MultiplicativityResult r;
  r.tor_mid = sign_determined_torsion(ses.mid, opt);
  r.tor_sub = sign_determined_torsion(ses.sub, opt);
  r.tor_quot = sign_determined_torsion(ses.quot, opt);
  r.tor_long_sequence = torsion(long_exact_sequence(ses, opt.tol), opt);
  r.signs = multiplicativity_signs(ses.sub.dims(), ses.mid.dims(), ses.quot.dims(), homology(ses.sub, opt.tol).dims(),
                                   homology(ses.mid, opt.tol).dims(), homology(ses.quot, opt.tol).dims());
  r.rhs = r.tor_sub * r.tor_quot * r.tor_long_sequence;
  if (r.signs.total()) r.rhs = -r.rhs;
  r.residual = std::abs(r.tor_mid - r.rhs);
  return r;
}

}  // namespace fibertor
