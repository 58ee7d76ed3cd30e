#pragma once

// SL2(C) / SU(2) matrices, representations of finitely presented groups,
// the adjoint action on the Lie algebra and its Killing form.
//
// Lie algebra coordinates are taken in a fixed ordered basis:
//   sl2(C): H = diag(1,-1), E = [[0,1],[0,0]], F = [[0,0],[1,0]]
//   su(2):  i = [[i,0],[0,-i]], j = [[0,1],[-1,0]], k = [[0,i],[i,0]]

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

#include "fibertor/linalg.hpp"
#include "fibertor/word.hpp"

namespace fibertor {

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

enum class Flavor { SU2, SL2C };

inline std::string to_string(Flavor f) { return f == Flavor::SU2 ? "SU2" : "SL2C"; }

inline Flavor parse_flavor(const std::string& s) {
  if (s == "SU2" || s == "su2") return Flavor::SU2;
  if (s == "SL2C" || s == "sl2c") return Flavor::SL2C;
  fail(ErrorCode::ParseError, "unknown flavor '" + s + "'");
}

// Unimodular 2x2 complex matrix. Inverses are taken by adjugate, which is
// exact for det = 1.
class Sl2Matrix {
 public:
  Sl2Matrix() : m_(Mat2::Identity()) {}

  static Sl2Matrix checked(const Mat2& m, double tol = 1e-8) {
    if (std::abs(m.determinant() - 1.0) > tol) fail(ErrorCode::InvalidInput, "matrix is not unimodular");
    return Sl2Matrix(m);
  }
  static Sl2Matrix unchecked(const Mat2& m) { return Sl2Matrix(m); }
  static Sl2Matrix identity() { return Sl2Matrix(); }

  const Mat2& matrix() const { return m_; }
  cplx trace() const { return m_.trace(); }
  cplx operator()(int i, int j) const { return m_(i, j); }

  Sl2Matrix inverse() const {
    Mat2 inv;
    inv << m_(1, 1), -m_(0, 1), -m_(1, 0), m_(0, 0);
    return Sl2Matrix(inv);
  }
  Sl2Matrix operator*(const Sl2Matrix& o) const { return Sl2Matrix(m_ * o.m_); }
  Sl2Matrix operator-() const { return Sl2Matrix(-m_); }

  bool is_special_unitary(double tol = 1e-8) const {
    return (m_ * m_.adjoint() - Mat2::Identity()).norm() <= tol;
  }

 private:
  explicit Sl2Matrix(const Mat2& m) : m_(m) {}
  Mat2 m_;
};

inline std::array<Mat2, 3> lie_basis(Flavor f) {
  const cplx I(0.0, 1.0);
  Mat2 a, b, c;
  if (f == Flavor::SL2C) {
    a << 1, 0, 0, -1;
    b << 0, 1, 0, 0;
    c << 0, 0, 1, 0;
  } else {
    a << I, 0, 0, -I;
    b << 0, 1, -1, 0;
    c << 0, I, I, 0;
  }
  return {a, b, c};
}

// Coordinates of a trace-free matrix in the flavor's basis.
inline Vec3 lie_coordinates(const Mat2& x, Flavor f) {
  const cplx I(0.0, 1.0);
  if (f == Flavor::SL2C) return Vec3(x(0, 0), x(0, 1), x(1, 0));
  return Vec3(x(0, 0) / I, (x(0, 1) - x(1, 0)) / 2.0, (x(0, 1) + x(1, 0)) / (2.0 * I));
}

inline Mat2 lie_matrix(const Vec3& v, Flavor f) {
  const auto basis = lie_basis(f);
  return v(0) * basis[0] + v(1) * basis[1] + v(2) * basis[2];
}

// Matrix of v -> g v g^{-1} in the flavor's basis.
inline Mat3 adjoint(const Sl2Matrix& g, Flavor f = Flavor::SL2C) {
  const Mat2 gi = g.inverse().matrix();
  const auto basis = lie_basis(f);
  Mat3 out;
  for (int k = 0; k < 3; ++k) out.col(k) = lie_coordinates(g.matrix() * basis[k] * gi, f);
  return out;
}

// Killing form in the normalization 8aa' + 4(bc' + cb') on sl2(C) and
// -2 <u, v> on su(2) (pure quaternions).
inline cplx killing_form(const Vec3& u, const Vec3& v, Flavor f) {
  if (f == Flavor::SL2C) return 8.0 * u(0) * v(0) + 4.0 * (u(1) * v(2) + u(2) * v(1));
  return -2.0 * (u(0) * v(0) + u(1) * v(1) + u(2) * v(2));
}

// Tr(A B A^{-1} B^{-1}) from (Tr A, Tr B, Tr AB).
inline cplx commutator_trace(cplx x1, cplx x2, cplx x3) {
  return -2.0 - x1 * x2 * x3 + x1 * x1 + x2 * x2 + x3 * x3;
}

class Representation {
 public:
  Representation() = default;
  Representation(Flavor flavor, std::vector<Sl2Matrix> images) : flavor_(flavor), images_(std::move(images)) {}

  Flavor flavor() const { return flavor_; }
  const std::vector<Sl2Matrix>& images() const { return images_; }
  const Sl2Matrix& image(int g) const { return images_.at(static_cast<std::size_t>(g)); }
  int generator_count() const { return static_cast<int>(images_.size()); }

  Representation conjugated(const Sl2Matrix& g) const {
    std::vector<Sl2Matrix> out;
    const Sl2Matrix gi = g.inverse();
    for (const auto& m : images_) out.push_back(g * m * gi);
    return Representation(flavor_, std::move(out));
  }

  Representation with_image(int g, const Sl2Matrix& m) const {
    Representation r = *this;
    r.images_.at(static_cast<std::size_t>(g)) = m;
    return r;
  }

  // Restriction to the first `count` generators.
  Representation restricted(int count) const {
    return Representation(flavor_, std::vector<Sl2Matrix>(images_.begin(), images_.begin() + count));
  }

 private:
  Flavor flavor_ = Flavor::SL2C;
  std::vector<Sl2Matrix> images_;
};

inline Sl2Matrix evaluate_word(const Representation& rep, const Word& w) {
  Sl2Matrix acc;
  for (const auto& l : w.letters()) {
    if (l.generator < 0 || l.generator >= rep.generator_count())
      fail(ErrorCode::InvalidInput, "word references a generator without an image");
    acc = acc * (l.exponent > 0 ? rep.image(l.generator) : rep.image(l.generator).inverse());
  }
  return acc;
}

inline Mat3 evaluate_group_ring(const Representation& rep, const GroupRingElement& e) {
  Mat3 out = Mat3::Zero();
  for (const auto& t : e.terms())
    out += static_cast<double>(t.coefficient) * adjoint(evaluate_word(rep, t.word), rep.flavor());
  return out;
}

// max over relators of ||rho(r) - I||
inline double relator_defect(const GroupPresentation& p, const Representation& rep) {
  double worst = 0.0;
  for (const auto& r : p.relators)
    worst = std::max(worst, (evaluate_word(rep, r).matrix() - Mat2::Identity()).norm());
  return worst;
}

inline void check_relators(const GroupPresentation& p, const Representation& rep, const Tolerance& tol = {}) {
  if (rep.generator_count() != p.generator_count())
    fail(ErrorCode::DimensionMismatch, "representation and presentation have different generator counts");
  const double d = relator_defect(p, rep);
  if (d > tol.relator) fail(ErrorCode::RelatorViolation, "relator defect " + std::to_string(d));
}

}  // namespace fibertor
