#pragma once

// Deterministic sample points on the genus-1 fixed loci, shared by the test
// suites, the acceptance runner and `fibertor verify`.

#include <random>
#include <vector>

#include "fibertor/fibered.hpp"

namespace fibertor {

// Trefoil SU(2) sweep x1 = x2 = x3 = x, evenly spaced inside (-1, 2).
inline std::vector<double> trefoil_su2_grid(int count) {
  std::vector<double> xs;
  for (int i = 0; i < count; ++i) xs.push_back(-1.0 + 3.0 * (i + 0.5) / count);
  return xs;
}

inline Representation trefoil_su2_rep(double x) {
  return conjugate_into_su2(lift_character_to_rep(trefoil(), {x, x, x}));
}

// Figure-eight locus point with pinned x1: x3 = x1, x2 = x1 / (x1 - 1).
inline Point3 figure_eight_locus_point(cplx x1) {
  const FiberedKnot k = figure_eight();
  const auto& p = *k.trace_map;
  const cplx guess = x1 / (x1 - 1.0);
  const auto x = project_to_fixed_locus(p, {x1, guess, x1});
  if (!x) fail(ErrorCode::NotFixedPoint, "could not project onto the figure-eight fixed locus");
  return *x;
}

// Points away from the singular parts of the locus: x1 = 1 (x2 infinite),
// s = -1 and s = 4 (Tr[A,B] = s^2 - 3s - 2 = 2, reducible) and s = 3/2
// (double unit eigenvalue).
inline bool figure_eight_sample_ok(cplx x1) {
  if (std::abs(x1 - 1.0) < 0.2) return false;
  const cplx s = x1 + x1 / (x1 - 1.0);
  return std::abs(s + 1.0) > 0.3 && std::abs(s - 4.0) > 0.3 && std::abs(3.0 - 2.0 * s) > 0.3 && std::abs(s) < 50.0;
}

// `real_count` real points followed by `complex_count` complex ones.
inline std::vector<Point3> figure_eight_samples(int real_count, int complex_count, std::uint64_t seed = 20240601) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-2.0, 2.0);
  std::vector<Point3> out;
  while (static_cast<int>(out.size()) < real_count) {
    const cplx x1 = re(rng);
    if (figure_eight_sample_ok(x1)) out.push_back(figure_eight_locus_point(x1));
  }
  while (static_cast<int>(out.size()) < real_count + complex_count) {
    const cplx x1(re(rng), im(rng));
    if (std::abs(x1.imag()) > 0.05 && figure_eight_sample_ok(x1)) out.push_back(figure_eight_locus_point(x1));
  }
  return out;
}

inline Sl2Matrix random_sl2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = cplx(n(rng), n(rng));
  m /= std::sqrt(m.determinant());
  return Sl2Matrix::checked(m);
}

inline Sl2Matrix random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector4d q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  Mat2 m;
  m << cplx(q(0), q(1)), cplx(q(2), q(3)), cplx(-q(2), q(3)), cplx(q(0), -q(1));
  return Sl2Matrix::checked(m);
}

// Random element of the representation's own group (SU(2) stays SU(2)).
inline Sl2Matrix random_conjugator(const Representation& rep, std::mt19937_64& rng) {
  return rep.flavor() == Flavor::SU2 ? random_su2(rng) : random_sl2(rng);
}

}  // namespace fibertor
