#pragma once

// The monodromy action on genus-1 trace coordinates (x1, x2, x3) =
// (Tr a, Tr b, Tr ab): Jacobian, symbolic fixed locus and a numerical
// sampler on that locus.

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "fibertor/knot.hpp"
#include "fibertor/linalg.hpp"

namespace fibertor {

using Point3 = std::array<cplx, 3>;

inline const TraceMap& require_trace_map(const FiberedKnot& k) {
  if (k.genus != 1) fail(ErrorCode::NotGenusOne, "trace coordinates need a genus-1 fiber");
  if (!k.trace_map) fail(ErrorCode::NoTraceMap, "knot '" + k.name + "' carries no trace map");
  return *k.trace_map;
}

inline Point3 apply_trace_map(const TraceMap& p, const Point3& x) {
  return {p[0].evaluate(x), p[1].evaluate(x), p[2].evaluate(x)};
}

inline double fixed_point_defect(const TraceMap& p, const Point3& x) {
  const Point3 y = apply_trace_map(p, x);
  return std::max({std::abs(y[0] - x[0]), std::abs(y[1] - x[1]), std::abs(y[2] - x[2])});
}

// (dP_i / dx_j) at x, by exact differentiation.
inline Eigen::Matrix3cd trace_jacobian(const TraceMap& p, const Point3& x) {
  Eigen::Matrix3cd j;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) j(r, c) = p[r].derivative(c).evaluate(x);
  return j;
}

// Variety P(x) = x: x_from = x_to identifications plus residual relations
// (each meaning "polynomial = 0").
struct FixedLocus {
  std::vector<std::pair<int, int>> identifications;
  std::vector<Polynomial> relations;

  bool entire_space() const { return identifications.empty() && relations.empty(); }

  std::vector<std::string> describe() const {
    std::vector<std::string> out;
    for (const auto& [from, to] : identifications)
      out.push_back("x" + std::to_string(from + 1) + " = x" + std::to_string(to + 1));
    for (const auto& r : relations) out.push_back(r.to_string() + " = 0");
    return out;
  }
};

namespace detail {

// Matches +-(x_i - x_j); returns (higher index, lower index).
inline std::optional<std::pair<int, int>> variable_identification(const Polynomial& p) {
  if (p.terms().size() != 2) return std::nullopt;
  int vars[2];
  long long coeffs[2];
  int k = 0;
  for (const auto& [m, c] : p.terms()) {
    if (m[0] + m[1] + m[2] != 1) return std::nullopt;
    vars[k] = m[0] ? 0 : (m[1] ? 1 : 2);
    coeffs[k] = c;
    ++k;
  }
  if (coeffs[0] != -coeffs[1] || (coeffs[0] != 1 && coeffs[0] != -1)) return std::nullopt;
  return std::make_pair(std::max(vars[0], vars[1]), std::min(vars[0], vars[1]));
}

}  // namespace detail

// Eliminates linear identifications x_i = x_j, then drops zero, duplicate
// and redundant (exactly divisible) relations.
inline FixedLocus fixed_point_characters(const TraceMap& p) {
  std::vector<Polynomial> work;
  for (int i = 0; i < 3; ++i) work.push_back(p[i] - Polynomial::variable(i));
  FixedLocus locus;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < work.size(); ++k) {
      const auto id = detail::variable_identification(work[k]);
      if (!id) continue;
      locus.identifications.push_back(*id);
      work.erase(work.begin() + static_cast<std::ptrdiff_t>(k));
      for (auto& w : work) w = w.substitute(id->first, Polynomial::variable(id->second));
      changed = true;
      break;
    }
  }
  std::vector<Polynomial> kept;
  std::sort(work.begin(), work.end(), [](const Polynomial& a, const Polynomial& b) {
    return a.total_degree() < b.total_degree();
  });
  for (const auto& w : work) {
    if (w.is_zero()) continue;
    const Polynomial n = w.normalized_sign();
    const bool redundant =
        std::any_of(kept.begin(), kept.end(), [&](const Polynomial& k) { return n.divisible_by(k); });
    if (!redundant) kept.push_back(n);
  }
  std::sort(locus.identifications.begin(), locus.identifications.end());
  locus.relations = std::move(kept);
  return locus;
}

// Point on the fixed locus with x1 pinned, by Gauss-Newton in (x2, x3)
// from the given start. Returns nullopt if the iteration does not converge.
inline std::optional<Point3> project_to_fixed_locus(const TraceMap& p, const Point3& start, double tol = 1e-13,
                                                    int max_iter = 100) {
  Point3 x = start;
  for (int it = 0; it < max_iter; ++it) {
    const Point3 y = apply_trace_map(p, x);
    Eigen::Vector3cd f(y[0] - x[0], y[1] - x[1], y[2] - x[2]);
    const double scale = std::max({1.0, std::abs(x[0]), std::abs(x[1]), std::abs(x[2])});
    if (f.norm() <= tol * scale) return x;
    Eigen::Matrix3cd j = trace_jacobian(p, x) - Eigen::Matrix3cd::Identity();
    const Matrix jr = j.rightCols(2);
    const Matrix step = least_squares(jr, Matrix(f));
    x[1] -= step(0, 0);
    x[2] -= step(1, 0);
    if (!std::isfinite(std::abs(x[1])) || !std::isfinite(std::abs(x[2]))) return std::nullopt;
  }
  if (fixed_point_defect(p, x) <= tol * 100) return x;
  return std::nullopt;
}

}  // namespace fibertor
