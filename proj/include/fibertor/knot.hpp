#pragma once

// Fibered knot data: fiber generators, monodromy words, the presentation
// <x_1..x_2g, t | t^-1 x_i t = phi(x_i)> and the built-in catalog.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fibertor/errors.hpp"
#include "fibertor/polynomial.hpp"
#include "fibertor/word.hpp"

namespace fibertor {

using TraceMap = std::array<Polynomial, 3>;

struct FiberedKnot {
  std::string name;
  int genus = 1;
  std::vector<std::string> fiber_generators;  // a1, b1, ..., ag, bg
  std::vector<Word> monodromy;                // phi(x_i), fiber letters only
  std::string meridian = "t";
  std::optional<TraceMap> trace_map;          // genus 1 only: (x1, x2, x3) = (Tr a, Tr b, Tr ab)

  int fiber_rank() const { return 2 * genus; }
  int meridian_index() const { return fiber_rank(); }

  std::vector<std::string> generator_names() const {
    auto names = fiber_generators;
    names.push_back(meridian);
    return names;
  }

  void validate() const {
    if (genus < 1) fail(ErrorCode::InvalidInput, "genus must be positive");
    if (static_cast<int>(fiber_generators.size()) != fiber_rank())
      fail(ErrorCode::InvalidInput, "expected 2g fiber generators");
    if (static_cast<int>(monodromy.size()) != fiber_rank())
      fail(ErrorCode::InvalidInput, "expected one monodromy word per fiber generator");
    const auto names = generator_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty() || upper(names[i]) == names[i])
        fail(ErrorCode::InvalidInput, "generator names must contain a lower-case letter: '" + names[i] + "'");
      for (std::size_t j = 0; j < i; ++j)
        if (names[i] == names[j]) fail(ErrorCode::InvalidInput, "duplicate generator name '" + names[i] + "'");
    }
    for (const auto& w : monodromy)
      for (const auto& l : w.letters())
        if (l.generator < 0 || l.generator >= fiber_rank())
          fail(ErrorCode::InvalidInput, "monodromy words may only use fiber generators");
    if (trace_map && genus != 1) fail(ErrorCode::NotGenusOne, "trace maps are only defined in genus 1");
  }

  // Relators t^-1 x_i t phi(x_i)^-1, generators ordered fiber first, then t.
  GroupPresentation presentation() const {
    GroupPresentation p{generator_names(), {}};
    const Word t = Word::generator(meridian_index());
    for (int i = 0; i < fiber_rank(); ++i) p.relators.push_back(t.inverse() * Word::generator(i) * t * monodromy[i].inverse());
    return p;
  }

  GroupPresentation fiber_presentation() const { return GroupPresentation{fiber_generators, {}}; }

  // Boundary of the fiber: product of commutators [a_i, b_i].
  Word longitude() const {
    Word w;
    for (int i = 0; i < genus; ++i) {
      const Word a = Word::generator(2 * i), b = Word::generator(2 * i + 1);
      w = w * a * b * a.inverse() * b.inverse();
    }
    return w;
  }

  static FiberedKnot from_strings(std::string name, std::vector<std::string> fiber_generators,
                                  const std::vector<std::string>& monodromy_words,
                                  const std::optional<std::array<std::string, 3>>& trace_map = std::nullopt) {
    FiberedKnot k;
    k.name = std::move(name);
    if (fiber_generators.size() % 2 != 0 || fiber_generators.empty())
      fail(ErrorCode::InvalidInput, "an even, positive number of fiber generators is required");
    k.genus = static_cast<int>(fiber_generators.size() / 2);
    k.fiber_generators = std::move(fiber_generators);
    for (const auto& w : monodromy_words) k.monodromy.push_back(parse_word(w, k.fiber_generators));
    if (trace_map)
      k.trace_map = TraceMap{Polynomial::parse((*trace_map)[0]), Polynomial::parse((*trace_map)[1]),
                             Polynomial::parse((*trace_map)[2])};
    k.validate();
    return k;
  }
};

// Entry (i, j) is the exponent sum of generator i in phi(x_j): the matrix of
// phi^* on H^1(F; Z) in the dual basis, rows indexed by images.
inline Eigen::MatrixXi abelianized_monodromy(const FiberedKnot& k) {
  k.validate();
  const int n = k.fiber_rank();
  Eigen::MatrixXi m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = k.monodromy[j].exponent_sum(i);
  return m;
}

// Exact integer determinant by fraction-free elimination (Bareiss).
inline long long integer_determinant(Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> a) {
  const auto n = a.rows();
  if (n == 0) return 1;
  long long sign = 1, prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// sgn det(Id - phi^*).
inline int epsilon0(const FiberedKnot& k) {
  const Eigen::MatrixXi m = abelianized_monodromy(k);
  const auto id_minus = (Eigen::MatrixXi::Identity(m.rows(), m.cols()) - m).cast<long long>().eval();
  const long long d = integer_determinant(id_minus);
  if (d == 0) fail(ErrorCode::DegenerateMonodromy, "det(Id - phi^*) = 0; the monodromy is not that of a fibered knot");
  return d > 0 ? 1 : -1;
}

// -16/(p^2 q^2) sin^2(pi a/p) sin^2(pi b/q) for the torus knot T(p, q).
inline double torus_closed_form(int p, int q, int a, int b) {
  if (p < 2 || q < 2 || std::gcd(p, q) != 1) fail(ErrorCode::NotCoprime, "p and q must be coprime and at least 2");
  if (a <= 0 || a >= p) fail(ErrorCode::AOutOfRange, "require 0 < a < p");
  if (b <= 0 || b >= q) fail(ErrorCode::BOutOfRange, "require 0 < b < q");
  if ((a - b) % 2 != 0) fail(ErrorCode::ParityMismatch, "require a = b mod 2");
  // long double keeps the error well below half an ulp of the double result,
  // so e.g. T(2,3) rounds to exactly -1/3
  const long double pi = std::numbers::pi_v<long double>;
  const long double sa = std::sin(pi * a / p), sb = std::sin(pi * b / q);
  return static_cast<double>(-16.0L / (static_cast<long double>(p) * p * q * q) * sa * sa * sb * sb);
}

inline FiberedKnot trefoil() {
  return FiberedKnot::from_strings("trefoil", {"a", "b"}, {"a B A", "a b"}, std::array<std::string, 3>{"x2", "x3", "x1"});
}

inline FiberedKnot figure_eight() {
  return FiberedKnot::from_strings("figure_eight", {"a", "b"}, {"a b", "b a b"},
                                   std::array<std::string, 3>{"x3", "x2*x3 - x1", "x2*x3^2 - x1*x3 - x2"});
}

struct CatalogEntry {
  std::string name;
  int genus = 0;  // 0: depends on parameters
  std::vector<std::string> methods;
  std::optional<FiberedKnot> knot;
};

inline std::vector<CatalogEntry> catalog() {
  return {
      {"trefoil", 1, {"cohomology", "jacobian"}, trefoil()},
      {"figure_eight", 1, {"cohomology", "jacobian"}, figure_eight()},
      {"torus", 0, {"closed_form"}, std::nullopt},
  };
}

inline FiberedKnot find_knot(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name && e.knot) return *e.knot;
  fail(ErrorCode::UnknownKnot, "no fibered knot named '" + name + "' in the catalog");
}

}  // namespace fibertor
