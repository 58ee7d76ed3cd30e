#pragma once

// Integer polynomials in the trace coordinates x1, x2, x3.

#include <array>
#include <cctype>
#include <complex>
#include <map>
#include <string>

#include "fibertor/errors.hpp"

namespace fibertor {

class Polynomial {
 public:
  using Monomial = std::array<int, 3>;  // exponents of x1, x2, x3

  Polynomial() = default;
  static Polynomial constant(long long c) {
    Polynomial p;
    if (c != 0) p.terms_[{0, 0, 0}] = c;
    return p;
  }
  static Polynomial variable(int index) {
    Polynomial p;
    Monomial m{0, 0, 0};
    m.at(static_cast<std::size_t>(index)) = 1;
    p.terms_[m] = 1;
    return p;
  }

  static Polynomial parse(const std::string& text);

  const std::map<Monomial, long long>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m[0] + m[1] + m[2]);
    return d;
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add(m, c);
    return r;
  }
  Polynomial operator-(const Polynomial& o) const { return *this + o * constant(-1); }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial r;
    for (const auto& [m1, c1] : terms_)
      for (const auto& [m2, c2] : o.terms_) r.add({m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2]}, c1 * c2);
    return r;
  }
  Polynomial pow(int e) const {
    Polynomial r = constant(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::complex<double> evaluate(const std::array<std::complex<double>, 3>& x) const {
    std::complex<double> acc = 0.0;
    for (const auto& [m, c] : terms_) {
      std::complex<double> t = static_cast<double>(c);
      for (int v = 0; v < 3; ++v)
        for (int k = 0; k < m[v]; ++k) t *= x[v];
      acc += t;
    }
    return acc;
  }

  Polynomial derivative(int var) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      if (m[var] == 0) continue;
      Monomial d = m;
      d[var] -= 1;
      r.add(d, c * m[var]);
    }
    return r;
  }

  // Replace x_var by q.
  Polynomial substitute(int var, const Polynomial& q) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      Monomial rest = m;
      rest[var] = 0;
      Polynomial t;
      t.terms_[rest] = c;
      r = r + t * q.pow(m[var]);
    }
    return r;
  }

  // Simultaneous substitution x_v := q[v].
  Polynomial compose(const std::array<Polynomial, 3>& q) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r = r + constant(c) * q[0].pow(m[0]) * q[1].pow(m[1]) * q[2].pow(m[2]);
    return r;
  }

  // Leading monomial in lex order x1 > x2 > x3.
  std::pair<Monomial, long long> leading() const { return *terms_.rbegin(); }

  // Exact division test: true if *this = q * divisor for an integer
  // polynomial q (multivariate division, lex order).
  bool divisible_by(const Polynomial& divisor) const {
    if (divisor.is_zero()) return false;
    Polynomial p = *this;
    const auto [lm, lc] = divisor.leading();
    while (!p.is_zero()) {
      const auto [pm, pc] = p.leading();
      Monomial q{pm[0] - lm[0], pm[1] - lm[1], pm[2] - lm[2]};
      if (q[0] < 0 || q[1] < 0 || q[2] < 0 || pc % lc != 0) return false;
      Polynomial t;
      t.terms_[q] = pc / lc;
      p = p - t * divisor;
    }
    return true;
  }

  // Sign-normalized copy: leading coefficient positive.
  Polynomial normalized_sign() const {
    if (is_zero() || leading().second > 0) return *this;
    return *this * constant(-1);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      const bool unit_monomial = m[0] == 0 && m[1] == 0 && m[2] == 0;
      long long mag = c < 0 ? -c : c;
      if (out.empty())
        out += c < 0 ? "-" : "";
      else
        out += c < 0 ? " - " : " + ";
      std::string mono;
      for (int v = 0; v < 3; ++v) {
        if (m[v] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(v + 1);
        if (m[v] > 1) mono += "^" + std::to_string(m[v]);
      }
      if (unit_monomial)
        out += std::to_string(mag);
      else if (mag == 1)
        out += mono;
      else
        out += std::to_string(mag) + "*" + mono;
    }
    return out;
  }

 private:
  void add(const Monomial& m, long long c) {
    if (c == 0) return;
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  std::map<Monomial, long long> terms_;
};

namespace detail {

// expr := term (('+'|'-') term)*
// term := unary ('*' unary)*
// unary := '-' unary | power
// power := primary ('^' integer)?
// primary := integer | x1 | x2 | x3 | '(' expr ')'
class PolynomialParser {
 public:
  explicit PolynomialParser(const std::string& s) : s_(s) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) error("trailing input");
    return p;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "polynomial '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long long integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (accept('+'))
        p = p + term();
      else if (accept('-'))
        p = p - term();
      else
        return p;
    }
  }
  Polynomial term() {
    Polynomial p = unary();
    while (accept('*')) p = p * unary();
    return p;
  }
  Polynomial unary() {
    if (accept('-')) return unary() * Polynomial::constant(-1);
    return power();
  }
  Polynomial power() {
    Polynomial base = primary();
    if (accept('^')) return base.pow(static_cast<int>(integer()));
    return base;
  }
  Polynomial primary() {
    skip();
    if (accept('(')) {
      Polynomial p = expr();
      if (!accept(')')) error("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      const long long v = integer();
      if (v < 1 || v > 3) error("only x1, x2, x3 are allowed");
      return Polynomial::variable(static_cast<int>(v - 1));
    }
    return Polynomial::constant(integer());
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial Polynomial::parse(const std::string& text) { return detail::PolynomialParser(text).parse(); }

}  // namespace fibertor
