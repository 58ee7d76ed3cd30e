#pragma once

// Free-group words, finite presentations, integral group-ring elements and
// Fox derivatives.

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "fibertor/errors.hpp"

namespace fibertor {

struct Letter {
  int generator = 0;
  int exponent = 1;  // +1 or -1

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
    for (const auto& l : letters_)
      if (l.exponent != 1 && l.exponent != -1) fail(ErrorCode::InvalidInput, "letter exponents must be +1 or -1");
  }

  static Word generator(int g) { return Word({{g, 1}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word inverse() const {
    std::vector<Letter> out;
    out.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back({it->generator, -it->exponent});
    return Word(std::move(out));
  }

  // Free reduction: no adjacent x x^{-1} pairs remain.
  Word reduced() const {
    std::vector<Letter> out;
    for (const auto& l : letters_) {
      if (!out.empty() && out.back().generator == l.generator && out.back().exponent == -l.exponent)
        out.pop_back();
      else
        out.push_back(l);
    }
    return Word(std::move(out));
  }

  int exponent_sum(int g) const {
    int s = 0;
    for (const auto& l : letters_)
      if (l.generator == g) s += l.exponent;
    return s;
  }

  bool uses_generator(int g) const {
    return std::any_of(letters_.begin(), letters_.end(), [g](const Letter& l) { return l.generator == g; });
  }

  Word operator*(const Word& other) const {
    std::vector<Letter> out = letters_;
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) { return a.letters_ <=> b.letters_; }

 private:
  std::vector<Letter> letters_;
};

// Word syntax: whitespace-separated generator names; the upper-cased name
// denotes the inverse ("a b A t B").
inline std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

inline Word parse_word(const std::string& text, const std::vector<std::string>& names) {
  std::istringstream in(text);
  std::string tok;
  std::vector<Letter> letters;
  while (in >> tok) {
    if (tok == "1") continue;
    bool found = false;
    for (std::size_t g = 0; g < names.size(); ++g) {
      if (tok == names[g]) {
        letters.push_back({static_cast<int>(g), 1});
        found = true;
        break;
      }
    }
    if (!found) {
      for (std::size_t g = 0; g < names.size(); ++g) {
        if (upper(names[g]) != names[g] && tok == upper(names[g])) {
          letters.push_back({static_cast<int>(g), -1});
          found = true;
          break;
        }
      }
    }
    if (!found) fail(ErrorCode::ParseError, "unknown generator '" + tok + "' in word '" + text + "'");
  }
  return Word(std::move(letters));
}

inline std::string format_word(const Word& w, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& l : w.letters()) {
    if (!out.empty()) out += ' ';
    const auto& n = names.at(static_cast<std::size_t>(l.generator));
    out += l.exponent > 0 ? n : upper(n);
  }
  return out;
}

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int generator_count() const { return static_cast<int>(generators.size()); }

  void validate() const {
    for (const auto& r : relators)
      for (const auto& l : r.letters())
        if (l.generator < 0 || l.generator >= generator_count())
          fail(ErrorCode::InvalidInput, "relator references an unknown generator");
  }

  static GroupPresentation parse(std::vector<std::string> generators, const std::vector<std::string>& relators) {
    GroupPresentation p{std::move(generators), {}};
    for (const auto& r : relators) p.relators.push_back(parse_word(r, p.generators));
    p.validate();
    return p;
  }
};

// Formal finite sum of group elements with integer coefficients.
class GroupRingElement {
 public:
  struct Term {
    long long coefficient = 0;
    Word word;
  };

  GroupRingElement() = default;
  explicit GroupRingElement(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static GroupRingElement one() { return GroupRingElement({{1, Word()}}); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  GroupRingElement operator+(const GroupRingElement& o) const {
    std::vector<Term> t = terms_;
    t.insert(t.end(), o.terms_.begin(), o.terms_.end());
    return GroupRingElement(std::move(t));
  }
  GroupRingElement operator-(const GroupRingElement& o) const {
    std::vector<Term> t = terms_;
    for (const auto& x : o.terms_) t.push_back({-x.coefficient, x.word});
    return GroupRingElement(std::move(t));
  }
  // Left multiplication by a group element.
  GroupRingElement left_multiply(const Word& u) const {
    std::vector<Term> t;
    for (const auto& x : terms_) t.push_back({x.coefficient, u * x.word});
    return GroupRingElement(std::move(t));
  }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].coefficient != b.terms_[i].coefficient || !(a.terms_[i].word == b.terms_[i].word)) return false;
    return true;
  }

 private:
  // Reduce words, merge duplicates, drop zero coefficients, sort.
  void normalize() {
    std::map<Word, long long> acc;
    for (const auto& t : terms_) acc[t.word.reduced()] += t.coefficient;
    terms_.clear();
    for (auto& [w, c] : acc)
      if (c != 0) terms_.push_back({c, w});
  }

  std::vector<Term> terms_;
};

// Fox derivative d w / d g:
//   d(uv) = du + u dv,  dg/dg = 1,  d(g^{-1})/dg = -g^{-1},  dh/dg = 0.
inline GroupRingElement fox_derivative(const Word& w, int g) {
  std::vector<GroupRingElement::Term> terms;
  std::vector<Letter> prefix;
  for (const auto& l : w.letters()) {
    if (l.generator == g) {
      if (l.exponent > 0) {
        terms.push_back({1, Word(prefix)});
      } else {
        auto with_inverse = prefix;
        with_inverse.push_back(l);
        terms.push_back({-1, Word(std::move(with_inverse))});
      }
    }
    prefix.push_back(l);
  }
  return GroupRingElement(std::move(terms));
}

}  // namespace fibertor
