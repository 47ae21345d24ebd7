#pragma once

// Sparse polynomials: noncommutative (words over x_0..x_{n-1}) and commutative
// (exponent vectors). Both keep terms in a canonical order and never store a
// zero coefficient, so structural equality is polynomial equality.

#include "hadamard/caps.hpp"
#include "hadamard/field.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace hadamard {

using Word = std::vector<std::uint32_t>;

/// Degree first, then lexicographic: the canonical monomial order.
struct GradedLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using WordSet = std::set<Word, GradedLex>;

template <class S>
class NCPoly {
 public:
  using Terms = std::map<Word, S, GradedLex>;

  explicit NCPoly(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  static NCPoly constant(std::size_t n_vars, const S& c) { return monomial(n_vars, {}, c); }
  static NCPoly variable(std::size_t n_vars, std::uint32_t i, const S& c = S(1)) { return monomial(n_vars, {i}, c); }
  static NCPoly monomial(std::size_t n_vars, Word w, const S& c = S(1)) {
    NCPoly f(n_vars);
    f.add_term(std::move(w), c);
    return f;
  }

  std::size_t n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(terms_.rbegin()->first.size()); }

  S coefficient(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? S(0) : it->second;
  }

  /// Adds c * w to the polynomial.
  void add_term(Word w, const S& c) {
    for (auto v : w) {
      if (v >= n_vars_) {
        throw InputError("variable index " + std::to_string(v) + " out of range for " + std::to_string(n_vars_) +
                         " variables");
      }
    }
    if (hadamard::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(w), c);
    if (inserted) return;
    it->second = it->second + c;
    if (hadamard::is_zero(it->second)) terms_.erase(it);
  }

  NCPoly operator-() const {
    NCPoly out(n_vars_);
    for (const auto& [w, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), w, -c);
    return out;
  }

  NCPoly& operator+=(const NCPoly& rhs) {
    check_arity(rhs);
    for (const auto& [w, c] : rhs.terms_) add_term(w, c);
    return *this;
  }
  NCPoly& operator-=(const NCPoly& rhs) { return *this += -rhs; }

  friend NCPoly operator+(NCPoly a, const NCPoly& b) { return a += b; }
  friend NCPoly operator-(NCPoly a, const NCPoly& b) { return a -= b; }
  friend NCPoly operator*(const S& c, const NCPoly& f) {
    NCPoly out(f.n_vars_);
    if (hadamard::is_zero(c)) return out;
    for (const auto& [w, a] : f.terms_) out.add_term(w, c * a);
    return out;
  }
  /// Concatenation product.
  friend NCPoly operator*(const NCPoly& f, const NCPoly& g) { return multiply(f, g, Caps{}); }

  friend bool operator==(const NCPoly& a, const NCPoly& b) { return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_; }

  static NCPoly multiply(const NCPoly& f, const NCPoly& g, const Caps& caps) {
    f.check_arity(g);
    NCPoly out(f.n_vars_);
    for (const auto& [u, a] : f.terms_) {
      for (const auto& [v, b] : g.terms_) {
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        out.add_term(std::move(w), a * b);
      }
      check_terms(out.size(), caps, "noncommutative product");
    }
    return out;
  }

  void check_arity(const NCPoly& other) const {
    if (other.n_vars_ != n_vars_) {
      throw InputError("arity mismatch: " + std::to_string(n_vars_) + " vs " + std::to_string(other.n_vars_) +
                       " variables");
    }
  }

 private:
  std::size_t n_vars_;
  Terms terms_;
};

/// Coefficientwise product: the coefficient of m is f(m) g(m).
template <class S>
NCPoly<S> hadamard(const NCPoly<S>& f, const NCPoly<S>& g) {
  f.check_arity(g);
  NCPoly<S> out(f.n_vars());
  const auto& small = f.size() <= g.size() ? f : g;
  const auto& large = f.size() <= g.size() ? g : f;
  for (const auto& [w, a] : small.terms()) {
    auto it = large.terms().find(w);
    if (it != large.terms().end()) out.add_term(w, a * it->second);
  }
  return out;
}

template <class S>
WordSet mon_set(const NCPoly<S>& f) {
  WordSet out;
  for (const auto& [w, c] : f.terms()) out.insert(out.end(), w);
  return out;
}

template <class S>
NCPoly<S> homogeneous_part(const NCPoly<S>& f, std::size_t k) {
  NCPoly<S> out(f.n_vars());
  for (const auto& [w, c] : f.terms()) {
    if (w.size() == k) out.add_term(w, c);
  }
  return out;
}

template <class S>
bool is_homogeneous(const NCPoly<S>& f) {
  return f.is_zero() || f.terms().begin()->first.size() == f.terms().rbegin()->first.size();
}

/// Substitutes point[i] for x_i, multiplying in word order.
template <class S>
S eval(const NCPoly<S>& f, std::span<const S> point) {
  if (point.size() != f.n_vars()) {
    throw InputError("evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(f.n_vars()));
  }
  S total(0);
  for (const auto& [w, c] : f.terms()) {
    S term = c;
    for (auto v : w) term = term * point[v];
    total = total + term;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Commutative polynomials

/// Exponent vector of length n_vars.
using CMonomial = std::vector<std::uint32_t>;

inline CMonomial monomial_from_support(std::size_t n_vars, std::span<const std::uint32_t> support) {
  CMonomial m(n_vars, 0);
  for (auto v : support) {
    if (v >= n_vars) throw InputError("support index " + std::to_string(v) + " out of range");
    if (m[v]) throw InputError("repeated variable in multilinear support");
    m[v] = 1;
  }
  return m;
}

inline std::vector<std::uint32_t> support_of(const CMonomial& m) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < m.size(); ++i) {
    if (m[i]) out.push_back(i);
  }
  return out;
}

template <class S>
class CPoly {
 public:
  using Terms = std::map<CMonomial, S>;

  explicit CPoly(std::size_t n_vars = 0) : n_vars_(n_vars) {}

  static CPoly constant(std::size_t n_vars, const S& c) {
    CPoly f(n_vars);
    f.add_term(CMonomial(n_vars, 0), c);
    return f;
  }
  static CPoly variable(std::size_t n_vars, std::uint32_t i, const S& c = S(1)) {
    CPoly f(n_vars);
    CMonomial m(n_vars, 0);
    if (i >= n_vars) throw InputError("variable index out of range");
    m[i] = 1;
    f.add_term(std::move(m), c);
    return f;
  }

  std::size_t n_vars() const { return n_vars_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  S coefficient(const CMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? S(0) : it->second;
  }

  void add_term(CMonomial m, const S& c) {
    if (m.size() != n_vars_) throw InputError("exponent vector length does not match the variable count");
    if (hadamard::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (inserted) return;
    it->second = it->second + c;
    if (hadamard::is_zero(it->second)) terms_.erase(it);
  }

  bool is_multilinear() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
      return std::all_of(t.first.begin(), t.first.end(), [](std::uint32_t e) { return e <= 1; });
    });
  }

  CPoly operator-() const {
    CPoly out(n_vars_);
    for (const auto& [m, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, -c);
    return out;
  }
  CPoly& operator+=(const CPoly& rhs) {
    check_arity(rhs);
    for (const auto& [m, c] : rhs.terms_) add_term(m, c);
    return *this;
  }
  CPoly& operator-=(const CPoly& rhs) { return *this += -rhs; }
  friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
  friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
  friend CPoly operator*(const S& c, const CPoly& f) {
    CPoly out(f.n_vars_);
    for (const auto& [m, a] : f.terms_) out.add_term(m, c * a);
    return out;
  }
  friend CPoly operator*(const CPoly& f, const CPoly& g) { return multiply(f, g, Caps{}); }
  friend bool operator==(const CPoly& a, const CPoly& b) { return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_; }

  static CPoly multiply(const CPoly& f, const CPoly& g, const Caps& caps) {
    f.check_arity(g);
    CPoly out(f.n_vars_);
    for (const auto& [u, a] : f.terms_) {
      for (const auto& [v, b] : g.terms_) {
        CMonomial m = u;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += v[i];
        out.add_term(std::move(m), a * b);
      }
      check_terms(out.size(), caps, "commutative product");
    }
    return out;
  }

  void check_arity(const CPoly& other) const {
    if (other.n_vars_ != n_vars_) {
      throw InputError("arity mismatch: " + std::to_string(n_vars_) + " vs " + std::to_string(other.n_vars_) +
                       " variables");
    }
  }

 private:
  std::size_t n_vars_;
  Terms terms_;
};

template <class S>
CPoly<S> hadamard(const CPoly<S>& f, const CPoly<S>& g) {
  f.check_arity(g);
  CPoly<S> out(f.n_vars());
  for (const auto& [m, a] : f.terms()) {
    auto it = g.terms().find(m);
    if (it != g.terms().end()) out.add_term(m, a * it->second);
  }
  return out;
}

template <class S>
S eval(const CPoly<S>& f, std::span<const S> point) {
  if (point.size() != f.n_vars()) throw InputError("evaluation point has the wrong number of coordinates");
  S total(0);
  for (const auto& [m, c] : f.terms()) {
    S term = c;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::uint32_t e = 0; e < m[i]; ++e) term = term * point[i];
    }
    total = total + term;
  }
  return total;
}

/// |sum_m f(m) g(m)|. Coefficients are rational, so conjugation is the identity.
inline Rational corr(const CPoly<Rational>& f, const CPoly<Rational>& g) {
  f.check_arity(g);
  Rational total(0);
  for (const auto& [m, a] : f.terms()) {
    auto it = g.terms().find(m);
    if (it != g.terms().end()) total += a * it->second;
  }
  return mp::abs(total);
}

/// Squared l2 norm, sum_m f(m)^2.
inline Rational norm_sq(const CPoly<Rational>& f) {
  Rational total(0);
  for (const auto& [m, a] : f.terms()) total += a * a;
  return total;
}

}  // namespace hadamard
