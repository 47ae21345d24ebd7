#pragma once

// Identity tests for ABPs, the reductions that turn determinants and
// reachability into ABP zero-testing, and a brute-force Hadamard-zero oracle.

#include "hadamard/abp.hpp"
#include "hadamard/circuit.hpp"
#include "hadamard/products.hpp"

#include <cstdint>
#include <exception>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace hadamard {

struct PitVerdict {
  bool is_zero = true;
  std::string method;
  /// A monomial with nonzero coefficient (deterministic methods).
  std::optional<Word> witness_word;
  /// The first trial whose evaluation was nonzero (randomized method).
  std::optional<std::uint64_t> witness_trial;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> nonzero_trials;
  /// Upper bounds on the probability that a nonzero input is reported zero,
  /// for one trial and for the whole run.
  std::optional<Rational> trial_failure_bound;
  std::optional<Rational> failure_bound;
  /// For the rational test: the value of P o P at the all-ones point.
  std::optional<Rational> value;
};

/// Over Q, P o P has coefficients a_m^2, so it vanishes iff its value at the
/// all-ones point does.
inline PitVerdict pit_rational(const Abp<Rational>& p, const Caps& caps = {}) {
  const Abp<Rational> r = hadamard_abp(p, p, nullptr, caps);
  const std::vector<Rational> ones(p.n_vars, Rational(1));
  PitVerdict v;
  v.method = "rational";
  v.value = evaluate(r, std::span<const Rational>(ones));
  v.is_zero = v.value->is_zero();
  return v;
}

namespace detail {

template <class S>
struct Spanned {
  Matrix<S> m;
  Word word;
};

/// Basis of span{ A_{i_lo,lo} ... A_{i_{hi-1},hi-1} } over all words, each
/// element tagged with a word producing it.
template <class S>
std::vector<Spanned<S>> span_basis(const std::vector<std::vector<Matrix<S>>>& a, std::size_t lo, std::size_t hi) {
  std::vector<Spanned<S>> cand;
  if (hi == lo + 1) {
    for (std::uint32_t i = 0; i < a[lo].size(); ++i) cand.push_back({a[lo][i], {i}});
  } else {
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto left = span_basis(a, lo, mid);
    const auto right = span_basis(a, mid, hi);
    for (const auto& x : left) {
      for (const auto& y : right) {
        Word w = x.word;
        w.insert(w.end(), y.word.begin(), y.word.end());
        cand.push_back({matmul(x.m, y.m), std::move(w)});
      }
    }
  }
  std::vector<Matrix<S>> mats;
  mats.reserve(cand.size());
  for (const auto& c : cand) mats.push_back(c.m);
  std::vector<Spanned<S>> out;
  for (auto idx : basis_of_span(std::span<const Matrix<S>>(mats))) out.push_back(std::move(cand[idx]));
  return out;
}

}  // namespace detail

/// Deterministic test over any field: P is zero iff for every homogeneous
/// part the span of all products of coefficient matrices is the zero space.
template <class S>
PitVerdict pit_span_basis(const Abp<S>& p, const Caps& caps = {}) {
  PitVerdict v;
  v.method = "span_basis";
  for (const auto& part : homogeneous_parts(p, caps)) {
    if (part.degree == 0) {
      v.is_zero = false;
      v.witness_word = Word{};
      return v;
    }
    const auto mats = coefficient_matrices(normalize_edges(part.abp));
    const auto basis = detail::span_basis(mats, 0, part.degree);
    if (!basis.empty()) {
      v.is_zero = false;
      v.witness_word = basis.front().word;
      return v;
    }
  }
  return v;
}

/// Expand and look.
template <class S>
PitVerdict pit_bruteforce(const NCPoly<S>& f) {
  PitVerdict v;
  v.method = "bruteforce";
  v.is_zero = f.is_zero();
  if (!v.is_zero) v.witness_word = f.terms().begin()->first;
  return v;
}

template <class S>
PitVerdict pit_bruteforce(const Abp<S>& p, const Caps& caps = {}) {
  return pit_bruteforce(expand(p, caps));
}

template <class S>
PitVerdict pit_bruteforce(const Circuit<S>& c, const Caps& caps = {}) {
  return pit_bruteforce(expand(c, caps));
}

// ---------------------------------------------------------------------------
// Randomized test

struct RandomizedOptions {
  std::uint64_t trials = 20;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for one trial, a function of (seed, trial) only.
inline std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ trial));
}

namespace detail {

inline unsigned extension_degree(std::uint64_t q, std::size_t need) {
  unsigned m = 1;
  long double size = static_cast<long double>(q);
  while (size < static_cast<long double>(need)) {
    size *= static_cast<long double>(q);
    ++m;
  }
  return m;
}

/// A root of the base field's modulus inside `ext`, found by search.
inline Fpk embedding_root(const ExtensionField& base, const ExtensionField& ext) {
  for (std::uint64_t i = 0; i < ext.size(); ++i) {
    const Fpk x = ext.from_index(i);
    Fpk acc = ext.element(0);
    for (std::size_t j = base.modulus().size(); j-- > 0;) acc = acc * x + ext.element(base.modulus()[j]);
    if (acc.is_zero()) return x;
  }
  throw ArithmeticError("no embedding of " + base.name() + " into " + ext.name());
}

template <class T, class S, class Lift>
bool trial_nonzero(const std::vector<Abp<S>>& parts, const FieldOf<T>& field, std::uint64_t size, Lift&& lift,
                   std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
  bool nonzero = false;
  for (const auto& h : parts) {
    // Independent values for every (layer, variable): the relabeled commutative polynomial.
    std::vector<std::vector<T>> val(h.depth(), std::vector<T>(h.n_vars));
    for (auto& layer : val) {
      for (auto& x : layer) x = field.from_index(pick(rng));
    }
    RowVector<T> v = RowVector<T>::Ones(1);
    for (std::size_t l = 0; l < h.depth(); ++l) {
      Matrix<T> m = Matrix<T>::Zero(static_cast<Eigen::Index>(h.layers[l]), static_cast<Eigen::Index>(h.layers[l + 1]));
      for (const auto& e : h.edges) {
        if (e.from.layer != l) continue;
        for (const auto& [i, c] : e.label.coeffs) m(e.from.index, e.to.index) += lift(c) * val[l][i];
      }
      v = v * m;
    }
    if (!is_zero(v(0))) nonzero = true;
  }
  return nonzero;
}

template <class Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, threads);
  if (threads == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Schwartz-Zippel on the per-layer relabeling of each homogeneous part.
/// One-sided: a nonzero evaluation certifies a nonzero polynomial. All trials
/// run, so the outcome does not depend on the thread count.
template <class S>
PitVerdict pit_randomized(const Abp<S>& p, const RandomizedOptions& opt, const Caps& caps = {}) {
  static_assert(!std::is_same_v<S, Rational>, "the randomized test needs a finite field");
  if (opt.trials == 0) throw InputError("pit_randomized needs at least one trial");
  p.check();
  const std::size_t d = std::max<std::size_t>(p.depth(), 1);
  PitVerdict v;
  v.method = "randomized";
  v.trials = opt.trials;
  v.nonzero_trials = 0;

  std::vector<Abp<S>> parts;
  bool constant = false;
  for (const auto& part : homogeneous_parts(p, caps)) {
    if (part.degree == 0) constant = true;
    else parts.push_back(normalize_edges(part.abp));
  }

  // Base field data.
  std::uint64_t q = 0;
  std::uint32_t ch = 0;
  unsigned k = 1;
  const ExtensionField* base_ext = nullptr;
  if constexpr (std::is_same_v<S, Fp>) {
    std::optional<std::uint32_t> prime;
    for (const auto& e : p.edges) {
      auto note = [&](const Fp& x) {
        if (x.bound()) prime = x.field()->characteristic();
      };
      note(e.label.constant);
      for (const auto& [i, c] : e.label.coeffs) note(c);
    }
    ch = prime.value_or(2);
    q = ch;
  } else {
    for (const auto& e : p.edges) {
      auto note = [&](const Fpk& x) {
        if (x.bound()) base_ext = x.field();
      };
      note(e.label.constant);
      for (const auto& [i, c] : e.label.coeffs) note(c);
    }
    if (!base_ext) base_ext = &ExtensionField::get(2, 1);
    ch = base_ext->characteristic();
    k = base_ext->degree();
    q = base_ext->size();
  }
  const unsigned m = detail::extension_degree(q, 2 * d);
  std::uint64_t qprime = q;
  for (unsigned i = 1; i < m; ++i) qprime *= q;
  v.trial_failure_bound = Rational(d) / Rational(qprime);
  v.failure_bound = Rational(mp::pow(Integer(d), static_cast<unsigned>(opt.trials)),
                             mp::pow(Integer(qprime), static_cast<unsigned>(opt.trials)));

  std::vector<char> hit(opt.trials, 0);
  if (constant) {
    std::fill(hit.begin(), hit.end(), 1);
  } else if (!parts.empty()) {
    if constexpr (std::is_same_v<S, Fp>) {
      if (m == 1) {
        const PrimeField& f = PrimeField::get(ch);
        auto lift = [](const Fp& x) { return x; };
        detail::parallel_for(opt.trials, opt.threads, [&](std::uint64_t t) {
          auto rng = trial_rng(opt.seed, t);
          hit[t] = detail::trial_nonzero<Fp>(parts, f, f.size(), lift, rng);
        });
      } else {
        const ExtensionField& ext = ExtensionField::get(ch, m);
        auto lift = [&](const Fp& x) { return ext.element(x.value()); };
        detail::parallel_for(opt.trials, opt.threads, [&](std::uint64_t t) {
          auto rng = trial_rng(opt.seed, t);
          hit[t] = detail::trial_nonzero<Fpk>(parts, ext, ext.size(), lift, rng);
        });
      }
    } else {
      const ExtensionField& ext = m == 1 ? *base_ext : ExtensionField::get(ch, k * m);
      const Fpk root = m == 1 ? Fpk() : detail::embedding_root(*base_ext, ext);
      auto lift = [&](const Fpk& x) {
        if (m == 1 || !x.bound()) return m == 1 ? x : ext.element(x.constant());
        Fpk acc = ext.element(0);
        for (unsigned j = k; j-- > 0;) acc = acc * root + ext.element(x.coeff(j));
        return acc;
      };
      detail::parallel_for(opt.trials, opt.threads, [&](std::uint64_t t) {
        auto rng = trial_rng(opt.seed, t);
        hit[t] = detail::trial_nonzero<Fpk>(parts, ext, ext.size(), lift, rng);
      });
    }
  }
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    if (!hit[t]) continue;
    if (!v.witness_trial) v.witness_trial = t;
    ++*v.nonzero_trials;
  }
  v.is_zero = *v.nonzero_trials == 0;
  return v;
}

/// Size of the field the randomized test samples from, for an ABP of depth d
/// over a base field with q elements.
inline std::uint64_t sampling_size(std::uint64_t q, std::size_t d) {
  const unsigned m = detail::extension_degree(q, 2 * std::max<std::size_t>(d, 1));
  std::uint64_t out = q;
  for (unsigned i = 1; i < m; ++i) out *= q;
  return out;
}

// ---------------------------------------------------------------------------
// Reductions

/// f o g == 0 for monotone circuits, decided by support intersection.
inline bool hadamard_zero_circuits(const Circuit<Rational>& c1, const Circuit<Rational>& c2, const Caps& caps = {}) {
  if (!is_monotone(c1) || !is_monotone(c2)) throw InputError("hadamard_zero_circuits needs monotone circuits");
  if (c1.n_vars != c2.n_vars) throw InputError("hadamard: arity mismatch");
  const auto f = expand(c1, caps);
  const auto g = expand(c2, caps);
  return hadamard(f, g).is_zero();
}

/// A constant-labelled ABP whose value is det(A), built from clow sequences.
/// Layer t counts the edges walked so far; interior states are (head h,
/// current vertex u) with u >= h, u == h meaning a clow was just opened.
/// Closing a clow carries a factor -1, and the last layer multiplies by
/// (-1)^n, which gives each sequence of k clows the sign (-1)^(n+k).
template <class S>
Abp<S> det_to_abp(const Matrix<S>& a) {
  if (a.rows() != a.cols()) throw InputError("det_to_abp needs a square matrix");
  const auto n = static_cast<std::uint32_t>(a.rows());
  if (n == 0) return Abp<S>{0, {1, 1}, {{{0, 0}, {1, 0}, LinearForm<S>::of_constant(S(1))}}};
  Abp<S> p{0, std::vector<std::size_t>(n + 1, n * (n + 1) / 2), {}};
  p.layers.front() = 1;
  p.layers.back() = 1;
  // index of state (h, u), u >= h
  auto state = [&](std::uint32_t h, std::uint32_t u) { return h * n - h * (h - 1) / 2 + (u - h); };
  const S final_sign = n % 2 == 0 ? S(1) : S(-1);
  auto link = [&](NodeRef from, NodeRef to, const S& w) {
    if (!is_zero(w)) p.edges.push_back({from, to, LinearForm<S>::of_constant(w)});
  };
  for (std::uint32_t t = 0; t < n; ++t) {
    // Sources at t = 0 stand for every opened clow (h, h).
    std::vector<std::pair<std::uint32_t, std::uint32_t>> from_states;
    if (t == 0) {
      for (std::uint32_t h = 0; h < n; ++h) from_states.emplace_back(h, h);
    } else {
      for (std::uint32_t h = 0; h < n; ++h) {
        for (std::uint32_t u = h; u < n; ++u) from_states.emplace_back(h, u);
      }
    }
    for (auto [h, u] : from_states) {
      const NodeRef from{t, t == 0 ? 0u : state(h, u)};
      if (t + 1 == n) {
        link(from, {n, 0}, final_sign * -a(u, h));
        continue;
      }
      for (std::uint32_t v = h + 1; v < n; ++v) link(from, {t + 1, state(h, v)}, a(u, v));
      for (std::uint32_t h2 = h + 1; h2 < n; ++h2) link(from, {t + 1, state(h2, h2)}, -a(u, h));
    }
  }
  return prune(p);
}

struct Digraph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// Time-expanded copy of G: layers 0..L with L = max(1, |V| - 1), layer 0 = {s},
/// layer L = {t}, every vertex in between. Each copy of a graph edge, and
/// each "stay at t" step, reads its own fresh variable, so distinct walks give
/// distinct words and nothing cancels.
inline Abp<Rational> reach_to_abp(const Digraph& g, std::uint32_t s, std::uint32_t t) {
  if (s >= g.n || t >= g.n) throw InputError("reach_to_abp: s or t is not a vertex");
  for (const auto& [u, v] : g.edges) {
    if (u >= g.n || v >= g.n) throw InputError("reach_to_abp: edge endpoint out of range");
  }
  const std::size_t L = std::max<std::size_t>(1, g.n - 1);
  Abp<Rational> p{0, std::vector<std::size_t>(L + 1, g.n), {}};
  p.layers.front() = 1;
  p.layers.back() = 1;
  std::uint32_t next_var = 0;
  auto node = [&](std::size_t l, std::uint32_t v) -> std::optional<NodeRef> {
    if (l == 0) return v == s ? std::optional<NodeRef>(NodeRef{0, 0}) : std::nullopt;
    if (l == L) return v == t ? std::optional<NodeRef>(NodeRef{static_cast<std::uint32_t>(L), 0}) : std::nullopt;
    return NodeRef{static_cast<std::uint32_t>(l), v};
  };
  for (std::size_t l = 0; l < L; ++l) {
    auto step = [&](std::uint32_t u, std::uint32_t v) {
      const auto a = node(l, u);
      const auto b = node(l + 1, v);
      if (a && b) p.edges.push_back({*a, *b, LinearForm<Rational>::of_variable(next_var++)});
    };
    for (const auto& [u, v] : g.edges) step(u, v);
    step(t, t);
  }
  p.n_vars = next_var;
  return p;
}

}  // namespace hadamard
