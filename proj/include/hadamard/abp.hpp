#pragma once

// Layered algebraic branching programs.
//
// An Abp is a list of edges between consecutive layers. Parallel edges are
// allowed and mean the sum of their labels; an absent edge means label 0.

#include "hadamard/caps.hpp"
#include "hadamard/linalg.hpp"
#include "hadamard/poly.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hadamard {

struct NodeRef {
  std::uint32_t layer = 0;
  std::uint32_t index = 0;
  auto operator<=>(const NodeRef&) const = default;
};

/// constant + sum_i coeffs[i] x_i, with no zero coefficient stored.
template <class S>
struct LinearForm {
  S constant = S(0);
  std::map<std::uint32_t, S> coeffs;

  static LinearForm of_constant(const S& c) { return LinearForm{c, {}}; }
  static LinearForm of_variable(std::uint32_t i, const S& c = S(1)) {
    LinearForm f;
    f.add(i, c);
    return f;
  }

  bool is_zero() const { return hadamard::is_zero(constant) && coeffs.empty(); }
  bool is_linear() const { return hadamard::is_zero(constant); }

  void add(std::uint32_t i, const S& c) {
    if (hadamard::is_zero(c)) return;
    auto [it, inserted] = coeffs.try_emplace(i, c);
    if (inserted) return;
    it->second = it->second + c;
    if (hadamard::is_zero(it->second)) coeffs.erase(it);
  }

  S coefficient(std::uint32_t i) const {
    auto it = coeffs.find(i);
    return it == coeffs.end() ? S(0) : it->second;
  }

  S eval(std::span<const S> point) const {
    S v = constant;
    for (const auto& [i, c] : coeffs) v = v + c * point[i];
    return v;
  }

  NCPoly<S> to_poly(std::size_t n_vars) const {
    NCPoly<S> f(n_vars);
    f.add_term({}, constant);
    for (const auto& [i, c] : coeffs) f.add_term({i}, c);
    return f;
  }

  friend LinearForm operator*(const S& a, const LinearForm& f) {
    LinearForm out;
    if (hadamard::is_zero(a)) return out;
    out.constant = a * f.constant;
    for (const auto& [i, c] : f.coeffs) out.add(i, a * c);
    return out;
  }

  bool operator==(const LinearForm& other) const = default;
};

template <class S>
struct AbpEdge {
  NodeRef from;
  NodeRef to;
  LinearForm<S> label;
  bool operator==(const AbpEdge&) const = default;
};

template <class S>
struct Abp {
  std::size_t n_vars = 0;
  std::vector<std::size_t> layers;
  std::vector<AbpEdge<S>> edges;

  /// The program with one edge-free layer step; computes 0.
  static Abp zero(std::size_t n_vars) { return Abp{n_vars, {1, 1}, {}}; }

  std::size_t depth() const { return layers.empty() ? 0 : layers.size() - 1; }
  std::size_t node_count() const {
    std::size_t total = 0;
    for (auto w : layers) total += w;
    return total;
  }
  std::size_t max_width() const { return layers.empty() ? 0 : *std::max_element(layers.begin(), layers.end()); }

  /// First violated invariant, or nullopt when the program is well formed.
  std::optional<std::string> validate() const {
    if (layers.size() < 2) return "an ABP needs at least two layers";
    if (layers.front() != 1) return "layer 0 must hold exactly the source";
    if (layers.back() != 1) return "the last layer must hold exactly the sink";
    for (std::size_t l = 0; l < layers.size(); ++l) {
      if (layers[l] == 0) return "layer " + std::to_string(l) + " is empty";
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto& [from, to, label] = edges[e];
      const std::string where = "edge " + std::to_string(e);
      if (from.layer + 1 != to.layer) return where + " does not join consecutive layers";
      if (to.layer >= layers.size()) return where + " leaves the last layer";
      if (from.index >= layers[from.layer] || to.index >= layers[to.layer]) return where + " names a missing node";
      for (const auto& [i, c] : label.coeffs) {
        if (i >= n_vars) return where + " uses variable " + std::to_string(i) + " out of range";
      }
    }
    return std::nullopt;
  }

  void check() const {
    if (auto err = validate()) throw InputError("invalid ABP: " + *err);
  }

  bool operator==(const Abp&) const = default;
};

/// The matrix of edge-label values between layers l and l+1, summed over
/// parallel edges, with each label mapped through `value`.
template <class S, class Fn>
Matrix<S> layer_matrix(const Abp<S>& p, std::size_t l, Fn&& value) {
  Matrix<S> m = Matrix<S>::Zero(static_cast<Eigen::Index>(p.layers[l]), static_cast<Eigen::Index>(p.layers[l + 1]));
  for (const auto& e : p.edges) {
    if (e.from.layer != l) continue;
    m(e.from.index, e.to.index) = m(e.from.index, e.to.index) + value(e.label);
  }
  return m;
}

/// Row vector times one matrix per layer.
template <class S>
S evaluate(const Abp<S>& p, std::span<const S> point) {
  p.check();
  if (point.size() != p.n_vars) {
    throw InputError("evaluation point has " + std::to_string(point.size()) + " coordinates, expected " +
                     std::to_string(p.n_vars));
  }
  RowVector<S> v = RowVector<S>::Ones(1);
  for (std::size_t l = 0; l < p.depth(); ++l) {
    v = v * layer_matrix(p, l, [&](const LinearForm<S>& f) { return f.eval(point); });
  }
  return v(0);
}

/// Sum over source-to-sink paths, computed node by node.
template <class S>
NCPoly<S> expand(const Abp<S>& p, const Caps& caps = {}) {
  p.check();
  check_degree(p.depth(), caps, "ABP expansion");
  std::vector<std::vector<NCPoly<S>>> at(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) at[l].assign(p.layers[l], NCPoly<S>(p.n_vars));
  at[0][0] = NCPoly<S>::constant(p.n_vars, S(1));
  std::vector<const AbpEdge<S>*> order;
  for (const auto& e : p.edges) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->from.layer < b->from.layer; });
  for (const auto* e : order) {
    const auto& src = at[e->from.layer][e->from.index];
    if (src.is_zero() || e->label.is_zero()) continue;
    auto& dst = at[e->to.layer][e->to.index];
    dst += NCPoly<S>::multiply(src, e->label.to_poly(p.n_vars), caps);
    check_terms(dst.size(), caps, "ABP expansion");
  }
  return at.back()[0];
}

/// Drops nodes that are not on any source-to-sink path (the source and sink
/// themselves stay) and the edges touching them, plus zero-labelled edges.
template <class S>
Abp<S> prune(const Abp<S>& p) {
  p.check();
  const std::size_t d = p.depth();
  std::vector<std::vector<char>> fwd(d + 1), bwd(d + 1);
  for (std::size_t l = 0; l <= d; ++l) {
    fwd[l].assign(p.layers[l], 0);
    bwd[l].assign(p.layers[l], 0);
  }
  fwd[0][0] = 1;
  bwd[d][0] = 1;
  std::vector<const AbpEdge<S>*> live;
  for (const auto& e : p.edges) {
    if (!e.label.is_zero()) live.push_back(&e);
  }
  std::stable_sort(live.begin(), live.end(), [](auto* a, auto* b) { return a->from.layer < b->from.layer; });
  for (const auto* e : live) {
    if (fwd[e->from.layer][e->from.index]) fwd[e->to.layer][e->to.index] = 1;
  }
  for (auto it = live.rbegin(); it != live.rend(); ++it) {
    if (bwd[(*it)->to.layer][(*it)->to.index]) bwd[(*it)->from.layer][(*it)->from.index] = 1;
  }
  Abp<S> out{p.n_vars, std::vector<std::size_t>(d + 1, 0), {}};
  std::vector<std::vector<std::uint32_t>> renum(d + 1);
  for (std::size_t l = 0; l <= d; ++l) {
    renum[l].assign(p.layers[l], UINT32_MAX);
    for (std::size_t v = 0; v < p.layers[l]; ++v) {
      const bool keep = (l == 0 && v == 0) || (l == d && v == 0) || (fwd[l][v] && bwd[l][v]);
      if (keep) renum[l][v] = static_cast<std::uint32_t>(out.layers[l]++);
    }
  }
  for (std::size_t l = 1; l < d; ++l) {
    // Every layer must stay nonempty; a program with no surviving path keeps
    // one isolated placeholder node per interior layer.
    if (out.layers[l] == 0) out.layers[l] = 1;
  }
  for (const auto* e : live) {
    const auto a = renum[e->from.layer][e->from.index];
    const auto b = renum[e->to.layer][e->to.index];
    if (a == UINT32_MAX || b == UINT32_MAX) continue;
    if (!(fwd[e->from.layer][e->from.index] && bwd[e->to.layer][e->to.index])) continue;
    out.edges.push_back({{e->from.layer, a}, {e->to.layer, b}, e->label});
  }
  return out;
}

/// True when some source-to-sink path has only nonzero labels.
template <class S>
bool has_path(const Abp<S>& p) {
  const Abp<S> q = prune(p);
  return !q.edges.empty();
}

/// Degree-d piece of P together with its degree.
template <class S>
struct HomogeneousPart {
  std::size_t degree = 0;
  Abp<S> abp;
};

/// The homogeneous components of P, in increasing degree, omitting those with
/// no source-to-sink path. Part e has depth e (depth 1 with a single constant
/// edge for e = 0) and only linear labels when e >= 1.
///
/// Between consecutive variable-reading steps a path runs through constant
/// parts only, so those runs are contracted into products of the
/// constant-label matrices K(a, b) = C_a C_{a+1} ... C_{b-1}.
template <class S>
std::vector<HomogeneousPart<S>> homogeneous_parts(const Abp<S>& p, const Caps& caps = {}) {
  p.check();
  const std::size_t d = p.depth();
  check_degree(d, caps, "homogenization");
  const std::size_t n = p.n_vars;
  auto width = [&](std::size_t l) { return static_cast<Eigen::Index>(p.layers[l]); };

  std::vector<Matrix<S>> c(d);
  // lin[l]: coefficient matrix of each variable read in layer l
  std::vector<std::map<std::uint32_t, Matrix<S>>> lin(d);
  for (const auto& e : p.edges) {
    for (const auto& [i, coeff] : e.label.coeffs) lin[e.from.layer].try_emplace(i);
  }
  for (std::size_t l = 0; l < d; ++l) {
    c[l] = layer_matrix(p, l, [](const LinearForm<S>& f) { return f.constant; });
    for (auto& [i, m] : lin[l]) m = layer_matrix(p, l, [&](const LinearForm<S>& f) { return f.coefficient(i); });
  }
  // k[a][b - a] = K(a, b); kzero marks the vanishing ones
  std::vector<std::vector<Matrix<S>>> k(d + 1);
  std::vector<std::vector<char>> kzero(d + 1);
  for (std::size_t a = 0; a <= d; ++a) {
    k[a].push_back(Matrix<S>::Identity(width(a), width(a)));
    kzero[a].push_back(0);
    for (std::size_t b = a + 1; b <= d; ++b) {
      if (kzero[a].back()) {
        k[a].push_back(Matrix<S>::Zero(width(a), width(b)));
        kzero[a].push_back(1);
        continue;
      }
      k[a].push_back(matmul(k[a].back(), c[b - 1]));
      kzero[a].push_back(hadamard::is_zero(k[a].back()));
    }
  }
  auto K = [&](std::size_t a, std::size_t b) -> const Matrix<S>& { return k[a][b - a]; };
  auto K_zero = [&](std::size_t a, std::size_t b) { return kzero[a][b - a] != 0; };

  std::vector<HomogeneousPart<S>> parts;
  const S c0 = K(0, d)(0, 0);
  if (!is_zero(c0)) {
    parts.push_back({0, Abp<S>{n, {1, 1}, {{{0, 0}, {1, 0}, LinearForm<S>::of_constant(c0)}}}});
  }

  for (std::size_t e = 1; e <= d; ++e) {
    Abp<S> part{n, std::vector<std::size_t>(e + 1, 0), {}};
    // Level j (0 < j < e) holds copies of the original nodes in layers
    // j .. d-(e-j); offset[j][l - j] is where layer l's copies start.
    std::vector<std::vector<std::uint32_t>> offset(e + 1);
    part.layers[0] = 1;
    part.layers[e] = 1;
    offset[0] = {0};
    for (std::size_t j = 1; j < e; ++j) {
      for (std::size_t l = j; l <= d - (e - j); ++l) {
        offset[j].push_back(static_cast<std::uint32_t>(part.layers[j]));
        part.layers[j] += p.layers[l];
      }
    }
    auto lo = [&](std::size_t j) { return j == 0 ? std::size_t{0} : j; };
    auto hi = [&](std::size_t j) { return j == 0 ? std::size_t{0} : d - (e - j); };
    for (std::size_t j = 1; j <= e; ++j) {
      for (std::size_t l1 = lo(j - 1); l1 <= hi(j - 1); ++l1) {
        if (j < e) {
          for (std::size_t l2 = std::max(l1 + 1, j); l2 <= d - (e - j); ++l2) {
            if (K_zero(l1, l2 - 1)) continue;
            // reach (l2, v) from (l1, u): constants up to layer l2-1, then a variable step
            for (const auto& [i, li] : lin[l2 - 1]) {
              const Matrix<S> m = l2 - 1 == l1 ? li : matmul(K(l1, l2 - 1), li);
              for (Eigen::Index u = 0; u < m.rows(); ++u) {
                for (Eigen::Index v = 0; v < m.cols(); ++v) {
                  if (is_zero(m(u, v))) continue;
                  const NodeRef from{static_cast<std::uint32_t>(j - 1),
                                     static_cast<std::uint32_t>(j == 1 ? 0 : offset[j - 1][l1 - (j - 1)] + u)};
                  const NodeRef to{static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(offset[j][l2 - j] + v)};
                  part.edges.push_back({from, to, LinearForm<S>::of_variable(i, m(u, v))});
                }
              }
            }
          }
        } else {
          for (std::size_t l2 = l1 + 1; l2 <= d; ++l2) {
            if (K_zero(l1, l2 - 1) || K_zero(l2, d)) continue;
            for (const auto& [i, li] : lin[l2 - 1]) {
              const Matrix<S> m = matmul(matmul(K(l1, l2 - 1), li), K(l2, d));
              for (Eigen::Index u = 0; u < m.rows(); ++u) {
                if (is_zero(m(u, 0))) continue;
                const NodeRef from{static_cast<std::uint32_t>(j - 1),
                                   static_cast<std::uint32_t>(j == 1 ? 0 : offset[j - 1][l1 - (j - 1)] + u)};
                part.edges.push_back({from, {static_cast<std::uint32_t>(e), 0},
                                      LinearForm<S>::of_variable(i, m(u, 0))});
              }
            }
          }
        }
      }
    }
    // Merge parallel copies of the same (from, to, variable).
    std::map<std::pair<std::pair<NodeRef, NodeRef>, std::uint32_t>, S> merged;
    for (const auto& edge : part.edges) {
      const auto& [var, coeff] = *edge.label.coeffs.begin();
      auto [it, inserted] = merged.try_emplace({{edge.from, edge.to}, var}, coeff);
      if (!inserted) it->second = it->second + coeff;
    }
    part.edges.clear();
    for (const auto& [key, coeff] : merged) {
      if (is_zero(coeff)) continue;
      part.edges.push_back({key.first.first, key.first.second, LinearForm<S>::of_variable(key.second, coeff)});
    }
    part = prune(part);
    if (!part.edges.empty()) parts.push_back({e, std::move(part)});
  }
  return parts;
}

/// Splits every edge label into one parallel edge per variable, so each edge
/// reads a single variable. Requires linear labels and depth >= 1.
template <class S>
Abp<S> normalize_edges(const Abp<S>& p) {
  p.check();
  Abp<S> out{p.n_vars, p.layers, {}};
  for (const auto& e : p.edges) {
    if (!e.label.is_linear()) throw InputError("normalize_edges needs a homogeneous ABP (an edge has a constant term)");
    for (const auto& [i, c] : e.label.coeffs) out.edges.push_back({e.from, e.to, LinearForm<S>::of_variable(i, c)});
  }
  return out;
}

template <class S>
bool is_normalized(const Abp<S>& p) {
  return std::all_of(p.edges.begin(), p.edges.end(),
                     [](const auto& e) { return e.label.is_linear() && e.label.coeffs.size() <= 1; });
}

/// One program computing the sum of the inputs. Sources are merged; programs
/// shorter than the longest one feed their sink into a shared chain of
/// pass-through nodes (edges labelled 1), adding at most depth-1 nodes.
template <class S>
Abp<S> abp_sum(std::span<const Abp<S>> ps) {
  if (ps.empty()) throw InputError("abp_sum of an empty list");
  const std::size_t n = ps.front().n_vars;
  std::size_t big = 0;
  std::size_t small = SIZE_MAX;
  for (const auto& p : ps) {
    p.check();
    if (p.n_vars != n) throw InputError("abp_sum: arity mismatch");
    big = std::max(big, p.depth());
  }
  for (const auto& p : ps) {
    if (p.depth() < big) small = std::min(small, p.depth());
  }
  Abp<S> out{n, std::vector<std::size_t>(big + 1, 0), {}};
  out.layers[0] = 1;
  out.layers[big] = 1;
  // Interior offsets per input.
  std::vector<std::vector<std::uint32_t>> base(ps.size());
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto& p = ps[k];
    base[k].assign(p.depth() + 1, 0);
    for (std::size_t l = 1; l < p.depth(); ++l) {
      base[k][l] = static_cast<std::uint32_t>(out.layers[l]);
      out.layers[l] += p.layers[l];
    }
  }
  std::vector<std::uint32_t> chain(big + 1, 0);
  if (small != SIZE_MAX) {
    for (std::size_t l = small; l < big; ++l) chain[l] = static_cast<std::uint32_t>(out.layers[l]++);
    for (std::size_t l = small; l < big; ++l) {
      out.edges.push_back({{static_cast<std::uint32_t>(l), chain[l]},
                           {static_cast<std::uint32_t>(l + 1), l + 1 == big ? 0u : chain[l + 1]},
                           LinearForm<S>::of_constant(S(1))});
    }
  }
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto& p = ps[k];
    const std::size_t d = p.depth();
    auto map = [&](NodeRef r) -> NodeRef {
      if (r.layer == 0) return {0, 0};
      if (r.layer == d) return {r.layer, d == big ? 0u : chain[d]};
      return {r.layer, base[k][r.layer] + r.index};
    };
    for (const auto& e : p.edges) out.edges.push_back({map(e.from), map(e.to), e.label});
  }
  return out;
}

/// A_{i,l}: entry (a, b) is the coefficient of x_i on the edges from node a of
/// layer l to node b of layer l+1. Indexed [l][i].
template <class S>
std::vector<std::vector<Matrix<S>>> coefficient_matrices(const Abp<S>& p) {
  p.check();
  if (!is_normalized(p)) throw InputError("coefficient_matrices needs a normalized ABP");
  std::vector<std::vector<Matrix<S>>> out(p.depth());
  for (std::size_t l = 0; l < p.depth(); ++l) {
    for (std::size_t i = 0; i < p.n_vars; ++i) {
      out[l].push_back(
          layer_matrix(p, l, [&](const LinearForm<S>& f) { return f.coefficient(static_cast<std::uint32_t>(i)); }));
    }
  }
  return out;
}

/// Coefficient of `word` in the polynomial computed by P, as a product of
/// coefficient matrices of the matching homogeneous part.
template <class S>
S coefficient_of(const Abp<S>& p, const Word& word, const Caps& caps = {}) {
  p.check();
  for (auto v : word) {
    if (v >= p.n_vars) throw InputError("word uses a variable out of range");
  }
  if (word.size() > p.depth()) return S(0);
  for (const auto& part : homogeneous_parts(p, caps)) {
    if (part.degree != word.size()) continue;
    if (part.degree == 0) return part.abp.edges.front().label.constant;
    const auto mats = coefficient_matrices(normalize_edges(part.abp));
    RowVector<S> v = RowVector<S>::Ones(1);
    for (std::size_t l = 0; l < word.size(); ++l) v = v * mats[l][word[l]];
    return v(0);
  }
  return S(0);
}

/// Restriction of P to the nodes reachable from `from` and reaching `to`,
/// re-rooted so `from` is the source and `to` the sink: B(from, to).
template <class S>
Abp<S> restrict_abp(const Abp<S>& p, NodeRef from, NodeRef to) {
  p.check();
  if (from.layer >= to.layer) throw InputError("restrict_abp needs from.layer < to.layer");
  Abp<S> out{p.n_vars, {}, {}};
  for (std::size_t l = from.layer; l <= to.layer; ++l) out.layers.push_back(p.layers[l]);
  out.layers.front() = 1;
  out.layers.back() = 1;
  for (const auto& e : p.edges) {
    if (e.from.layer < from.layer || e.to.layer > to.layer) continue;
    if (e.from.layer == from.layer && e.from.index != from.index) continue;
    if (e.to.layer == to.layer && e.to.index != to.index) continue;
    NodeRef a{e.from.layer - from.layer, e.from.layer == from.layer ? 0u : e.from.index};
    NodeRef b{e.to.layer - from.layer, e.to.layer == to.layer ? 0u : e.to.index};
    out.edges.push_back({a, b, e.label});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nisan matrices

/// Lexicographic rank of a word among words of its length over n letters.
inline std::uint64_t word_index(const Word& w, std::size_t n) {
  std::uint64_t idx = 0;
  for (auto v : w) idx = idx * n + v;
  return idx;
}

inline Word word_at(std::uint64_t idx, std::size_t len, std::size_t n) {
  Word w(len);
  for (std::size_t i = len; i-- > 0;) {
    w[i] = static_cast<std::uint32_t>(idx % n);
    idx /= n;
  }
  return w;
}

/// M_k(f) for f homogeneous of degree `degree`: rows are the degree-k words,
/// columns the degree-(degree-k) words, both in lexicographic order.
template <class S>
Matrix<S> nisan_matrix(const NCPoly<S>& f, std::size_t k, std::size_t degree, const Caps& caps = {}) {
  if (!f.is_zero() && (!is_homogeneous(f) || static_cast<std::size_t>(f.degree()) != degree)) {
    throw InputError("nisan_matrix needs a polynomial homogeneous of degree " + std::to_string(degree));
  }
  if (k > degree) throw InputError("nisan_matrix: split point beyond the degree");
  const std::size_t n = f.n_vars();
  auto count = [&](std::size_t len) {
    long double c = 1;
    std::uint64_t exact = 1;
    for (std::size_t i = 0; i < len; ++i) {
      c *= static_cast<long double>(n);
      exact *= n;
    }
    if (c > static_cast<long double>(caps.max_terms)) throw ResourceError("Nisan matrix dimension exceeds the term cap");
    return exact;
  };
  const auto rows = count(k);
  const auto cols = count(degree - k);
  check_terms(rows * cols, caps, "Nisan matrix");
  Matrix<S> m = Matrix<S>::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (const auto& [w, c] : f.terms()) {
    const Word head(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
    const Word tail(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
    m(static_cast<Eigen::Index>(word_index(head, n)), static_cast<Eigen::Index>(word_index(tail, n))) = c;
  }
  return m;
}

/// rank M_k(f) for k = 0..degree.
template <class S>
std::vector<std::size_t> nisan_ranks(const NCPoly<S>& f, std::size_t degree, const Caps& caps = {}) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k <= degree; ++k) out.push_back(rank(nisan_matrix(f, k, degree, caps)));
  return out;
}

template <class S>
std::size_t nisan_complexity(const NCPoly<S>& f, std::size_t degree, const Caps& caps = {}) {
  std::size_t total = 0;
  for (auto r : nisan_ranks(f, degree, caps)) total += r;
  return total;
}

}  // namespace hadamard
