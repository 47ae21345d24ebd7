#pragma once

// Hadamard products realized on machine models: ABP x ABP -> ABP, and
// circuit x ABP -> circuit. Both split the inputs into homogeneous parts,
// multiply equal-degree parts, and add the results.

#include "hadamard/abp.hpp"
#include "hadamard/circuit.hpp"

#include <array>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace hadamard {

/// Layer widths of one equal-degree product.
struct DegreeProduct {
  std::size_t degree = 0;
  std::vector<std::size_t> p_layers;
  std::vector<std::size_t> q_layers;
  std::vector<std::size_t> r_layers;
};

struct HadamardAbpReport {
  std::vector<DegreeProduct> degrees;
  std::size_t nodes_p = 0;
  std::size_t nodes_q = 0;
  std::size_t nodes_before_prune = 0;
  std::size_t nodes_after_prune = 0;
};

/// Product of two normalized ABPs of equal depth: node (l, a * n_Q(l) + b)
/// pairs node a of P with node b of Q, and carries an edge labelled
/// alpha*beta x_t wherever P has alpha x_t and Q has beta x_t on the matching
/// edges.
template <class S>
Abp<S> hadamard_homogeneous(const Abp<S>& p, const Abp<S>& q) {
  if (p.n_vars != q.n_vars) throw InputError("hadamard: arity mismatch");
  if (p.depth() != q.depth()) throw InputError("hadamard_homogeneous needs programs of equal depth");
  if (!is_normalized(p) || !is_normalized(q)) throw InputError("hadamard_homogeneous needs normalized programs");
  Abp<S> r{p.n_vars, {}, {}};
  for (std::size_t l = 0; l < p.layers.size(); ++l) r.layers.push_back(p.layers[l] * q.layers[l]);
  // Q's edges bucketed by (layer, variable).
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<const AbpEdge<S>*>> by_var;
  for (const auto& e : q.edges) {
    if (e.label.coeffs.empty()) continue;
    by_var[{e.from.layer, e.label.coeffs.begin()->first}].push_back(&e);
  }
  for (const auto& ep : p.edges) {
    if (ep.label.coeffs.empty()) continue;
    const auto& [t, alpha] = *ep.label.coeffs.begin();
    auto it = by_var.find({ep.from.layer, t});
    if (it == by_var.end()) continue;
    const auto l = ep.from.layer;
    for (const auto* eq : it->second) {
      const S beta = eq->label.coeffs.begin()->second;
      const NodeRef from{l, static_cast<std::uint32_t>(ep.from.index * q.layers[l] + eq->from.index)};
      const NodeRef to{l + 1, static_cast<std::uint32_t>(ep.to.index * q.layers[l + 1] + eq->to.index)};
      r.edges.push_back({from, to, LinearForm<S>::of_variable(t, alpha * beta)});
    }
  }
  return r;
}

/// An ABP for f o g where P computes f and Q computes g.
template <class S>
Abp<S> hadamard_abp(const Abp<S>& p, const Abp<S>& q, HadamardAbpReport* report = nullptr, const Caps& caps = {}) {
  p.check();
  q.check();
  if (p.n_vars != q.n_vars) throw InputError("hadamard: arity mismatch");
  const auto pp = homogeneous_parts(p, caps);
  const auto qp = homogeneous_parts(q, caps);
  std::vector<Abp<S>> products;
  HadamardAbpReport rep;
  rep.nodes_p = p.node_count();
  rep.nodes_q = q.node_count();
  for (const auto& a : pp) {
    for (const auto& b : qp) {
      if (a.degree != b.degree) continue;
      if (a.degree == 0) {
        const S c = a.abp.edges.front().label.constant * b.abp.edges.front().label.constant;
        products.push_back(Abp<S>{p.n_vars, {1, 1}, {{{0, 0}, {1, 0}, LinearForm<S>::of_constant(c)}}});
        rep.degrees.push_back({0, a.abp.layers, b.abp.layers, {1, 1}});
        continue;
      }
      products.push_back(hadamard_homogeneous(normalize_edges(a.abp), normalize_edges(b.abp)));
      rep.degrees.push_back({a.degree, a.abp.layers, b.abp.layers, products.back().layers});
    }
  }
  Abp<S> r = products.empty() ? Abp<S>::zero(p.n_vars) : abp_sum<S>(products);
  rep.nodes_before_prune = r.node_count();
  r = prune(r);
  rep.nodes_after_prune = r.node_count();
  if (report) *report = std::move(rep);
  return r;
}

// ---------------------------------------------------------------------------
// Circuit x ABP

/// <g, l, (i, a), (i + l, b)>: the gate computing f_{g,l} o h_{(i,a),(i+l,b)},
/// with f_{g,l} the degree-l part of gate g and h the polynomial of the
/// sub-program between the two nodes.
struct ProductGateKey {
  std::size_t part = 0;  // degree of the homogeneous part of P
  std::uint32_t gate = 0;
  std::uint32_t l = 0;
  std::uint32_t i = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  auto operator<=>(const ProductGateKey&) const = default;
};

template <class S>
struct HadamardCircuitDetail {
  Circuit<S> circuit;
  /// Gate of `circuit` for every nonzero product gate.
  std::map<ProductGateKey, std::uint32_t> gates;
  /// The homogeneous parts of P used, normalized, keyed by degree.
  std::map<std::size_t, Abp<S>> parts;
};

/// The full construction, keeping every intermediate product gate addressable.
/// The circuit is not compacted, so keyed gates stay valid.
template <class S>
HadamardCircuitDetail<S> hadamard_circuit_abp_detail(const Circuit<S>& c, const Abp<S>& p, const Caps& caps = {}) {
  c.check();
  p.check();
  if (c.n_vars != p.n_vars) throw InputError("hadamard: arity mismatch");
  const auto deg = formal_degrees(c);
  check_degree(deg[c.output], caps, "circuit");
  HadamardCircuitDetail<S> out;
  Circuit<S>& r = out.circuit;
  r.n_vars = c.n_vars;
  std::vector<std::optional<std::uint32_t>> input_gate(c.n_vars);
  auto input = [&](std::uint32_t v) {
    if (!input_gate[v]) input_gate[v] = r.push(Gate<S>::input(v));
    return *input_gate[v];
  };
  auto sum = [&](std::optional<std::uint32_t> x, std::uint32_t y) -> std::uint32_t {
    return x ? r.push(Gate<S>::add(*x, y)) : y;
  };

  std::vector<std::uint32_t> outputs;
  for (const auto& part : homogeneous_parts(p, caps)) {
    const std::size_t e = part.degree;
    // Degree 0 is the constant c0: a single-node program whose only
    // sub-program polynomial is 1, scaled at the end.
    const Abp<S> h = e == 0 ? Abp<S>{p.n_vars, {1}, {}} : normalize_edges(part.abp);
    out.parts.emplace(e, h);
    std::vector<std::vector<Matrix<S>>> lin;
    if (e > 0) lin = coefficient_matrices(h);

    auto& table = out.gates;
    auto lookup = [&](std::uint32_t g, std::uint32_t l, std::uint32_t i, std::uint32_t a,
                      std::uint32_t b) -> std::optional<std::uint32_t> {
      auto it = table.find({e, g, l, i, a, b});
      if (it == table.end()) return std::nullopt;
      return it->second;
    };
    for (std::uint32_t g = 0; g < c.gates.size(); ++g) {
      const auto& gate = c.gates[g];
      const auto lmax = static_cast<std::uint32_t>(std::min<std::size_t>(deg[g], e));
      for (std::uint32_t l = 0; l <= lmax; ++l) {
        for (std::uint32_t i = 0; i + l <= e; ++i) {
          for (std::uint32_t a = 0; a < h.layers[i]; ++a) {
            for (std::uint32_t b = 0; b < h.layers[i + l]; ++b) {
              std::optional<std::uint32_t> id;
              switch (gate.op) {
                case GateOp::Input: {
                  if (l != 1) break;
                  const S alpha = lin[i][gate.var](a, b);
                  if (is_zero(alpha)) break;
                  const auto x = input(gate.var);
                  id = alpha == S(1) ? x : r.push(Gate<S>::mul(r.push(Gate<S>::constant(alpha)), x));
                  break;
                }
                case GateOp::Const:
                  if (l == 0 && a == b && !is_zero(gate.value)) id = r.push(Gate<S>::constant(gate.value));
                  break;
                case GateOp::Add: {
                  const auto x = lookup(gate.left, l, i, a, b);
                  const auto y = lookup(gate.right, l, i, a, b);
                  if (x && y) id = r.push(Gate<S>::add(*x, *y));
                  else id = x ? x : y;
                  break;
                }
                case GateOp::Mul: {
                  for (std::uint32_t j = 0; j <= l; ++j) {
                    for (std::uint32_t t = 0; t < h.layers[i + j]; ++t) {
                      const auto x = lookup(gate.left, j, i, a, t);
                      if (!x) continue;
                      const auto y = lookup(gate.right, l - j, i + j, t, b);
                      if (!y) continue;
                      id = sum(id, r.push(Gate<S>::mul(*x, *y)));
                    }
                  }
                  break;
                }
              }
              if (id) table.emplace(ProductGateKey{e, g, l, i, a, b}, *id);
            }
          }
        }
      }
    }
    auto top = lookup(c.output, static_cast<std::uint32_t>(e), 0, 0, 0);
    if (!top) continue;
    if (e == 0) {
      const S c0 = part.abp.edges.front().label.constant;
      if (!(c0 == S(1))) top = r.push(Gate<S>::mul(r.push(Gate<S>::constant(c0)), *top));
    }
    outputs.push_back(*top);
  }
  if (outputs.empty()) {
    r.output = r.push(Gate<S>::constant(S(0)));
  } else {
    std::optional<std::uint32_t> acc;
    for (auto g : outputs) acc = sum(acc, g);
    r.output = *acc;
  }
  return out;
}

/// A circuit for f o h where C computes f and P computes h.
template <class S>
Circuit<S> hadamard_circuit_abp(const Circuit<S>& c, const Abp<S>& p, const Caps& caps = {}) {
  return compact(hadamard_circuit_abp_detail(c, p, caps).circuit);
}

}  // namespace hadamard
