#pragma once

// Noncommutative arithmetic circuits with fan-in two. Gates are stored in
// topological order: every operand index is smaller than the gate's own.

#include "hadamard/caps.hpp"
#include "hadamard/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hadamard {

enum class GateOp { Input, Const, Add, Mul };

template <class S>
struct Gate {
  GateOp op = GateOp::Const;
  std::uint32_t var = 0;    // Input
  S value = S(0);           // Const
  std::uint32_t left = 0;   // Add, Mul
  std::uint32_t right = 0;  // Add, Mul; for Mul the right factor

  static Gate input(std::uint32_t v) { return Gate{GateOp::Input, v, S(0), 0, 0}; }
  static Gate constant(const S& c) { return Gate{GateOp::Const, 0, c, 0, 0}; }
  static Gate add(std::uint32_t l, std::uint32_t r) { return Gate{GateOp::Add, 0, S(0), l, r}; }
  static Gate mul(std::uint32_t l, std::uint32_t r) { return Gate{GateOp::Mul, 0, S(0), l, r}; }

  bool binary() const { return op == GateOp::Add || op == GateOp::Mul; }
  bool operator==(const Gate&) const = default;
};

template <class S>
struct Circuit {
  std::size_t n_vars = 0;
  std::vector<Gate<S>> gates;
  std::uint32_t output = 0;

  std::uint32_t push(Gate<S> g) {
    gates.push_back(std::move(g));
    return static_cast<std::uint32_t>(gates.size() - 1);
  }

  std::optional<std::string> validate() const {
    if (gates.empty()) return "circuit has no gates";
    if (output >= gates.size()) return "output gate " + std::to_string(output) + " does not exist";
    for (std::size_t g = 0; g < gates.size(); ++g) {
      const auto& gate = gates[g];
      const std::string where = "gate " + std::to_string(g);
      if (gate.op == GateOp::Input && gate.var >= n_vars) return where + " reads variable out of range";
      if (gate.binary() && (gate.left >= g || gate.right >= g)) {
        return where + (std::max(gate.left, gate.right) >= gates.size() ? " has a dangling operand"
                                                                         : " refers forward (cycle or bad order)");
      }
    }
    return std::nullopt;
  }

  void check() const {
    if (auto err = validate()) throw InputError("invalid circuit: " + *err);
  }

  bool operator==(const Circuit&) const = default;
};

/// Input 1, Const 0, Add max, Mul sum.
template <class S>
std::vector<std::size_t> formal_degrees(const Circuit<S>& c) {
  c.check();
  std::vector<std::size_t> deg(c.gates.size(), 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const auto& gate = c.gates[g];
    switch (gate.op) {
      case GateOp::Input: deg[g] = 1; break;
      case GateOp::Const: deg[g] = 0; break;
      case GateOp::Add: deg[g] = std::max(deg[gate.left], deg[gate.right]); break;
      case GateOp::Mul: deg[g] = deg[gate.left] + deg[gate.right]; break;
    }
  }
  return deg;
}

template <class S>
std::size_t formal_degree(const Circuit<S>& c) {
  return formal_degrees(c)[c.output];
}

template <class S>
S evaluate(const Circuit<S>& c, std::span<const S> point) {
  c.check();
  if (point.size() != c.n_vars) throw InputError("evaluation point has the wrong number of coordinates");
  std::vector<S> val(c.gates.size());
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const auto& gate = c.gates[g];
    switch (gate.op) {
      case GateOp::Input: val[g] = point[gate.var]; break;
      case GateOp::Const: val[g] = gate.value; break;
      case GateOp::Add: val[g] = val[gate.left] + val[gate.right]; break;
      case GateOp::Mul: val[g] = val[gate.left] * val[gate.right]; break;
    }
  }
  return val[c.output];
}

/// Gate-by-gate dense expansion. Only gates feeding the output are expanded.
template <class S>
std::vector<std::optional<NCPoly<S>>> expand_gates(const Circuit<S>& c, const Caps& caps = {}) {
  c.check();
  check_degree(formal_degree(c), caps, "circuit expansion");
  std::vector<char> needed(c.gates.size(), 0);
  needed[c.output] = 1;
  for (std::size_t g = c.gates.size(); g-- > 0;) {
    if (needed[g] && c.gates[g].binary()) needed[c.gates[g].left] = needed[c.gates[g].right] = 1;
  }
  std::vector<std::optional<NCPoly<S>>> f(c.gates.size());
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    if (!needed[g]) continue;
    const auto& gate = c.gates[g];
    switch (gate.op) {
      case GateOp::Input: f[g] = NCPoly<S>::variable(c.n_vars, gate.var); break;
      case GateOp::Const: f[g] = NCPoly<S>::constant(c.n_vars, gate.value); break;
      case GateOp::Add: f[g] = *f[gate.left] + *f[gate.right]; break;
      case GateOp::Mul: f[g] = NCPoly<S>::multiply(*f[gate.left], *f[gate.right], caps); break;
    }
    check_terms(f[g]->size(), caps, "circuit expansion");
  }
  return f;
}

template <class S>
NCPoly<S> expand(const Circuit<S>& c, const Caps& caps = {}) {
  return *expand_gates(c, caps)[c.output];
}

/// True iff every constant is a positive rational.
inline bool is_monotone(const Circuit<Rational>& c) {
  c.check();
  return std::all_of(c.gates.begin(), c.gates.end(),
                     [](const auto& g) { return g.op != GateOp::Const || g.value > 0; });
}

struct CircuitSize {
  std::size_t gates = 0;
  std::size_t edges = 0;
};

template <class S>
CircuitSize size(const Circuit<S>& c) {
  CircuitSize s{c.gates.size(), 0};
  for (const auto& g : c.gates) s.edges += g.binary() ? 2 : 0;
  return s;
}

/// Drops gates that do not feed the output.
template <class S>
Circuit<S> compact(const Circuit<S>& c) {
  c.check();
  std::vector<char> needed(c.gates.size(), 0);
  needed[c.output] = 1;
  for (std::size_t g = c.gates.size(); g-- > 0;) {
    if (needed[g] && c.gates[g].binary()) needed[c.gates[g].left] = needed[c.gates[g].right] = 1;
  }
  Circuit<S> out{c.n_vars, {}, 0};
  std::vector<std::uint32_t> renum(c.gates.size(), 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    if (!needed[g]) continue;
    Gate<S> gate = c.gates[g];
    if (gate.binary()) {
      gate.left = renum[gate.left];
      gate.right = renum[gate.right];
    }
    renum[g] = out.push(gate);
  }
  out.output = renum[c.output];
  return out;
}

/// Removes Const(0) by propagation: 0 + h = h, 0 * h = 0. Returns nullopt when
/// the output itself simplifies to 0. Unreachable gates are dropped.
template <class S>
std::optional<Circuit<S>> propagate_zeros(const Circuit<S>& c) {
  c.check();
  Circuit<S> out{c.n_vars, {}, 0};
  // Which gates are zero, and which collapse onto an operand.
  std::vector<std::int64_t> rep(c.gates.size(), -1);  // -1 zero, else representative gate
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const auto& gate = c.gates[g];
    switch (gate.op) {
      case GateOp::Input: rep[g] = static_cast<std::int64_t>(g); break;
      case GateOp::Const: rep[g] = is_zero(gate.value) ? -1 : static_cast<std::int64_t>(g); break;
      case GateOp::Add:
        if (rep[gate.left] < 0) rep[g] = rep[gate.right];
        else if (rep[gate.right] < 0) rep[g] = rep[gate.left];
        else rep[g] = static_cast<std::int64_t>(g);
        break;
      case GateOp::Mul:
        rep[g] = (rep[gate.left] < 0 || rep[gate.right] < 0) ? -1 : static_cast<std::int64_t>(g);
        break;
    }
  }
  if (rep[c.output] < 0) return std::nullopt;
  std::vector<char> needed(c.gates.size(), 0);
  needed[static_cast<std::size_t>(rep[c.output])] = 1;
  for (std::size_t g = c.gates.size(); g-- > 0;) {
    if (!needed[g] || rep[g] != static_cast<std::int64_t>(g) || !c.gates[g].binary()) continue;
    needed[static_cast<std::size_t>(rep[c.gates[g].left])] = 1;
    needed[static_cast<std::size_t>(rep[c.gates[g].right])] = 1;
  }
  std::vector<std::uint32_t> renum(c.gates.size(), 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    if (!needed[g]) continue;
    Gate<S> gate = c.gates[g];
    if (gate.binary()) {
      gate.left = renum[static_cast<std::size_t>(rep[gate.left])];
      gate.right = renum[static_cast<std::size_t>(rep[gate.right])];
    }
    renum[g] = out.push(gate);
  }
  out.output = renum[static_cast<std::size_t>(rep[c.output])];
  return out;
}

}  // namespace hadamard
