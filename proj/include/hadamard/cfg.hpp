#pragma once

// Acyclic context-free grammars over the terminals x_0..x_{n-1}, right-hand
// sides of length at most two, and their correspondence with monotone
// circuits.

#include "hadamard/caps.hpp"
#include "hadamard/circuit.hpp"
#include "hadamard/poly.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hadamard {

struct Symbol {
  bool terminal = false;
  std::uint32_t id = 0;  // variable index, or nonterminal index

  static Symbol t(std::uint32_t v) { return {true, v}; }
  static Symbol nt(std::uint32_t a) { return {false, a}; }
  auto operator<=>(const Symbol&) const = default;
};

struct Production {
  std::uint32_t lhs = 0;
  std::vector<Symbol> rhs;  // empty = epsilon
  auto operator<=>(const Production&) const = default;
};

class Cfg {
 public:
  Cfg() = default;
  Cfg(std::vector<std::string> nonterminals, std::size_t n_terminals, std::uint32_t start);

  const std::vector<std::string>& nonterminals() const { return nonterminals_; }
  std::size_t n_terminals() const { return n_terminals_; }
  std::uint32_t start() const { return start_; }
  const std::set<Production>& productions() const { return productions_; }

  std::uint32_t add_nonterminal(std::string name);
  /// Duplicate productions collapse.
  void add(std::uint32_t lhs, std::vector<Symbol> rhs);
  void set_start(std::uint32_t s) { start_ = s; }

  /// Right-hand sides of length <= 2, references in range, and an acyclic
  /// dependency graph (A -> B when B occurs in a right-hand side of A).
  std::optional<std::string> validate() const;
  void check() const;

  /// Nonterminals with every dependency listed before its dependents.
  std::vector<std::uint32_t> topological_order() const;

  /// |V| + |T| + sum over productions of (1 + |rhs|).
  std::size_t size() const;

  bool operator==(const Cfg&) const = default;

 private:
  std::vector<std::string> nonterminals_;
  std::size_t n_terminals_ = 0;
  std::uint32_t start_ = 0;
  std::set<Production> productions_;
};

/// Removes nonterminals that derive no terminal word or are unreachable from
/// the start symbol. The start symbol is always kept.
Cfg strip_useless(const Cfg& g);

/// Every word of length <= max_len derivable from the start symbol.
WordSet language(const Cfg& g, std::size_t max_len, const Caps& caps = {});

/// Number of derivation trees of `word` from the start symbol.
Integer count_derivations(const Cfg& g, const Word& word);

/// One nonterminal per gate: x_i for inputs, epsilon for constants, A_h A_k
/// for products and A_h | A_k for sums. Zero constants are propagated away
/// first; the circuit must then be monotone.
Cfg circuit_to_cfg(const Circuit<Rational>& c);

/// A monotone circuit whose coefficient on each word is its number of
/// derivation trees. A start symbol with empty language gives Const(0).
Circuit<Rational> cfg_to_circuit(const Cfg& g);

/// {z w w^r : |z| = |w| = n} over n letters.
Cfg build_l1_grammar(std::size_t n);
/// {w w^r z : |z| = |w| = n} over n letters.
Cfg build_l2_grammar(std::size_t n);

WordSet intersect_bruteforce(const Cfg& g1, const Cfg& g2, std::size_t max_len, const Caps& caps = {});

}  // namespace hadamard
