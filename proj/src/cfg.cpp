#include "hadamard/cfg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <tuple>

namespace hadamard {

Cfg::Cfg(std::vector<std::string> nonterminals, std::size_t n_terminals, std::uint32_t start)
    : nonterminals_(std::move(nonterminals)), n_terminals_(n_terminals), start_(start) {}

std::uint32_t Cfg::add_nonterminal(std::string name) {
  nonterminals_.push_back(std::move(name));
  return static_cast<std::uint32_t>(nonterminals_.size() - 1);
}

void Cfg::add(std::uint32_t lhs, std::vector<Symbol> rhs) { productions_.insert({lhs, std::move(rhs)}); }

std::optional<std::string> Cfg::validate() const {
  if (nonterminals_.empty()) return "grammar has no nonterminals";
  if (start_ >= nonterminals_.size()) return "start symbol out of range";
  {
    std::set<std::string> names(nonterminals_.begin(), nonterminals_.end());
    if (names.size() != nonterminals_.size()) return "duplicate nonterminal name";
  }
  for (const auto& p : productions_) {
    const std::string where = "production for " + (p.lhs < nonterminals_.size() ? nonterminals_[p.lhs] : "?");
    if (p.lhs >= nonterminals_.size()) return "production with undefined left-hand side";
    if (p.rhs.size() > 2) return where + " has a right-hand side longer than 2";
    for (const auto& s : p.rhs) {
      if (s.terminal && s.id >= n_terminals_) return where + " uses an undefined terminal";
      if (!s.terminal && s.id >= nonterminals_.size()) return where + " uses an undefined nonterminal";
    }
  }
  // Cycle detection by colouring.
  std::vector<std::vector<std::uint32_t>> deps(nonterminals_.size());
  for (const auto& p : productions_) {
    for (const auto& s : p.rhs) {
      if (!s.terminal) deps[p.lhs].push_back(s.id);
    }
  }
  std::vector<int> colour(nonterminals_.size(), 0);
  std::optional<std::string> cycle;
  std::function<bool(std::uint32_t)> visit = [&](std::uint32_t a) {
    colour[a] = 1;
    for (auto b : deps[a]) {
      if (colour[b] == 1) {
        cycle = "dependency cycle through " + nonterminals_[b];
        return false;
      }
      if (colour[b] == 0 && !visit(b)) return false;
    }
    colour[a] = 2;
    return true;
  };
  for (std::uint32_t a = 0; a < nonterminals_.size(); ++a) {
    if (colour[a] == 0 && !visit(a)) return cycle;
  }
  return std::nullopt;
}

void Cfg::check() const {
  if (auto err = validate()) throw InputError("invalid grammar: " + *err);
}

std::vector<std::uint32_t> Cfg::topological_order() const {
  check();
  std::vector<std::vector<std::uint32_t>> deps(nonterminals_.size());
  for (const auto& p : productions_) {
    for (const auto& s : p.rhs) {
      if (!s.terminal) deps[p.lhs].push_back(s.id);
    }
  }
  std::vector<char> done(nonterminals_.size(), 0);
  std::vector<std::uint32_t> order;
  std::function<void(std::uint32_t)> visit = [&](std::uint32_t a) {
    done[a] = 1;
    for (auto b : deps[a]) {
      if (!done[b]) visit(b);
    }
    order.push_back(a);
  };
  for (std::uint32_t a = 0; a < nonterminals_.size(); ++a) {
    if (!done[a]) visit(a);
  }
  return order;
}

std::size_t Cfg::size() const {
  std::size_t s = nonterminals_.size() + n_terminals_;
  for (const auto& p : productions_) s += 1 + p.rhs.size();
  return s;
}

Cfg strip_useless(const Cfg& g) {
  g.check();
  const std::size_t n = g.nonterminals().size();
  std::vector<char> productive(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (productive[p.lhs]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) { return s.terminal || productive[s.id]; })) {
        productive[p.lhs] = 1;
        changed = true;
      }
    }
  }
  std::vector<char> reachable(n, 0);
  reachable[g.start()] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (!reachable[p.lhs] || !productive[p.lhs]) continue;
      const bool usable =
          std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Symbol& s) { return s.terminal || productive[s.id]; });
      if (!usable) continue;
      for (const auto& s : p.rhs) {
        if (!s.terminal && !reachable[s.id]) {
          reachable[s.id] = 1;
          changed = true;
        }
      }
    }
  }
  std::vector<std::uint32_t> renum(n, UINT32_MAX);
  Cfg out({}, g.n_terminals(), 0);
  for (std::uint32_t a = 0; a < n; ++a) {
    if (a == g.start() || (productive[a] && reachable[a])) renum[a] = out.add_nonterminal(g.nonterminals()[a]);
  }
  out.set_start(renum[g.start()]);
  for (const auto& p : g.productions()) {
    if (renum[p.lhs] == UINT32_MAX || !productive[p.lhs]) continue;
    std::vector<Symbol> rhs;
    bool ok = true;
    for (const auto& s : p.rhs) {
      if (s.terminal) {
        rhs.push_back(s);
      } else if (renum[s.id] != UINT32_MAX && productive[s.id]) {
        rhs.push_back(Symbol::nt(renum[s.id]));
      } else {
        ok = false;
      }
    }
    if (ok) out.add(renum[p.lhs], std::move(rhs));
  }
  return out;
}

WordSet language(const Cfg& g, std::size_t max_len, const Caps& caps) {
  check_degree(max_len, caps, "language enumeration");
  std::vector<WordSet> lang(g.nonterminals().size());
  for (auto a : g.topological_order()) {
    for (const auto& p : g.productions()) {
      if (p.lhs != a) continue;
      // Concatenate symbol languages left to right.
      WordSet acc{Word{}};
      for (const auto& s : p.rhs) {
        WordSet next;
        if (s.terminal) {
          for (const auto& w : acc) {
            if (w.size() + 1 > max_len) continue;
            Word x = w;
            x.push_back(s.id);
            next.insert(std::move(x));
          }
        } else {
          for (const auto& w : acc) {
            for (const auto& v : lang[s.id]) {
              if (w.size() + v.size() > max_len) break;  // graded order: longer words follow
              Word x = w;
              x.insert(x.end(), v.begin(), v.end());
              next.insert(std::move(x));
            }
            check_terms(next.size(), caps, "language enumeration");
          }
        }
        acc = std::move(next);
      }
      lang[a].insert(acc.begin(), acc.end());
      check_terms(lang[a].size(), caps, "language enumeration");
    }
  }
  return lang[g.start()];
}

Integer count_derivations(const Cfg& g, const Word& word) {
  g.check();
  const std::size_t n = g.nonterminals().size();
  const std::size_t len = word.size();
  std::vector<std::vector<const Production*>> by_lhs(n);
  for (const auto& p : g.productions()) by_lhs[p.lhs].push_back(&p);
  // memo[a][i][j]: derivation trees of word[i, j) from nonterminal a
  std::vector<std::vector<std::vector<std::optional<Integer>>>> memo(
      n, std::vector<std::vector<std::optional<Integer>>>(len + 1, std::vector<std::optional<Integer>>(len + 1)));
  std::function<Integer(const Symbol&, std::size_t, std::size_t)> count = [&](const Symbol& s, std::size_t i,
                                                                               std::size_t j) -> Integer {
    if (s.terminal) return Integer(j == i + 1 && word[i] == s.id ? 1 : 0);
    auto& slot = memo[s.id][i][j];
    if (slot) return *slot;
    Integer total = 0;
    for (const auto* p : by_lhs[s.id]) {
      switch (p->rhs.size()) {
        case 0: total += i == j ? 1 : 0; break;
        case 1: total += count(p->rhs[0], i, j); break;
        default:
          for (std::size_t k = i; k <= j; ++k) {
            const Integer left = count(p->rhs[0], i, k);
            if (left == 0) continue;
            total += left * count(p->rhs[1], k, j);
          }
      }
    }
    slot = total;
    return total;
  };
  return count(Symbol::nt(g.start()), 0, len);
}

Cfg circuit_to_cfg(const Circuit<Rational>& c) {
  c.check();
  const auto z = propagate_zeros(c);
  if (!z) return Cfg({"S"}, c.n_vars, 0);
  if (!is_monotone(*z)) throw InputError("circuit_to_cfg needs a monotone circuit");
  Cfg g({}, z->n_vars, 0);
  for (std::size_t k = 0; k < z->gates.size(); ++k) g.add_nonterminal("A" + std::to_string(k));
  for (std::uint32_t k = 0; k < z->gates.size(); ++k) {
    const auto& gate = z->gates[k];
    switch (gate.op) {
      case GateOp::Input: g.add(k, {Symbol::t(gate.var)}); break;
      case GateOp::Const: g.add(k, {}); break;
      case GateOp::Add:
        g.add(k, {Symbol::nt(gate.left)});
        g.add(k, {Symbol::nt(gate.right)});
        break;
      case GateOp::Mul: g.add(k, {Symbol::nt(gate.left), Symbol::nt(gate.right)}); break;
    }
  }
  g.set_start(z->output);
  return g;
}

Circuit<Rational> cfg_to_circuit(const Cfg& g) {
  g.check();
  Circuit<Rational> c;
  c.n_vars = g.n_terminals();
  std::vector<std::optional<std::uint32_t>> gate_of(g.nonterminals().size());
  std::map<std::uint32_t, std::uint32_t> input_of;
  std::optional<std::uint32_t> one;
  auto symbol_gate = [&](const Symbol& s) -> std::optional<std::uint32_t> {
    if (!s.terminal) return gate_of[s.id];
    auto it = input_of.find(s.id);
    if (it != input_of.end()) return it->second;
    return input_of[s.id] = c.push(Gate<Rational>::input(s.id));
  };
  for (auto a : g.topological_order()) {
    std::optional<std::uint32_t> acc;
    for (const auto& p : g.productions()) {
      if (p.lhs != a) continue;
      std::optional<std::uint32_t> term;
      if (p.rhs.empty()) {
        if (!one) one = c.push(Gate<Rational>::constant(Rational(1)));
        term = one;
      } else if (p.rhs.size() == 1) {
        term = symbol_gate(p.rhs[0]);
      } else {
        const auto x = symbol_gate(p.rhs[0]);
        const auto y = symbol_gate(p.rhs[1]);
        if (x && y) term = c.push(Gate<Rational>::mul(*x, *y));
      }
      if (!term) continue;
      acc = acc ? c.push(Gate<Rational>::add(*acc, *term)) : *term;
    }
    gate_of[a] = acc;
  }
  if (!gate_of[g.start()]) {
    c.output = c.push(Gate<Rational>::constant(Rational(0)));
    return compact(c);
  }
  c.output = *gate_of[g.start()];
  return compact(c);
}

namespace {

/// Shared part of the two grammars. Returns (grammar, Z_n, P_n); the caller
/// adds the start production.
std::tuple<Cfg, std::uint32_t, std::uint32_t> palindrome_parts(std::size_t n) {
  if (n == 0) throw InputError("grammar size n must be at least 1");
  Cfg g({"S"}, n, 0);
  const auto x = g.add_nonterminal("X");
  for (std::uint32_t i = 0; i < n; ++i) g.add(x, {Symbol::t(i)});
  // Z_k: any word of length k
  std::uint32_t z = g.add_nonterminal("Z1");
  g.add(z, {Symbol::nt(x)});
  for (std::size_t k = 2; k <= n; ++k) {
    const auto zk = g.add_nonterminal("Z" + std::to_string(k));
    g.add(zk, {Symbol::nt(x), Symbol::nt(z)});
    z = zk;
  }
  // P_k: w w^r with |w| = k, as P_k -> x_i Q_{k,i}, Q_{k,i} -> P_{k-1} x_i
  std::uint32_t pal = g.add_nonterminal("P1");
  for (std::uint32_t i = 0; i < n; ++i) g.add(pal, {Symbol::t(i), Symbol::t(i)});
  for (std::size_t k = 2; k <= n; ++k) {
    const auto pk = g.add_nonterminal("P" + std::to_string(k));
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto q = g.add_nonterminal("Q" + std::to_string(k) + "_" + std::to_string(i));
      g.add(q, {Symbol::nt(pal), Symbol::t(i)});
      g.add(pk, {Symbol::t(i), Symbol::nt(q)});
    }
    pal = pk;
  }
  return {std::move(g), z, pal};
}

}  // namespace

Cfg build_l1_grammar(std::size_t n) {
  auto [g, z, pal] = palindrome_parts(n);
  g.add(0, {Symbol::nt(z), Symbol::nt(pal)});
  return g;
}

Cfg build_l2_grammar(std::size_t n) {
  auto [g, z, pal] = palindrome_parts(n);
  g.add(0, {Symbol::nt(pal), Symbol::nt(z)});
  return g;
}

WordSet intersect_bruteforce(const Cfg& g1, const Cfg& g2, std::size_t max_len, const Caps& caps) {
  const auto a = language(g1, max_len, caps);
  const auto b = language(g2, max_len, caps);
  WordSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()), GradedLex{});
  return out;
}

}  // namespace hadamard
