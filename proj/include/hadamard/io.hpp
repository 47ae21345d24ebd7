#pragma once

// JSON forms of every artifact. Output is canonical (fixed key order, sorted
// terms, bound field elements), so equal values serialize to equal bytes.

#include "hadamard/abp.hpp"
#include "hadamard/cfg.hpp"
#include "hadamard/circuit.hpp"
#include "hadamard/linalg.hpp"
#include "hadamard/pit.hpp"
#include "hadamard/poly.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <type_traits>

namespace hadamard {

using Json = nlohmann::ordered_json;

Json to_json(const FieldSpec& spec);
FieldSpec field_spec_from_json(const Json& j);

/// The field named in j["field"], else `fallback`; both present and different is an error.
FieldSpec resolve_field(const Json& j, const std::optional<FieldSpec>& fallback);

// ---------------------------------------------------------------------------
// Scalars: rationals and prime-field elements as decimal strings ("a" or
// "a/b"), extension-field elements as coefficient arrays, constant term first.

inline Rational bind(const Rational& x, const RationalField&) { return x; }
inline Fp bind(const Fp& x, const PrimeField& f) { return x.bound() ? x : f.element(x.value()); }
inline Fpk bind(const Fpk& x, const ExtensionField& f) { return x.bound() ? x : f.element(x.constant()); }

template <class S>
Json scalar_to_json(const S& x, const FieldOf<S>& field) {
  const S b = bind(x, field);
  if constexpr (std::is_same_v<S, Fpk>) {
    Json arr = Json::array();
    for (auto c : b.coeffs()) arr.push_back(c);
    return arr;
  } else {
    return to_string(b);
  }
}

namespace detail {

inline Rational json_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw InputError("expected a rational as a string or integer, got " + j.dump());
}

}  // namespace detail

template <class S>
S scalar_from_json(const Json& j, const FieldOf<S>& field) {
  if constexpr (std::is_same_v<S, Rational>) {
    return detail::json_rational(j);
  } else if constexpr (std::is_same_v<S, Fp>) {
    const Rational q = detail::json_rational(j);
    auto reduce = [&](const Integer& z) {
      const Integer p = field.characteristic();
      Integer r = z % p;
      if (r < 0) r += p;
      return field.element(r.convert_to<std::int64_t>());
    };
    const Fp den = reduce(mp::denominator(q));
    if (den.is_zero()) throw ArithmeticError("denominator vanishes in " + field.name());
    return reduce(mp::numerator(q)) / den;
  } else {
    if (j.is_array()) {
      std::vector<std::int64_t> cs;
      for (const auto& c : j) {
        if (!c.is_number_integer()) throw InputError("extension-field coefficients must be integers");
        cs.push_back(c.get<std::int64_t>());
      }
      return field.from_coeffs(cs);
    }
    const Rational q = detail::json_rational(j);
    if (mp::denominator(q) != 1) throw InputError("extension-field constants must be integers");
    const Integer p = field.characteristic();
    Integer r = mp::numerator(q) % p;
    if (r < 0) r += p;
    return field.element(r.convert_to<std::int64_t>());
  }
}

// ---------------------------------------------------------------------------
// Polynomials

template <class S>
Json to_json(const NCPoly<S>& f, const FieldOf<S>& field) {
  Json terms = Json::array();
  for (const auto& [w, c] : f.terms()) terms.push_back(Json{{"word", w}, {"coeff", scalar_to_json(c, field)}});
  return Json{{"nvars", f.n_vars()}, {"field", to_json(field.spec())}, {"terms", terms}};
}

template <class S>
NCPoly<S> ncpoly_from_json(const Json& j, const FieldOf<S>& field) {
  NCPoly<S> f(j.at("nvars").get<std::size_t>());
  for (const auto& t : j.at("terms")) f.add_term(t.at("word").get<Word>(), scalar_from_json<S>(t.at("coeff"), field));
  return f;
}

template <class S>
Json to_json(const CPoly<S>& f, const FieldOf<S>& field) {
  const bool ml = f.is_multilinear();
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json t;
    if (ml) t["support"] = support_of(m);
    else t["exponents"] = m;
    t["coeff"] = scalar_to_json(c, field);
    terms.push_back(std::move(t));
  }
  return Json{{"nvars", f.n_vars()}, {"field", to_json(field.spec())}, {"commutative", true}, {"terms", terms}};
}

template <class S>
CPoly<S> cpoly_from_json(const Json& j, const FieldOf<S>& field) {
  const auto n = j.at("nvars").get<std::size_t>();
  CPoly<S> f(n);
  for (const auto& t : j.at("terms")) {
    CMonomial m = t.contains("support")
                      ? monomial_from_support(n, t.at("support").get<std::vector<std::uint32_t>>())
                      : t.at("exponents").get<CMonomial>();
    f.add_term(std::move(m), scalar_from_json<S>(t.at("coeff"), field));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Matrices

template <class S>
Json to_json(const Matrix<S>& m, const FieldOf<S>& field) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back(scalar_to_json(m(r, c), field));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"field", to_json(field.spec())}, {"entries", entries}};
}

template <class S>
Matrix<S> matrix_from_json(const Json& j, const FieldOf<S>& field) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows * cols)) {
    throw InputError("matrix entries do not match rows*cols");
  }
  Matrix<S> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = scalar_from_json<S>(entries[static_cast<std::size_t>(r * cols + c)], field);
  }
  return m;
}

// ---------------------------------------------------------------------------
// ABPs

template <class S>
Json to_json(const Abp<S>& p, const FieldOf<S>& field) {
  Json edges = Json::array();
  for (const auto& e : p.edges) {
    Json coeffs = Json::object();
    for (const auto& [i, c] : e.label.coeffs) coeffs[std::to_string(i)] = scalar_to_json(c, field);
    edges.push_back(Json{{"from", {e.from.layer, e.from.index}},
                         {"to", {e.to.layer, e.to.index}},
                         {"label", {{"const", scalar_to_json(e.label.constant, field)}, {"coeffs", coeffs}}}});
  }
  return Json{{"nvars", p.n_vars}, {"layers", p.layers}, {"edges", edges}, {"field", to_json(field.spec())}};
}

template <class S>
Abp<S> abp_from_json(const Json& j, const FieldOf<S>& field) {
  Abp<S> p;
  p.n_vars = j.at("nvars").get<std::size_t>();
  p.layers = j.at("layers").get<std::vector<std::size_t>>();
  auto node = [](const Json& r) {
    if (!r.is_array() || r.size() != 2) throw InputError("node reference must be [layer, index]");
    return NodeRef{r[0].get<std::uint32_t>(), r[1].get<std::uint32_t>()};
  };
  for (const auto& e : j.at("edges")) {
    AbpEdge<S> edge{node(e.at("from")), node(e.at("to")), {}};
    const auto& label = e.at("label");
    if (label.contains("const")) edge.label.constant = scalar_from_json<S>(label.at("const"), field);
    else edge.label.constant = bind(S(0), field);
    if (label.contains("coeffs")) {
      for (const auto& [key, value] : label.at("coeffs").items()) {
        std::uint32_t var = 0;
        try {
          std::size_t used = 0;
          const unsigned long v = std::stoul(key, &used);
          if (used != key.size() || v > UINT32_MAX) throw std::invalid_argument(key);
          var = static_cast<std::uint32_t>(v);
        } catch (const std::logic_error&) {
          throw InputError("label variable key '" + key + "' is not an index");
        }
        edge.label.add(var, scalar_from_json<S>(value, field));
      }
    }
    p.edges.push_back(std::move(edge));
  }
  p.check();
  return p;
}

// ---------------------------------------------------------------------------
// Circuits

template <class S>
Json to_json(const Circuit<S>& c, const FieldOf<S>& field) {
  Json gates = Json::array();
  for (const auto& g : c.gates) {
    switch (g.op) {
      case GateOp::Input: gates.push_back(Json{{"op", "in"}, {"var", g.var}}); break;
      case GateOp::Const: gates.push_back(Json{{"op", "const"}, {"value", scalar_to_json(g.value, field)}}); break;
      case GateOp::Add: gates.push_back(Json{{"op", "add"}, {"l", g.left}, {"r", g.right}}); break;
      case GateOp::Mul: gates.push_back(Json{{"op", "mul"}, {"l", g.left}, {"r", g.right}}); break;
    }
  }
  return Json{{"nvars", c.n_vars}, {"gates", gates}, {"output", c.output}, {"field", to_json(field.spec())}};
}

/// Gates with more than two operands ("args": [...]) are rejected unless
/// `binarize` is set, in which case they become left-nested chains (order
/// kept for products).
template <class S>
Circuit<S> circuit_from_json(const Json& j, const FieldOf<S>& field, bool binarize = false) {
  Circuit<S> c;
  c.n_vars = j.at("nvars").get<std::size_t>();
  std::vector<std::uint32_t> renum;  // input gate index -> built gate
  auto operand = [&](const Json& v) {
    const auto k = v.get<std::size_t>();
    if (k >= renum.size()) throw InputError("gate operand " + std::to_string(k) + " is not an earlier gate");
    return renum[k];
  };
  for (const auto& g : j.at("gates")) {
    const auto op = g.at("op").get<std::string>();
    if (op == "in") {
      renum.push_back(c.push(Gate<S>::input(g.at("var").get<std::uint32_t>())));
    } else if (op == "const") {
      renum.push_back(c.push(Gate<S>::constant(scalar_from_json<S>(g.at("value"), field))));
    } else if (op == "add" || op == "mul") {
      std::vector<std::uint32_t> args;
      if (g.contains("args")) {
        for (const auto& a : g.at("args")) args.push_back(operand(a));
      } else {
        args = {operand(g.at("l")), operand(g.at("r"))};
      }
      if (args.size() < 2) throw InputError("add/mul gates need two operands");
      if (args.size() > 2 && !binarize) {
        throw InputError("gate with fan-in " + std::to_string(args.size()) + "; rerun with --binarize");
      }
      std::uint32_t acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) {
        acc = c.push(op == "add" ? Gate<S>::add(acc, args[i]) : Gate<S>::mul(acc, args[i]));
      }
      renum.push_back(acc);
    } else {
      throw InputError("unknown gate op '" + op + "'");
    }
  }
  const auto out = j.at("output").get<std::size_t>();
  if (out >= renum.size()) throw InputError("output gate does not exist");
  c.output = renum[out];
  c.check();
  return c;
}

// ---------------------------------------------------------------------------
// Everything else

Json to_json(const Cfg& g);
Cfg cfg_from_json(const Json& j);

Json to_json(const PitVerdict& v);

Json to_json(const WordSet& words);

struct ReachInstance {
  Digraph graph;
  std::uint32_t s = 0;
  std::uint32_t t = 0;
};
Json to_json(const ReachInstance& r);
ReachInstance reach_from_json(const Json& j);

/// Parses text, turning syntax errors into InputError.
Json parse_json(const std::string& text);

}  // namespace hadamard
