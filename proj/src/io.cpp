#include "hadamard/io.hpp"

#include <map>

namespace hadamard {

Json to_json(const FieldSpec& spec) {
  switch (spec.kind) {
    case FieldKind::Prime:
      return Json{{"kind", "Fp"}, {"p", spec.p}};
    case FieldKind::Extension: {
      const FpPoly modulus = spec.modulus.empty() ? find_irreducible(spec.p, spec.k) : spec.modulus;
      return Json{{"kind", "Fpk"}, {"p", spec.p}, {"k", spec.k}, {"modulus", modulus}};
    }
    case FieldKind::Rational:
      break;
  }
  return Json{{"kind", "Q"}};
}

FieldSpec field_spec_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "Q") return FieldSpec{};
  if (kind == "Fp") {
    FieldSpec spec{FieldKind::Prime, j.at("p").get<std::uint32_t>(), 1, {}};
    PrimeField::get(spec.p);
    return spec;
  }
  if (kind == "Fpk") {
    FieldSpec spec{FieldKind::Extension, j.at("p").get<std::uint32_t>(), j.at("k").get<unsigned>(), {}};
    if (j.contains("modulus")) spec.modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
    // Normalize: the default modulus is stored explicitly so equal fields compare equal.
    const auto& f = spec.modulus.empty() ? ExtensionField::get(spec.p, spec.k)
                                         : ExtensionField::get(spec.p, spec.k, spec.modulus);
    spec.modulus = f.modulus();
    return spec;
  }
  throw InputError("unknown field kind '" + kind + "'");
}

FieldSpec resolve_field(const Json& j, const std::optional<FieldSpec>& fallback) {
  if (!j.contains("field")) return fallback.value_or(FieldSpec{});
  FieldSpec own = field_spec_from_json(j.at("field"));
  if (fallback) {
    FieldSpec other = *fallback;
    if (other.kind == FieldKind::Extension && other.modulus.empty()) {
      other.modulus = ExtensionField::get(other.p, other.k).modulus();
    }
    if (!(other == own)) throw InputError("--field disagrees with the field recorded in the input");
  }
  return own;
}

Json to_json(const Cfg& g) {
  Json prods = Json::array();
  for (const auto& p : g.productions()) {
    Json rhs = Json::array();
    for (const auto& s : p.rhs) {
      if (s.terminal) rhs.push_back(Json{{"t", s.id}});
      else rhs.push_back(g.nonterminals()[s.id]);
    }
    prods.push_back(Json{{"lhs", g.nonterminals()[p.lhs]}, {"rhs", rhs}});
  }
  return Json{{"nonterminals", g.nonterminals()},
              {"terminals", g.n_terminals()},
              {"start", g.nonterminals().at(g.start())},
              {"productions", prods}};
}

Cfg cfg_from_json(const Json& j) {
  const auto names = j.at("nonterminals").get<std::vector<std::string>>();
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < names.size(); ++i) {
    if (!index.emplace(names[i], i).second) throw InputError("duplicate nonterminal '" + names[i] + "'");
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw InputError("undeclared nonterminal '" + name + "'");
    return it->second;
  };
  Cfg g(names, j.at("terminals").get<std::size_t>(), lookup(j.at("start").get<std::string>()));
  for (const auto& p : j.at("productions")) {
    std::vector<Symbol> rhs;
    for (const auto& s : p.at("rhs")) {
      if (s.is_string()) rhs.push_back(Symbol::nt(lookup(s.get<std::string>())));
      else rhs.push_back(Symbol::t(s.at("t").get<std::uint32_t>()));
    }
    g.add(lookup(p.at("lhs").get<std::string>()), std::move(rhs));
  }
  g.check();
  return g;
}

Json to_json(const PitVerdict& v) {
  Json j{{"is_zero", v.is_zero}, {"method", v.method}};
  if (v.witness_word) j["witness"] = Json{{"word", *v.witness_word}};
  else if (v.witness_trial) j["witness"] = Json{{"trial", *v.witness_trial}};
  else j["witness"] = nullptr;
  j["trials"] = v.trials ? Json(*v.trials) : Json(nullptr);
  j["failure_bound"] = v.failure_bound ? Json(to_string(*v.failure_bound)) : Json(nullptr);
  if (v.nonzero_trials) j["nonzero_trials"] = *v.nonzero_trials;
  if (v.trial_failure_bound) j["trial_failure_bound"] = to_string(*v.trial_failure_bound);
  if (v.value) j["value"] = to_string(*v.value);
  return j;
}

Json to_json(const WordSet& words) {
  Json arr = Json::array();
  for (const auto& w : words) arr.push_back(w);
  return arr;
}

Json to_json(const ReachInstance& r) {
  Json edges = Json::array();
  for (const auto& [u, v] : r.graph.edges) edges.push_back({u, v});
  return Json{{"n", r.graph.n}, {"edges", edges}, {"s", r.s}, {"t", r.t}};
}

ReachInstance reach_from_json(const Json& j) {
  ReachInstance r;
  r.graph.n = j.at("n").get<std::size_t>();
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw InputError("graph edges must be [u, v] pairs");
    r.graph.edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
  }
  r.s = j.at("s").get<std::uint32_t>();
  r.t = j.at("t").get<std::uint32_t>();
  return r;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace hadamard
