#include "cli.hpp"

#include "hadamard/cfg.hpp"
#include "hadamard/io.hpp"
#include "hadamard/lblab.hpp"
#include "hadamard/pit.hpp"
#include "hadamard/products.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

namespace hadamard::cli {
namespace {

struct Globals {
  std::string field;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t max_terms = Caps{}.max_terms;
  unsigned max_degree = Caps{}.max_degree;
  bool binarize = false;
  std::string output;

  Caps caps() const { return Caps{max_terms, max_degree}; }
  std::optional<FieldSpec> field_spec() const {
    if (field.empty()) return std::nullopt;
    return parse_field_flag(field);
  }
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

template <class Field>
using ElementOf = typename std::decay_t<Field>::Element;

/// Calls fn(field) with the field of `j` (or --field).
template <class Fn>
Json with_field(const Json& j, const Globals& g, Fn&& fn) {
  return visit_field(resolve_field(j, g.field_spec()), [&](const auto& field) -> Json { return fn(field); });
}

Json report_json(const HadamardAbpReport& r) {
  Json degrees = Json::array();
  for (const auto& d : r.degrees) {
    degrees.push_back(Json{{"degree", d.degree}, {"p_layers", d.p_layers}, {"q_layers", d.q_layers}, {"r_layers", d.r_layers}});
  }
  return Json{{"nodes_p", r.nodes_p},
              {"nodes_q", r.nodes_q},
              {"nodes_before_prune", r.nodes_before_prune},
              {"nodes_after_prune", r.nodes_after_prune},
              {"degrees", degrees}};
}

Json size_json(CircuitSize s) { return Json{{"gates", s.gates}, {"edges", s.edges}}; }

bool is_abp(const Json& j) { return j.contains("layers"); }
bool is_circuit(const Json& j) { return j.contains("gates"); }

CPoly<Rational> random_multilinear(std::size_t n, const std::vector<std::uint32_t>& vars, std::mt19937_64& rng,
                                   const Caps& caps) {
  if (vars.size() >= 63 || (std::uint64_t{1} << vars.size()) > caps.max_terms) {
    throw ResourceError("random product polynomial exceeds the term cap");
  }
  std::uniform_int_distribution<int> coeff(-2, 2);
  CPoly<Rational> f(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    CMonomial m(n, 0);
    for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = (mask >> i) & 1;
    f.add_term(std::move(m), Rational(coeff(rng)));
  }
  return f;
}

Json lab_params(const ExplicitParams& p) {
  return Json{{"t", p.t()}, {"p", p.p()}, {"n", p.n()}, {"field", to_json(p.field().spec())}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hadamard products of noncommutative polynomials: constructions and identity tests", "hadamard"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--field", g.field, "Field: q | fp:<p> | fpk:<p>:<k> (default: the input's own, else q)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--threads", g.threads, "Worker threads for randomized trials")->check(CLI::Range(1u, 1024u));
  app.add_option("--max-terms", g.max_terms, "Cap on materialized terms");
  app.add_option("--max-degree", g.max_degree, "Cap on expanded degree");
  app.add_flag("--binarize", g.binarize, "Accept circuit gates with fan-in above 2 and split them");
  app.add_option("-o,--output", g.output, "Write the result here instead of stdout");

  std::function<Json()> action;
  std::string in1, in2;

  // pit
  auto* pit = app.add_subcommand("pit", "Identity test for an ABP");
  pit->require_subcommand(1);
  std::uint64_t trials = 20;
  auto* pit_det = pit->add_subcommand("det", "Deterministic test over Q via P o P at the all-ones point");
  auto* pit_span = pit->add_subcommand("span", "Deterministic span-basis test over any field");
  auto* pit_rand = pit->add_subcommand("rand", "Randomized test over a finite field");
  auto* pit_brute = pit->add_subcommand("brute", "Expand and inspect (ABP or circuit)");
  for (auto* sub : {pit_det, pit_span, pit_rand, pit_brute}) sub->add_option("input", in1, "ABP JSON")->required();
  pit_rand->add_option("--trials", trials, "Number of trials")->check(CLI::PositiveNumber);
  pit_det->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      const FieldSpec spec = resolve_field(j, g.field_spec());
      if (spec.kind != FieldKind::Rational) throw InputError("pit det works over Q only; use pit span");
      return to_json(pit_rational(abp_from_json<Rational>(j, RationalField{}), g.caps()));
    };
  });
  pit_span->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        return to_json(pit_span_basis(abp_from_json<S>(j, field), g.caps()));
      });
    };
  });
  pit_rand->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) -> Json {
        using S = ElementOf<decltype(field)>;
        if constexpr (std::is_same_v<S, Rational>) {
          throw InputError("pit rand needs a finite field (--field fp:<p> or fpk:<p>:<k>)");
        } else {
          return to_json(pit_randomized(abp_from_json<S>(j, field), {trials, g.seed, g.threads}, g.caps()));
        }
      });
    };
  });
  pit_brute->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        if (is_circuit(j)) return to_json(pit_bruteforce(circuit_from_json<S>(j, field, g.binarize), g.caps()));
        return to_json(pit_bruteforce(abp_from_json<S>(j, field), g.caps()));
      });
    };
  });

  // hadamard
  auto* had = app.add_subcommand("hadamard", "Hadamard product constructions");
  had->require_subcommand(1);
  auto* had_abp = had->add_subcommand("abp", "ABP x ABP -> ABP");
  auto* had_circ = had->add_subcommand("circuit-abp", "circuit x ABP -> circuit");
  had_abp->add_option("P", in1, "ABP JSON")->required();
  had_abp->add_option("Q", in2, "ABP JSON")->required();
  had_circ->add_option("C", in1, "circuit JSON")->required();
  had_circ->add_option("P", in2, "ABP JSON")->required();
  had_abp->callback([&] {
    action = [&] {
      const Json jp = read_json(in1);
      const Json jq = read_json(in2);
      return with_field(jp, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        resolve_field(jq, field.spec());
        HadamardAbpReport report;
        const auto r = hadamard_abp(abp_from_json<S>(jp, field), abp_from_json<S>(jq, field), &report, g.caps());
        return Json{{"abp", to_json(r, field)}, {"report", report_json(report)}};
      });
    };
  });
  had_circ->callback([&] {
    action = [&] {
      const Json jc = read_json(in1);
      const Json jp = read_json(in2);
      return with_field(jc, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        resolve_field(jp, field.spec());
        const auto c = circuit_from_json<S>(jc, field, g.binarize);
        const auto p = abp_from_json<S>(jp, field);
        const auto r = hadamard_circuit_abp(c, p, g.caps());
        return Json{{"circuit", to_json(r, field)},
                    {"size", size_json(size(r))},
                    {"input_size", Json{{"circuit", size_json(size(c))}, {"abp_nodes", p.node_count()}}}};
      });
    };
  });

  // nisan
  auto* nisan = app.add_subcommand("nisan", "Ranks of the Nisan matrices of a homogeneous polynomial");
  std::optional<std::size_t> degree_opt;
  nisan->add_option("input", in1, "polynomial, ABP or circuit JSON")->required();
  nisan->add_option("--degree", degree_opt, "Degree to assume for the zero polynomial");
  nisan->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        NCPoly<S> f = is_abp(j)       ? expand(abp_from_json<S>(j, field), g.caps())
                      : is_circuit(j) ? expand(circuit_from_json<S>(j, field, g.binarize), g.caps())
                                      : ncpoly_from_json<S>(j, field);
        const std::size_t d = f.is_zero() ? degree_opt.value_or(0) : static_cast<std::size_t>(f.degree());
        const auto ranks = nisan_ranks(f, d, g.caps());
        return Json{{"degree", d}, {"ranks", ranks}, {"total", std::accumulate(ranks.begin(), ranks.end(), std::size_t{0})}};
      });
    };
  });

  // expand
  auto* exp = app.add_subcommand("expand", "Dense expansion of an ABP or circuit");
  exp->add_option("input", in1, "ABP or circuit JSON")->required();
  exp->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        if (is_circuit(j)) return to_json(expand(circuit_from_json<S>(j, field, g.binarize), g.caps()), field);
        return to_json(expand(abp_from_json<S>(j, field), g.caps()), field);
      });
    };
  });

  // cfg
  auto* cfg = app.add_subcommand("cfg", "Acyclic grammars and monotone circuits");
  cfg->require_subcommand(1);
  std::vector<std::uint32_t> word;
  std::size_t max_len = 0;
  std::size_t gram_n = 1;
  auto* cfg_to = cfg->add_subcommand("to-circuit", "Grammar -> monotone circuit");
  auto* cfg_from = cfg->add_subcommand("from-circuit", "Monotone circuit -> grammar");
  auto* cfg_count = cfg->add_subcommand("count", "Derivation trees of one word");
  auto* cfg_int = cfg->add_subcommand("intersect", "Common words up to a length");
  auto* cfg_l1 = cfg->add_subcommand("gen-l1", "Grammar for {z w w^r : |z| = |w| = n}");
  auto* cfg_l2 = cfg->add_subcommand("gen-l2", "Grammar for {w w^r z : |z| = |w| = n}");
  cfg_to->add_option("grammar", in1)->required();
  cfg_from->add_option("circuit", in1)->required();
  cfg_count->add_option("grammar", in1)->required();
  cfg_count->add_option("--word", word, "Comma-separated variable indices")->delimiter(',');
  cfg_int->add_option("G1", in1)->required();
  cfg_int->add_option("G2", in2)->required();
  cfg_int->add_option("--max-len", max_len, "Longest word considered")->required();
  for (auto* sub : {cfg_l1, cfg_l2}) sub->add_option("--n", gram_n, "Word half-length and alphabet size")->required();
  cfg_to->callback([&] {
    action = [&] { return to_json(cfg_to_circuit(cfg_from_json(read_json(in1))), RationalField{}); };
  });
  cfg_from->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      if (resolve_field(j, g.field_spec()).kind != FieldKind::Rational) throw InputError("monotone circuits live over Q");
      return to_json(circuit_to_cfg(circuit_from_json<Rational>(j, RationalField{}, g.binarize)));
    };
  });
  cfg_count->callback([&] {
    action = [&] {
      return Json{{"word", word}, {"count", to_string(count_derivations(cfg_from_json(read_json(in1)), word))}};
    };
  });
  cfg_int->callback([&] {
    action = [&] {
      const auto words = intersect_bruteforce(cfg_from_json(read_json(in1)), cfg_from_json(read_json(in2)), max_len, g.caps());
      return Json{{"max_len", max_len}, {"count", words.size()}, {"words", to_json(words)}};
    };
  });
  cfg_l1->callback([&] { action = [&] { return to_json(build_l1_grammar(gram_n)); }; });
  cfg_l2->callback([&] { action = [&] { return to_json(build_l2_grammar(gram_n)); }; });

  // reduce
  auto* red = app.add_subcommand("reduce", "Reductions to ABP identity testing");
  red->require_subcommand(1);
  auto* red_det = red->add_subcommand("det2abp", "Square matrix -> constant ABP computing its determinant");
  auto* red_reach = red->add_subcommand("reach2abp", "Digraph with s, t -> ABP nonzero iff t is reachable");
  red_det->add_option("matrix", in1)->required();
  red_reach->add_option("graph", in1)->required();
  red_det->callback([&] {
    action = [&] {
      const Json j = read_json(in1);
      return with_field(j, g, [&](const auto& field) {
        using S = ElementOf<decltype(field)>;
        return to_json(det_to_abp(matrix_from_json<S>(j, field)), field);
      });
    };
  });
  red_reach->callback([&] {
    action = [&] {
      const auto r = reach_from_json(read_json(in1));
      return to_json(reach_to_abp(r.graph, r.s, r.t), RationalField{});
    };
  });

  // lab
  auto* lab = app.add_subcommand("lab", "Experiments with the explicit polynomial F");
  lab->require_subcommand(1);
  std::size_t lab_t = 1;
  std::uint32_t lab_p = 2;
  std::size_t battery = 8;
  std::string eps_text = "1/3";
  std::size_t n_sets = 2, set_size = 2, samples = 4;
  std::size_t perm_n = 2;
  bool emit = false;
  auto* lab_f = lab->add_subcommand("build-f", "F, F' and their exact identities");
  auto* lab_corr = lab->add_subcommand("corr", "Correlation of F with random product polynomials");
  auto* lab_exp = lab->add_subcommand("expsum", "Exact character sums over random sets");
  auto* lab_perm = lab->add_subcommand("perm", "The two formulas whose Hadamard product is the permanent");
  for (auto* sub : {lab_f, lab_corr}) {
    sub->add_option("--t", lab_t, "Number of blocks")->required();
    sub->add_option("--p", lab_p, "Block size (prime)")->required();
  }
  lab_f->add_flag("--emit", emit, "Include F and F' in the report");
  lab_corr->add_option("--battery", battery, "Number of random product polynomials");
  lab_corr->add_option("--eps", eps_text, "Balance parameter eps");
  lab_exp->add_option("--p", lab_p, "Field F_2^p")->required();
  lab_exp->add_option("--sets", n_sets, "Number of sets s");
  lab_exp->add_option("--set-size", set_size, "Elements per set");
  lab_exp->add_option("--samples", samples, "Number of random (sets, z) draws");
  lab_perm->add_option("--n", perm_n, "Matrix size")->required();
  lab_f->callback([&] {
    action = [&] {
      const ExplicitParams params(lab_t, lab_p);
      const auto f = build_f(params, g.caps());
      const auto fp = build_f_prime(params, g.caps());
      bool pm1 = true, zero_one = true;
      for (const auto& [m, c] : f.terms()) pm1 = pm1 && (c == 1 || c == -1);
      for (const auto& [m, c] : fp.terms()) zero_one = zero_one && (c == 0 || c == 1);
      Json j{{"params", lab_params(params)},
             {"sum_coeffs", to_string(sum_coeffs(f))},
             {"sum_coeffs_f_prime", to_string(sum_coeffs(fp))},
             {"norm_sq", to_string(norm_sq(f))},
             {"corr_f_f_prime", to_string(corr(f, fp))},
             {"coefficients_pm1", pm1},
             {"f_prime_coefficients_01", zero_one}};
      if (emit) {
        j["F"] = to_json(f, RationalField{});
        j["F_prime"] = to_json(fp, RationalField{});
      }
      return j;
    };
  });
  lab_corr->callback([&] {
    action = [&] {
      const ExplicitParams params(lab_t, lab_p);
      const Rational eps = parse_rational(eps_text);
      const std::size_t n = params.n();
      const Rational need_q = eps * Rational(n);
      Integer need = mp::numerator(need_q) / mp::denominator(need_q);
      if (Rational(need) < need_q) need += 1;
      const auto lo = need.convert_to<std::size_t>();
      if (2 * lo > n) throw InputError("eps too large: no split with |A|, |B| >= ceil(eps*n)");
      Json rows = Json::array();
      for (std::size_t b = 0; b < battery; ++b) {
        auto rng = trial_rng(g.seed, b);
        std::vector<std::uint32_t> vars(n);
        std::iota(vars.begin(), vars.end(), 0);
        std::shuffle(vars.begin(), vars.end(), rng);
        const std::size_t size_a = std::uniform_int_distribution<std::size_t>(lo, n - lo)(rng);
        std::vector<std::uint32_t> a(vars.begin(), vars.begin() + static_cast<std::ptrdiff_t>(size_a));
        std::vector<std::uint32_t> bb(vars.begin() + static_cast<std::ptrdiff_t>(size_a), vars.end());
        std::sort(a.begin(), a.end());
        std::sort(bb.begin(), bb.end());
        const auto pp = make_product_poly(a, bb, random_multilinear(n, a, rng, g.caps()),
                                          random_multilinear(n, bb, rng, g.caps()), eps);
        const auto c = corr_f_vs(pp.materialize(g.caps()), params, g.caps());
        rows.push_back(Json{{"a", a}, {"b", bb}, {"corr", to_string(c.corr)}, {"ratio_sq", to_string(c.ratio_sq)}});
      }
      const auto f = build_f(params, g.caps());
      const auto self = corr_f_vs(build_f_prime(params, g.caps()), params, g.caps());
      return Json{{"params", lab_params(params)},
                  {"eps", to_string(eps)},
                  {"seed", g.seed},
                  {"norm_sq_f", to_string(norm_sq(f))},
                  {"corr_f_f_prime", to_string(self.corr)},
                  {"ratio_sq_f_prime", to_string(self.ratio_sq)},
                  {"battery", rows}};
    };
  });
  lab_exp->callback([&] {
    action = [&] {
      if (!is_prime(lab_p)) throw InputError("p must be prime");
      const ExtensionField& field = ExtensionField::get(2, lab_p);
      if (set_size == 0 || set_size > field.size()) throw InputError("--set-size must be in [1, 2^p]");
      Json rows = Json::array();
      for (std::size_t k = 0; k < samples; ++k) {
        auto rng = trial_rng(g.seed, k);
        std::uniform_int_distribution<std::uint64_t> pick(0, field.size() - 1);
        std::vector<std::vector<Fpk>> sets(n_sets);
        Json sets_json = Json::array();
        for (auto& s : sets) {
          std::set<std::uint64_t> chosen;
          while (chosen.size() < set_size) chosen.insert(pick(rng));
          Json sj = Json::array();
          for (auto i : chosen) {
            s.push_back(field.from_index(i));
            sj.push_back(scalar_to_json(s.back(), field));
          }
          sets_json.push_back(std::move(sj));
        }
        const Fpk z = field.from_index(std::uniform_int_distribution<std::uint64_t>(1, field.size() - 1)(rng));
        const Integer value = exp_sum(sets, z, g.caps());
        Integer trivial = 1;
        for (const auto& s : sets) trivial *= s.size();
        rows.push_back(Json{{"z", scalar_to_json(z, field)},
                            {"sets", sets_json},
                            {"value", to_string(value)},
                            {"trivial_bound", to_string(trivial)},
                            {"ratio", to_string(Rational(mp::abs(value)) / Rational(trivial))}});
      }
      return Json{{"p", lab_p}, {"field", to_json(field.spec())}, {"seed", g.seed}, {"samples", rows}};
    };
  });
  lab_perm->callback([&] {
    action = [&] {
      const auto [f, h] = permanent_hadamard(perm_n, 5, g.caps());
      return Json{{"n", perm_n},
                  {"f", to_json(f, RationalField{})},
                  {"g", to_json(h, RationalField{})},
                  {"product", to_json(hadamard(f, h), RationalField{})}};
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::Success&) {
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return dynamic_cast<const ResourceError*>(&e) ? 3 : 2;
  }
  if (!action) {
    err << "error: no command given\n";
    return 2;
  }
  try {
    const std::string text = action().dump(2) + "\n";
    if (g.output.empty()) {
      out << text;
    } else {
      std::ofstream file(g.output, std::ios::binary);
      if (!file) throw InputError("cannot write '" + g.output + "'");
      file << text;
    }
    return 0;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace hadamard::cli
