#include "test_support.hpp"

#include "cli.hpp"
#include "hadamard/io.hpp"
#include "hadamard/lblab.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hadamard;
using namespace hadamard::testing;

namespace {

using Q = Rational;

Cfg grammar(std::vector<std::string> names, std::size_t n_terminals, std::vector<Production> prods) {
  Cfg g(std::move(names), n_terminals, 0);
  for (auto& p : prods) g.add(p.lhs, std::move(p.rhs));
  return g;
}

const Symbol x = Symbol::t(0);
const Symbol y = Symbol::t(1);

CMonomial support(std::size_t n, std::vector<std::uint32_t> s) { return monomial_from_support(n, s); }

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = hadamard::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const Json& j) {
  const auto path = std::filesystem::temp_directory_path() / ("hadamard_unit_" + name);
  std::ofstream(path) << j.dump();
  return path.string();
}

}  // namespace

TEST(Cfg, Validation) {
  EXPECT_FALSE(grammar({"S", "A", "B"}, 2, {{0, {Symbol::nt(1), Symbol::nt(2)}}, {1, {x}}, {2, {y}}}).validate());
  EXPECT_TRUE(grammar({"S", "A", "B"}, 2, {{0, {Symbol::nt(1)}}, {1, {Symbol::nt(1), Symbol::nt(2)}}, {2, {y}}}).validate());
  EXPECT_TRUE(grammar({"S"}, 2, {{0, {x, y, x}}}).validate());
}

TEST(Cfg, Languages) {
  const auto xy = grammar({"S"}, 2, {{0, {x, y}}});
  EXPECT_EQ(language(xy, 4), (WordSet{{0, 1}}));
  EXPECT_EQ(language(build_l1_grammar(1), 6), (WordSet{{0, 0, 0}}));
  EXPECT_TRUE(language(grammar({"S"}, 1, {}), 4).empty());
}

TEST(Cfg, DerivationCounts) {
  const auto unique = grammar({"S", "A"}, 1, {{0, {Symbol::nt(1), Symbol::nt(1)}}, {1, {x}}});
  EXPECT_EQ(count_derivations(unique, {0, 0}), 1);
  const auto ambiguous = grammar({"S", "A", "B"}, 1,
                                 {{0, {Symbol::nt(1), Symbol::nt(2)}}, {0, {Symbol::nt(2), Symbol::nt(1)}}, {1, {x}}, {2, {x}}});
  EXPECT_EQ(count_derivations(ambiguous, {0, 0}), 2);
  EXPECT_EQ(count_derivations(ambiguous, {0}), 0);
  EXPECT_EQ(expand(cfg_to_circuit(ambiguous)).coefficient({0, 0}), 2);

  std::mt19937_64 rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = random_cfg(rng, 2, 4);
    for (const auto& [w, count] : oracle_tree_yields(g)) EXPECT_EQ(count_derivations(g, w), count);
  }
}

TEST(Cfg, CircuitCorrespondence) {
  Circuit<Q> c{2, {}, 0};
  const auto a = c.push(Gate<Q>::input(0));
  const auto b = c.push(Gate<Q>::input(1));
  const auto m = c.push(Gate<Q>::mul(a, b));
  c.output = m;
  EXPECT_EQ(language(circuit_to_cfg(c), 4), (WordSet{{0, 1}}));
  c.output = c.push(Gate<Q>::add(a, b));
  EXPECT_EQ(language(circuit_to_cfg(c), 4), (WordSet{{0}, {1}}));

  std::mt19937_64 rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = random_circuit<Q>(rng, 2, 7, 3, RationalField{});
    for (auto& gate : r.gates) {
      if (gate.op == GateOp::Const) gate.value = 1;
    }
    const auto back = cfg_to_circuit(circuit_to_cfg(r));
    EXPECT_EQ(mon_set(expand(back)), mon_set(expand(r)));
  }
}

TEST(Cfg, ThickGrammarsAreUnambiguous) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const auto& g : {build_l1_grammar(n), build_l2_grammar(n)}) {
      for (const auto& [w, count] : oracle_tree_yields(g)) EXPECT_EQ(count, 1);
    }
  }
  EXPECT_EQ(intersect_bruteforce(build_l1_grammar(2), build_l2_grammar(2), 6).size(), 4u);
  const auto xy = grammar({"S"}, 2, {{0, {x, y}}});
  const auto yx = grammar({"S"}, 2, {{0, {y, x}}});
  EXPECT_TRUE(intersect_bruteforce(xy, yx, 4).empty());
  const auto g = build_l1_grammar(2);
  EXPECT_EQ(intersect_bruteforce(g, g, 6), language(g, 6));
}

TEST(Lab, BlockEncodings) {
  const ExplicitParams params(2, 2);
  for (const auto& yi : y_vector(CMonomial(4, 0), params)) EXPECT_TRUE(yi.is_zero());
  const auto y = y_vector(support(4, {0}), params);
  EXPECT_EQ(y[0], params.field().element(1));
  EXPECT_TRUE(y[1].is_zero());
  for (const auto& yi : y_vector(CMonomial(4, 1), params)) {
    EXPECT_EQ(yi, encode_bits(params.field(), std::vector<std::uint8_t>{1, 1}));
  }
  EXPECT_EQ(f_coeff(CMonomial(4, 0), params), 1);
  EXPECT_EQ(f_coeff(support(4, {0, 1}), params), 1);
  EXPECT_THROW(ExplicitParams(1, 4), InputError);
}

TEST(Lab, SmallestCase) {
  const ExplicitParams params(1, 2);
  const auto f = build_f(params);
  std::vector<int> coeffs;
  for (const auto& [m, c] : f.terms()) coeffs.push_back(c.convert_to<int>());
  std::sort(coeffs.begin(), coeffs.end());
  EXPECT_EQ(coeffs, (std::vector<int>{-1, -1, 1, 1}));
  EXPECT_EQ(sum_coeffs(f), 0);
  EXPECT_EQ(norm_sq(f), 4);
  const auto fp = build_f_prime(params);
  EXPECT_EQ(sum_coeffs(fp), (Q(4) + sum_coeffs(f)) / 2);
  EXPECT_EQ(corr(f, f), 4);
  EXPECT_EQ(corr_f_vs(CPoly<Q>(2), params).corr, 0);
  EXPECT_EQ(corr_f_vs(fp, params).corr, 2);

  const ExplicitParams p22(2, 2);
  EXPECT_GE(sum_coeffs(build_f(p22)), 0);
}

TEST(Lab, ProductPolynomials) {
  const auto pp = make_product_poly({0}, {1}, CPoly<Q>::variable(2, 0), CPoly<Q>::variable(2, 1), Q(1, 3));
  EXPECT_EQ(pp.materialize(), CPoly<Q>::variable(2, 0) * CPoly<Q>::variable(2, 1));
  EXPECT_THROW(make_product_poly({0}, {1, 2}, CPoly<Q>::variable(3, 0), CPoly<Q>::variable(3, 1), Q(1, 2)),
               InputError);
  EXPECT_THROW(make_product_poly({0}, {0}, CPoly<Q>::variable(2, 0), CPoly<Q>::variable(2, 0), Q(1, 3)), InputError);
}

TEST(Lab, ExponentialSums) {
  const auto& f8 = ExtensionField::get(2, 3);
  const std::vector<std::vector<Fpk>> sets{{f8.element(1), f8.generator()}, {f8.generator(), f8.generator().pow(2)}};
  EXPECT_EQ(exp_sum(sets, f8.element(0)), 4);
  for (std::uint32_t p : {2u, 3u}) {
    const auto& field = ExtensionField::get(2, p);
    std::vector<Fpk> all;
    for (std::uint64_t i = 0; i < field.size(); ++i) all.push_back(field.from_index(i));
    for (std::uint64_t z = 1; z < field.size(); ++z) EXPECT_EQ(exp_sum({all}, field.from_index(z)), 0);
  }
  const Fpk a = f8.generator(), z = f8.generator().pow(5);
  EXPECT_EQ(exp_sum({{a}}, z), psi(z * a));
}

TEST(Lab, SuitableRestrictions) {
  const ExplicitParams params(2, 2);
  EXPECT_TRUE(is_suitable_restriction({0, 1, 2, 3}, {}, CMonomial(4, 0), params));
  EXPECT_FALSE(is_suitable_restriction({2, 3}, {0, 1}, CMonomial(4, 0), params));
  // Exhaustive: suitable tuples keep every heavy block's y_i nonzero.
  for (unsigned split = 0; split < 16; ++split) {
    std::vector<std::uint32_t> x1, x2;
    for (std::uint32_t v = 0; v < 4; ++v) ((split >> v) & 1 ? x2 : x1).push_back(v);
    for (unsigned m2 = 0; m2 < 16; ++m2) {
      if ((m2 & ~split) != 0) continue;
      CMonomial mono2(4, 0);
      for (std::uint32_t v = 0; v < 4; ++v) mono2[v] = (m2 >> v) & 1;
      if (!is_suitable_restriction(x1, x2, mono2, params)) continue;
      for (unsigned m1 = 0; m1 < 16; ++m1) {
        if ((m1 & split) != 0) continue;
        CMonomial m(4, 0);
        for (std::uint32_t v = 0; v < 4; ++v) m[v] = ((m1 | m2) >> v) & 1;
        const auto y = y_vector(m, params);
        for (std::size_t i = 0; i < 2; ++i) {
          const unsigned heavy = ((split >> (2 * i)) & 1) + ((split >> (2 * i + 1)) & 1);
          if (2 * heavy >= 2) EXPECT_FALSE(y[i].is_zero());
        }
      }
    }
  }
}

TEST(Lab, PermanentSmall) {
  const auto [f1, g1] = permanent_hadamard(1);
  EXPECT_EQ(f1, CPoly<Q>::variable(1, 0));
  EXPECT_EQ(hadamard::hadamard(f1, g1), CPoly<Q>::variable(1, 0));
  const auto [f3, g3] = permanent_hadamard(3);
  EXPECT_EQ(hadamard::hadamard(f3, g3), oracle_permanent(3));
  EXPECT_EQ(hadamard::hadamard(f3, g3).size(), 6u);
  EXPECT_THROW(permanent_hadamard(6), ResourceError);
}

TEST(Cli, ExitCodesAndVerdicts) {
  const Json cancel = Json::parse(R"({"nvars":1,"layers":[1,1],"edges":[
      {"from":[0,0],"to":[1,0],"label":{"coeffs":{"0":"1"}}},
      {"from":[0,0],"to":[1,0],"label":{"coeffs":{"0":"-1"}}}]})");
  const auto r = invoke({"pit", "det", write_temp("cancel.json", cancel)});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(Json::parse(r.out).at("is_zero").get<bool>());

  const Json identity = Json::parse(R"({"rows":2,"cols":2,"entries":["1","0","0","1"]})");
  const auto det = invoke({"reduce", "det2abp", write_temp("identity.json", identity)});
  ASSERT_EQ(det.code, 0);
  const auto pit = invoke({"pit", "det", write_temp("identity_abp.json", Json::parse(det.out))});
  EXPECT_FALSE(Json::parse(pit.out).at("is_zero").get<bool>());

  const auto perm = invoke({"lab", "perm", "--n", "2"});
  ASSERT_EQ(perm.code, 0);
  EXPECT_EQ(Json::parse(perm.out).at("product").at("terms").size(), 2u);

  EXPECT_EQ(invoke({"pit", "det", "/nonexistent/file.json"}).code, 2);
  EXPECT_EQ(invoke({"pit", "bogus"}).code, 2);
  EXPECT_EQ(invoke({"--unknown-flag", "pit", "det", "x"}).code, 2);
  EXPECT_EQ(invoke({"pit", "rand", write_temp("cancel_q.json", cancel)}).code, 2);
  EXPECT_EQ(invoke({"--max-terms", "4", "lab", "build-f", "--t", "1", "--p", "3"}).code, 3);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, EmittedArtifactsReingest) {
  const auto l1 = invoke({"cfg", "gen-l1", "--n", "2"});
  ASSERT_EQ(l1.code, 0);
  const auto reparsed = cfg_from_json(Json::parse(l1.out));
  EXPECT_EQ(to_json(reparsed).dump(2) + "\n", l1.out);
  const auto circuit = invoke({"cfg", "to-circuit", write_temp("l1.json", Json::parse(l1.out))});
  ASSERT_EQ(circuit.code, 0);
  const auto c = circuit_from_json<Q>(Json::parse(circuit.out), RationalField{});
  EXPECT_EQ(to_json(c, RationalField{}).dump(2) + "\n", circuit.out);
  const auto poly = invoke({"expand", write_temp("l1_circuit.json", Json::parse(circuit.out))});
  ASSERT_EQ(poly.code, 0);
  EXPECT_EQ(ncpoly_from_json<Q>(Json::parse(poly.out), RationalField{}), expand(c));
}
