#include "test_support.hpp"

#include "hadamard/io.hpp"
#include "hadamard/products.hpp"

#include <gtest/gtest.h>

using namespace hadamard;
using namespace hadamard::testing;

namespace {

using Q = Rational;

LinearForm<Q> var(std::uint32_t i, int c = 1) { return LinearForm<Q>::of_variable(i, Q(c)); }

/// One path reading the given labels.
Abp<Q> path(std::size_t n, std::vector<LinearForm<Q>> labels) {
  Abp<Q> p{n, std::vector<std::size_t>(labels.size() + 1, 1), {}};
  for (std::uint32_t l = 0; l < labels.size(); ++l) p.edges.push_back({{l, 0}, {l + 1, 0}, labels[l]});
  return p;
}

/// Two parallel depth-1 edges.
Abp<Q> two_edges(std::size_t n, LinearForm<Q> a, LinearForm<Q> b) {
  Abp<Q> p{n, {1, 1}, {}};
  p.edges.push_back({{0, 0}, {1, 0}, a});
  p.edges.push_back({{0, 0}, {1, 0}, b});
  return p;
}

NCPoly<Q> word(std::size_t n, Word w, int c = 1) { return NCPoly<Q>::monomial(n, std::move(w), Q(c)); }

}  // namespace

TEST(Abp, Validation) {
  EXPECT_FALSE(path(1, {var(0)}).validate());
  Abp<Q> skip{1, {1, 1, 1}, {{{0, 0}, {2, 0}, var(0)}}};
  EXPECT_TRUE(skip.validate());
  Abp<Q> wide_source{1, {2, 1}, {}};
  EXPECT_TRUE(wide_source.validate());
  Abp<Q> bad_var = path(1, {var(3)});
  EXPECT_TRUE(bad_var.validate());
}

TEST(Abp, Evaluation) {
  const std::vector<Q> point{2, 3};
  EXPECT_EQ(evaluate(path(2, {var(0), var(1)}), std::span<const Q>(point)), 6);
  EXPECT_EQ(evaluate(two_edges(2, var(0), var(0, -1)), std::span<const Q>(point)), 0);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_abp<Q>(rng, 3, 1 + rng() % 4, 3, RationalField{});
    std::vector<Q> x(3);
    for (auto& v : x) v = random_scalar<Q>(rng, RationalField{});
    EXPECT_EQ(evaluate(p, std::span<const Q>(x)), eval(oracle_expand(p), std::span<const Q>(x)));
  }
}

TEST(Abp, Expansion) {
  EXPECT_EQ(expand(path(2, {var(0), var(1)})), word(2, {0, 1}));
  LinearForm<Q> mixed = var(0, 2);
  mixed.add(1, Q(3));
  EXPECT_EQ(expand(path(2, {mixed, var(0)})), word(2, {0, 0}, 2) + word(2, {1, 0}, 3));
  EXPECT_TRUE(expand(path(2, {LinearForm<Q>{}, LinearForm<Q>{}})).is_zero());
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_abp<Q>(rng, 2, 1 + rng() % 4, 3, RationalField{});
    EXPECT_EQ(expand(p), oracle_expand(p));
  }
}

TEST(Abp, HomogeneousParts) {
  // 1 + x1 + x1 x2 as a depth-2 program: source -(1 + x1)-> u -(1)-> sink, source -(x1)-> v -(x2)-> sink
  Abp<Q> p{2, {1, 2, 1}, {}};
  LinearForm<Q> one_plus = var(0);
  one_plus.constant = 1;
  p.edges.push_back({{0, 0}, {1, 0}, one_plus});
  p.edges.push_back({{1, 0}, {2, 0}, LinearForm<Q>::of_constant(1)});
  p.edges.push_back({{0, 0}, {1, 1}, var(0)});
  p.edges.push_back({{1, 1}, {2, 0}, var(1)});
  const auto parts = homogeneous_parts(p);
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(expand(parts[0].abp), NCPoly<Q>::constant(2, 1));
  EXPECT_EQ(expand(parts[1].abp), word(2, {0}));
  EXPECT_EQ(expand(parts[2].abp), word(2, {0, 1}));
  const auto single = homogeneous_parts(path(2, {var(0), var(1)}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(expand(single[0].abp), word(2, {0, 1}));
  EXPECT_TRUE(homogeneous_parts(Abp<Q>::zero(2)).empty());

  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_abp<Q>(rng, 2, 1 + rng() % 4, 3, RationalField{});
    const auto f = oracle_expand(r);
    NCPoly<Q> total(2);
    for (const auto& part : homogeneous_parts(r)) {
      EXPECT_EQ(part.abp.depth(), std::max<std::size_t>(part.degree, 1));
      EXPECT_EQ(expand(part.abp), homogeneous_part(f, part.degree));
      total += expand(part.abp);
    }
    EXPECT_EQ(total, f);
  }
}

TEST(Abp, NormalizeAndSum) {
  LinearForm<Q> mixed = var(0, 2);
  mixed.add(1, Q(3));
  const auto p = path(2, {mixed});
  const auto n = normalize_edges(p);
  EXPECT_EQ(n.edges.size(), 2u);
  EXPECT_TRUE(is_normalized(n));
  EXPECT_EQ(expand(n), expand(p));
  EXPECT_THROW(normalize_edges(path(2, {LinearForm<Q>::of_constant(1)})), InputError);

  const auto xy = path(2, {var(0), var(1)});
  const std::vector<Abp<Q>> with_zero{xy, Abp<Q>::zero(2)};
  EXPECT_EQ(expand(abp_sum<Q>(with_zero)), expand(xy));
  const std::vector<Abp<Q>> two_paths{path(2, {var(0)}), path(2, {var(1)})};
  EXPECT_EQ(expand(abp_sum<Q>(two_paths)), word(2, {0}) + word(2, {1}));
  const std::vector<Abp<Q>> cancel{xy, path(2, {var(0, -1), var(1)})};
  EXPECT_TRUE(expand(abp_sum<Q>(cancel)).is_zero());
}

TEST(Abp, CoefficientMatricesAndSubprograms) {
  Abp<Q> zero{1, {1, 2, 1}, {}};
  for (const auto& layer : coefficient_matrices(zero)) {
    for (const auto& m : layer) EXPECT_TRUE(is_zero(m));
  }
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = normalize_edges(random_abp<Q>(rng, 2, 3, 2, RationalField{}, false));
    const auto f = oracle_expand(p);
    for (std::uint64_t i = 0; i < 8; ++i) EXPECT_EQ(coefficient_of(p, word_at(i, 3, 2)), f.coefficient(word_at(i, 3, 2)));
    for (std::uint32_t a = 0; a < p.layers[1]; ++a) {
      const auto sub = restrict_abp(p, {1, a}, {3, 0});
      NCPoly<Q> by_hand(2);
      for (const auto& e : p.edges) {
        if (e.from == NodeRef{0, 0} && e.to == NodeRef{1, a}) by_hand += e.label.to_poly(2);
      }
      EXPECT_EQ(expand(restrict_abp(p, {0, 0}, {1, a})), by_hand);
      EXPECT_EQ(sub.depth(), 2u);
    }
  }
}

TEST(Nisan, Ranks) {
  EXPECT_EQ(nisan_ranks(NCPoly<Q>(2), 3), (std::vector<std::size_t>{0, 0, 0, 0}));
  // (x1 + x2)^2 is a product, rank 1 at the middle cut
  NCPoly<Q> sq(2);
  for (std::uint32_t a = 0; a < 2; ++a) {
    for (std::uint32_t b = 0; b < 2; ++b) sq.add_term({a, b}, 1);
  }
  EXPECT_EQ(nisan_ranks(sq, 2), (std::vector<std::size_t>{1, 1, 1}));
  // x1 x1 + x2 x2 needs two middle nodes
  EXPECT_EQ(nisan_ranks(word(2, {0, 0}) + word(2, {1, 1}), 2), (std::vector<std::size_t>{1, 2, 1}));
  EXPECT_EQ(nisan_complexity(word(2, {0, 0}) + word(2, {1, 1}), 2), 4u);
  EXPECT_THROW(nisan_ranks(word(2, {0}) + word(2, {0, 0}), 2), InputError);
}

TEST(Circuit, DegreeEvaluationExpansion) {
  Circuit<Q> c{3, {}, 0};
  const auto x1 = c.push(Gate<Q>::input(0));
  const auto x2 = c.push(Gate<Q>::input(1));
  const auto x3 = c.push(Gate<Q>::input(2));
  const auto m = c.push(Gate<Q>::mul(x1, x2));
  c.output = c.push(Gate<Q>::mul(m, x3));
  EXPECT_EQ(formal_degree(c), 3u);
  const std::vector<Q> point{2, 3, 5};
  EXPECT_EQ(evaluate(c, std::span<const Q>(point)), 30);

  Circuit<Q> d{2, {}, 0};
  const auto a = d.push(Gate<Q>::input(0));
  const auto b = d.push(Gate<Q>::input(1));
  const auto s = d.push(Gate<Q>::add(a, b));
  d.output = d.push(Gate<Q>::mul(s, a));
  EXPECT_EQ(expand(d), word(2, {0, 0}) + word(2, {1, 0}));
  EXPECT_EQ(size(d).gates, 4u);
  EXPECT_EQ(size(d).edges, 4u);

  Circuit<Q> five{1, {Gate<Q>::constant(5)}, 0};
  EXPECT_EQ(expand(five), NCPoly<Q>::constant(1, 5));
  EXPECT_EQ(formal_degree(five), 0u);

  Circuit<Q> neg{1, {}, 0};
  const auto x = neg.push(Gate<Q>::input(0));
  const auto m1 = neg.push(Gate<Q>::constant(-1));
  const auto nx = neg.push(Gate<Q>::mul(m1, x));
  neg.output = neg.push(Gate<Q>::add(x, nx));
  EXPECT_TRUE(expand(neg).is_zero());
  EXPECT_FALSE(is_monotone(neg));
  EXPECT_TRUE(is_monotone(c));

  Circuit<Q> forward{1, {Gate<Q>::add(0, 1), Gate<Q>::input(0)}, 0};
  EXPECT_TRUE(forward.validate());

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_circuit<Q>(rng, 2, 8, 3, RationalField{});
    EXPECT_EQ(expand(r), oracle_expand(r));
    EXPECT_EQ(expand(compact(r)), expand(r));
  }
}

TEST(Products, HadamardAbpExamples) {
  const auto p = path(2, {var(0), var(1)});
  Abp<Q> q{2, {1, 2, 1}, {}};
  q.edges.push_back({{0, 0}, {1, 0}, var(0)});
  q.edges.push_back({{1, 0}, {2, 0}, var(1)});
  q.edges.push_back({{0, 0}, {1, 1}, var(1)});
  q.edges.push_back({{1, 1}, {2, 0}, var(0)});
  EXPECT_EQ(expand(hadamard_abp(p, q)), word(2, {0, 1}));

  LinearForm<Q> lin = var(0, 2);
  lin.add(1, Q(3));
  const auto r = path(2, {lin});
  EXPECT_EQ(expand(hadamard_abp(r, r)), word(2, {0}, 4) + word(2, {1}, 9));

  // all-ones complete program of degree 2 masks out everything else
  LinearForm<Q> all = var(0);
  all.add(1, Q(1));
  const auto mask = path(2, {all, all});
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_abp<Q>(rng, 2, 3, 2, RationalField{});
    EXPECT_EQ(expand(hadamard_abp(s, mask)), homogeneous_part(oracle_expand(s), 2));
  }
  EXPECT_THROW(hadamard_abp(path(2, {var(0)}), path(3, {var(0)})), InputError);
}

TEST(Products, HadamardCircuitAbpExamples) {
  Circuit<Q> c{2, {}, 0};
  const auto a = c.push(Gate<Q>::input(0));
  const auto b = c.push(Gate<Q>::input(1));
  c.output = c.push(Gate<Q>::mul(a, b));
  EXPECT_EQ(expand(hadamard_circuit_abp(c, path(2, {var(0), var(1)}))), word(2, {0, 1}));
  EXPECT_TRUE(expand(hadamard_circuit_abp(c, Abp<Q>::zero(2))).is_zero());
}

TEST(Products, CircuitAbpIntermediateGates) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = random_circuit<Q>(rng, 2, 6, 3, RationalField{});
    const auto p = random_abp<Q>(rng, 2, 1 + rng() % 3, 2, RationalField{});
    const auto detail = hadamard_circuit_abp_detail(c, p);
    const auto gate_polys = expand_gates(c);
    const auto circuit_polys = expand_gates(detail.circuit);
    int checked = 0;
    for (const auto& [key, g] : detail.gates) {
      if (!gate_polys[key.gate] || !circuit_polys[g] || checked > 30) continue;
      const auto& part = detail.parts.at(key.part);
      const auto h = key.l == 0 ? NCPoly<Q>::constant(2, Q(key.a == key.b ? 1 : 0))
                                : expand(restrict_abp(part, {key.i, key.a}, {key.i + key.l, key.b}));
      EXPECT_EQ(*circuit_polys[g], oracle_hadamard(homogeneous_part(*gate_polys[key.gate], key.l), h));
      ++checked;
    }
  }
}

TEST(Pit, Rational) {
  const auto cancel = two_edges(1, var(0), var(0, -1));
  const auto v = pit_rational(cancel);
  EXPECT_TRUE(v.is_zero);
  EXPECT_EQ(*v.value, 0);
  const auto w = pit_rational(path(2, {var(0), var(1)}));
  EXPECT_FALSE(w.is_zero);
  EXPECT_EQ(*w.value, 1);
}

TEST(Pit, SpanBasisFieldSensitivity) {
  EXPECT_TRUE(pit_span_basis(path(2, {LinearForm<Q>{}, LinearForm<Q>{}})).is_zero);
  const auto& f2 = PrimeField::get(2);
  Abp<Fp> sym{2, {1, 2, 1}, {}};
  auto v = [&](std::uint32_t i, std::int64_t c) { return LinearForm<Fp>::of_variable(i, f2.element(c)); };
  sym.edges.push_back({{0, 0}, {1, 0}, v(0, 1)});
  sym.edges.push_back({{1, 0}, {2, 0}, v(1, 1)});
  sym.edges.push_back({{0, 0}, {1, 1}, v(1, 1)});
  sym.edges.push_back({{1, 1}, {2, 0}, v(0, 1)});
  const auto verdict = pit_span_basis(sym);
  EXPECT_FALSE(verdict.is_zero);
  ASSERT_TRUE(verdict.witness_word);
  EXPECT_FALSE(expand(sym).coefficient(*verdict.witness_word).is_zero());

  Abp<Fp> doubled{2, {1, 2, 1}, {}};
  doubled.edges.push_back({{0, 0}, {1, 0}, v(0, 1)});
  doubled.edges.push_back({{1, 0}, {2, 0}, v(1, 1)});
  doubled.edges.push_back({{0, 0}, {1, 1}, v(0, 1)});
  doubled.edges.push_back({{1, 1}, {2, 0}, v(1, 1)});
  EXPECT_TRUE(pit_span_basis(doubled).is_zero);
  const auto over_q = path(2, {var(0, 2), var(1)});
  EXPECT_FALSE(pit_span_basis(over_q).is_zero);
}

TEST(Pit, Randomized) {
  const auto& f101 = PrimeField::get(101);
  Abp<Fp> zero{2, {1, 1, 1}, {}};
  zero.edges.push_back({{0, 0}, {1, 0}, LinearForm<Fp>::of_variable(0, f101.element(1))});
  zero.edges.push_back({{0, 0}, {1, 0}, LinearForm<Fp>::of_variable(0, f101.element(-1))});
  zero.edges.push_back({{1, 0}, {2, 0}, LinearForm<Fp>::of_variable(1, f101.element(1))});
  for (std::uint64_t seed = 0; seed < 5; ++seed) EXPECT_TRUE(pit_randomized(zero, {20, seed, 1}).is_zero);

  Abp<Fp> four{2, {1, 1, 1, 1, 1}, {}};
  for (std::uint32_t l = 0; l < 4; ++l) {
    four.edges.push_back({{l, 0}, {l + 1, 0}, LinearForm<Fp>::of_variable(l % 2, f101.element(1))});
  }
  const auto v = pit_randomized(four, {20, 3, 1});
  EXPECT_FALSE(v.is_zero);
  EXPECT_EQ(*v.failure_bound, Q(mp::pow(Integer(4), 20), mp::pow(Integer(101), 20)));
  EXPECT_EQ(*v.trial_failure_bound, Q(4) / Q(101));

  const auto& f2 = PrimeField::get(2);
  Abp<Fp> binary{2, {1, 1, 1, 1, 1}, {}};
  for (std::uint32_t l = 0; l < 4; ++l) {
    binary.edges.push_back({{l, 0}, {l + 1, 0}, LinearForm<Fp>::of_variable(l % 2, f2.element(1))});
  }
  EXPECT_EQ(sampling_size(2, 4), 8u);
  const auto b = pit_randomized(binary, {20, 3, 1});
  EXPECT_FALSE(b.is_zero);
  EXPECT_EQ(*b.trial_failure_bound, Q(4) / Q(8));
}

TEST(Pit, ThreadCountDoesNotMatter) {
  const auto& f3 = PrimeField::get(3);
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_abp<Fp>(rng, 2, 3, 2, f3);
    const auto a = pit_randomized(p, {16, 9, 1});
    const auto b = pit_randomized(p, {16, 9, 4});
    EXPECT_EQ(to_json(a), to_json(b));
  }
}

TEST(Pit, MonotoneCircuitSupports) {
  auto product = [](std::uint32_t first, std::uint32_t second) {
    Circuit<Q> c{2, {}, 0};
    const auto a = c.push(Gate<Q>::input(first));
    const auto b = c.push(Gate<Q>::input(second));
    c.output = c.push(Gate<Q>::mul(a, b));
    return c;
  };
  EXPECT_TRUE(hadamard_zero_circuits(product(0, 1), product(1, 0)));
  EXPECT_FALSE(hadamard_zero_circuits(product(0, 1), product(0, 1)));
  EXPECT_FALSE(hadamard_zero_circuits(cfg_to_circuit(build_l1_grammar(1)), cfg_to_circuit(build_l2_grammar(1))));
}

TEST(Reductions, Determinant) {
  EXPECT_EQ(expand(det_to_abp(Matrix<Q>(Matrix<Q>::Identity(2, 2)))), NCPoly<Q>::constant(0, 1));
  Matrix<Q> ones = Matrix<Q>::Ones(2, 2);
  EXPECT_TRUE(expand(det_to_abp(ones)).is_zero());
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix<Q> a(4, 4);
    for (Eigen::Index i = 0; i < 16; ++i) a.data()[i] = random_scalar<Q>(rng, RationalField{});
    EXPECT_EQ(expand(det_to_abp(a)).coefficient({}), oracle_det(a));
  }
}

TEST(Reductions, Reachability) {
  const auto edge = reach_to_abp(Digraph{2, {{0, 1}}}, 0, 1);
  ASSERT_EQ(edge.n_vars, 1u);
  EXPECT_EQ(expand(edge), word(1, {0}));
  EXPECT_TRUE(expand(reach_to_abp(Digraph{3, {{1, 2}}}, 0, 2)).is_zero());
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 30; ++trial) {
    Digraph g{6, {}};
    for (std::uint32_t u = 0; u < 6; ++u) {
      for (std::uint32_t w = u + 1; w < 6; ++w) {
        if (rng() % 4 == 0) g.edges.emplace_back(u, w);
      }
    }
    EXPECT_EQ(!expand(reach_to_abp(g, 0, 5)).is_zero(), oracle_reachable(g, 0, 5));
  }
}

TEST(Io, ArtifactsRoundTrip) {
  std::mt19937_64 rng(71);
  const auto& f9 = ExtensionField::get(3, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_abp<Fpk>(rng, 2, 3, 2, f9);
    EXPECT_EQ(abp_from_json<Fpk>(to_json(p, f9), f9), p);
    const auto c = random_circuit<Q>(rng, 2, 6, 3, RationalField{});
    EXPECT_EQ(circuit_from_json<Q>(to_json(c, RationalField{}), RationalField{}), c);
    Matrix<Q> m(2, 3);
    for (Eigen::Index i = 0; i < 6; ++i) m.data()[i] = Q(trial, 7) - Q(i);
    EXPECT_EQ(matrix_from_json<Q>(to_json(m, RationalField{}), RationalField{}), m);
  }
  const Json wide = Json::parse(
      R"({"nvars":3,"gates":[{"op":"in","var":0},{"op":"in","var":1},{"op":"in","var":2},{"op":"mul","args":[0,1,2]}],"output":3})");
  EXPECT_THROW(circuit_from_json<Q>(wide, RationalField{}), InputError);
  EXPECT_EQ(expand(circuit_from_json<Q>(wide, RationalField{}, true)), word(3, {0, 1, 2}));
}
