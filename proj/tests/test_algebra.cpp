#include "test_support.hpp"

#include "hadamard/io.hpp"

#include <gtest/gtest.h>

using namespace hadamard;
using namespace hadamard::testing;

namespace {

Rational q(std::string_view s) { return parse_rational(s); }

Matrix<Rational> qmat(std::initializer_list<std::initializer_list<int>> rows) {
  Matrix<Rational> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index r = 0;
  for (const auto& row : rows) {
    Eigen::Index c = 0;
    for (int v : row) m(r, c++) = Rational(v);
    ++r;
  }
  return m;
}

}  // namespace

TEST(Scalars, RationalSum) { EXPECT_EQ(q("1/2") + q("1/3"), q("5/6")); }

TEST(Scalars, PrimeFieldProduct) {
  const auto& f5 = PrimeField::get(5);
  EXPECT_EQ(f5.element(3) * f5.element(4), f5.element(2));
  EXPECT_EQ(f5.element(3).inverse(), f5.element(2));
  EXPECT_THROW(f5.element(0).inverse(), ArithmeticError);
  EXPECT_THROW(PrimeField::get(6), InputError);
}

TEST(Scalars, MixedFieldsRejected) {
  EXPECT_THROW(PrimeField::get(5).element(1) + PrimeField::get(7).element(1), ArithmeticError);
}

TEST(Scalars, ExtensionMultiplication) {
  const auto& f4 = ExtensionField::get(2, 2);
  const Fpk x = f4.generator();
  EXPECT_EQ(x * x, x + f4.element(1));
  EXPECT_EQ(x.pow(3), f4.element(1));
}

TEST(Scalars, DefaultIrreducibles) {
  EXPECT_EQ(find_irreducible(2, 1), (FpPoly{0, 1}));
  EXPECT_EQ(find_irreducible(2, 2), (FpPoly{1, 1, 1}));
  EXPECT_EQ(find_irreducible(3, 2), (FpPoly{1, 0, 1}));
  EXPECT_EQ(find_irreducible(2, 3), (FpPoly{1, 1, 0, 1}));
  EXPECT_TRUE(is_irreducible(2, find_irreducible(2, 5)));
  EXPECT_FALSE(is_irreducible(2, FpPoly{1, 0, 1}));
}

TEST(Scalars, TraceAndCharacter) {
  const auto& f4 = ExtensionField::get(2, 2);
  const Fpk x = f4.generator();
  EXPECT_TRUE(trace(f4.element(0)).is_zero());
  EXPECT_TRUE(trace(f4.element(1)).is_zero());
  EXPECT_EQ(trace(x).value(), 1);
  EXPECT_EQ(psi(f4.element(0)), 1);
  EXPECT_EQ(psi(x), -1);
  int sum = 0;
  for (std::uint64_t i = 0; i < f4.size(); ++i) sum += psi(f4.from_index(i));
  EXPECT_EQ(sum, 0);
}

TEST(Scalars, BitEncodingRoundTrip) {
  const auto& f8 = ExtensionField::get(2, 3);
  EXPECT_TRUE(encode_bits(f8, std::vector<std::uint8_t>{0, 0, 0}).is_zero());
  EXPECT_EQ(encode_bits(ExtensionField::get(2, 2), std::vector<std::uint8_t>{1, 0}), ExtensionField::get(2, 2).element(1));
  for (std::uint8_t mask = 0; mask < 8; ++mask) {
    const std::vector<std::uint8_t> bits{static_cast<std::uint8_t>(mask & 1), static_cast<std::uint8_t>((mask >> 1) & 1),
                                         static_cast<std::uint8_t>((mask >> 2) & 1)};
    EXPECT_EQ(decode_bits(encode_bits(f8, bits)), bits);
  }
}

TEST(Scalars, FieldFlag) {
  EXPECT_EQ(parse_field_flag("q").kind, FieldKind::Rational);
  EXPECT_EQ(parse_field_flag("fp:5").p, 5u);
  EXPECT_EQ(parse_field_flag("fpk:2:3").k, 3u);
  EXPECT_THROW(parse_field_flag("fp:4"), InputError);
  EXPECT_THROW(parse_field_flag("gf"), InputError);
}

TEST(Linalg, MatmulExample) {
  EXPECT_EQ(matmul(qmat({{1, 2}, {3, 4}}), qmat({{0, 1}, {1, 0}})), qmat({{2, 1}, {4, 3}}));
  EXPECT_EQ(matmul(qmat({{1, 2}}), qmat({{3}, {4}})), qmat({{11}}));
  EXPECT_THROW(matmul(qmat({{1, 2}}), qmat({{1, 2}})), InputError);
}

TEST(Linalg, Rank) {
  EXPECT_EQ(rank(Matrix<Rational>(Matrix<Rational>::Zero(3, 3))), 0u);
  EXPECT_EQ(rank(Matrix<Rational>(Matrix<Rational>::Identity(3, 3))), 3u);
  EXPECT_EQ(rank(qmat({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}})), 2u);
}

TEST(Linalg, EntrywiseProductOfRankOnes) {
  std::mt19937_64 rng(7);
  const auto& f5 = PrimeField::get(5);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix<Fp> a(4, 4), b(4, 4);
    for (Eigen::Index i = 0; i < 16; ++i) {
      a.data()[i] = random_scalar<Fp>(rng, f5);
      b.data()[i] = random_scalar<Fp>(rng, f5);
    }
    EXPECT_LE(rank(hadamard::hadamard(a, b)), rank(a) * rank(b));
  }
  Vector<Rational> u(3), v(3), w(3), z(3);
  u << 1, 2, 3;
  v << 4, 5, 6;
  w << 7, 8, 9;
  z << 1, 0, 2;
  const Matrix<Rational> p = u * v.transpose();
  const Matrix<Rational> r = w * z.transpose();
  EXPECT_LE(rank(hadamard::hadamard(p, r)), 1u);
}

TEST(Linalg, DeterminantAgainstCofactor) {
  EXPECT_EQ(det(Matrix<Rational>(Matrix<Rational>::Identity(4, 4))), 1);
  EXPECT_EQ(det(qmat({{1, 1}, {1, 1}})), 0);
  EXPECT_EQ(det(qmat({{2, -1, 0, 3}, {1, 4, -2, 0}, {0, 5, 1, -1}, {3, 0, 2, 2}})), -74);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix<Rational> a(4, 4);
    for (Eigen::Index i = 0; i < 16; ++i) a.data()[i] = Rational(std::uniform_int_distribution<int>(-5, 5)(rng));
    EXPECT_EQ(det(a), oracle_det(a));
  }
}

TEST(Linalg, SpanBasis) {
  const std::vector<Matrix<Rational>> zero{Matrix<Rational>::Zero(2, 2)};
  EXPECT_TRUE(basis_of_span<Rational>(zero).empty());
  const Matrix<Rational> id = Matrix<Rational>::Identity(2, 2);
  const std::vector<Matrix<Rational>> scaled{id, Rational(2) * id};
  EXPECT_EQ(basis_of_span<Rational>(scaled), (std::vector<std::size_t>{0}));
  const auto e11 = qmat({{1, 0}, {0, 0}});
  const auto e12 = qmat({{0, 1}, {0, 0}});
  const std::vector<Matrix<Rational>> three{e11, e12, e11 + e12};
  EXPECT_EQ(basis_of_span<Rational>(three).size(), 2u);
  const std::vector<Matrix<Rational>> basis{e11, e12};
  const auto coords = span_coordinates<Rational>(basis, qmat({{3, -2}, {0, 0}}));
  ASSERT_TRUE(coords);
  EXPECT_EQ((*coords)(0), 3);
  EXPECT_EQ((*coords)(1), -2);
  EXPECT_FALSE(span_coordinates<Rational>(basis, id));
}

TEST(Poly, HadamardExamples) {
  NCPoly<Rational> f(2), g(2);
  f.add_term({0, 1}, 1);
  f.add_term({1, 0}, 2);
  g.add_term({0, 1}, 3);
  EXPECT_EQ(hadamard::hadamard(f, g), NCPoly<Rational>::monomial(2, {0, 1}, 3));
  EXPECT_TRUE(hadamard::hadamard(f, NCPoly<Rational>(2)).is_zero());
  EXPECT_THROW(hadamard::hadamard(f, NCPoly<Rational>(3)), InputError);
}

TEST(Poly, PermanentAsCommutativeHadamard) {
  // x11 x12 x21 x22 at indices 0..3
  const auto x = [](std::uint32_t i) { return CPoly<Rational>::variable(4, i); };
  const auto f = (x(0) + x(1)) * (x(2) + x(3));
  const auto g = (x(0) + x(2)) * (x(1) + x(3));
  EXPECT_EQ(hadamard::hadamard(f, g), oracle_permanent(2));
}

TEST(Poly, MonomialSets) {
  EXPECT_TRUE(mon_set(NCPoly<Rational>(2)).empty());
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_homogeneous<Rational>(rng, 2, 3, 5, RationalField{});
    const auto g = random_homogeneous<Rational>(rng, 2, 3, 5, RationalField{});
    WordSet both;
    const auto mf = mon_set(f), mg = mon_set(g);
    std::set_intersection(mf.begin(), mf.end(), mg.begin(), mg.end(), std::inserter(both, both.end()), GradedLex{});
    EXPECT_EQ(mon_set(hadamard::hadamard(f, g)), both);
  }
}

TEST(Poly, NoncommutativeProducts) {
  const auto x1 = NCPoly<Rational>::variable(2, 0);
  const auto x2 = NCPoly<Rational>::variable(2, 1);
  EXPECT_NE(x1 * x2, x2 * x1);
  const auto sq = (x1 + x2) * (x1 + x2);
  EXPECT_EQ(sq.size(), 4u);
  for (const auto& [w, c] : sq.terms()) EXPECT_EQ(c, 1);
  const auto f = NCPoly<Rational>::constant(2, 1) + x1 + x1 * x2;
  EXPECT_EQ(homogeneous_part(f, 1), x1);
  EXPECT_TRUE(homogeneous_part(NCPoly<Rational>(2), 1).is_zero());
  EXPECT_FALSE(is_homogeneous(f));
}

TEST(Poly, Evaluation) {
  NCPoly<Rational> f(2);
  f.add_term({0, 1}, 1);
  f.add_term({1, 0}, 1);
  const std::vector<Rational> ones{1, 1};
  EXPECT_EQ(eval(f, std::span<const Rational>(ones)), 2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_homogeneous<Rational>(rng, 3, 2, 6, RationalField{}) + NCPoly<Rational>::constant(3, 4);
    Rational squares = 0;
    for (const auto& [w, c] : g.terms()) squares += c * c;
    const std::vector<Rational> all_ones(3, Rational(1)), zeros(3, Rational(0));
    EXPECT_EQ(eval(hadamard::hadamard(g, g), std::span<const Rational>(all_ones)), squares);
    EXPECT_EQ(eval(g, std::span<const Rational>(zeros)), 4);
  }
}

TEST(Poly, Correlation) {
  const auto x = [](std::uint32_t i) { return CPoly<Rational>::variable(2, i); };
  EXPECT_EQ(corr(x(0) + x(1), x(0) - x(1)), 0);
  EXPECT_EQ(corr(x(0) + x(1), CPoly<Rational>(2)), 0);
  EXPECT_EQ(norm_sq(x(0) - Rational(3) * x(1)), 10);
}

TEST(Io, ScalarsAndPolynomialsRoundTrip) {
  const auto& f9 = ExtensionField::get(3, 2);
  NCPoly<Fpk> f(2);
  f.add_term({0, 1}, f9.generator());
  f.add_term({}, f9.element(2));
  const Json j = to_json(f, f9);
  EXPECT_EQ(j.at("field").at("modulus"), Json::parse("[1,0,1]"));
  EXPECT_EQ(ncpoly_from_json<Fpk>(j, f9), f);
  const auto& f7 = PrimeField::get(7);
  EXPECT_EQ(scalar_from_json<Fp>(Json("1/2"), f7), f7.element(4));
  EXPECT_THROW(scalar_from_json<Fp>(Json("1/7"), f7), ArithmeticError);
  EXPECT_THROW(parse_json("{"), InputError);
}
