#pragma once

// Small-parameter experiments with the explicit +-1 polynomial F on n = t*p
// variables, whose coefficient on a multilinear monomial m is psi applied to
// the product of the block encodings y_1(m), ..., y_t(m) in F_{2^p}.

#include "hadamard/caps.hpp"
#include "hadamard/field.hpp"
#include "hadamard/poly.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace hadamard {

/// t blocks of p variables each; block i holds x_{ip}, ..., x_{ip+p-1}.
class ExplicitParams {
 public:
  ExplicitParams(std::size_t t, std::uint32_t p);

  std::size_t t() const { return t_; }
  std::uint32_t p() const { return p_; }
  std::size_t n() const { return t_ * p_; }
  const ExtensionField& field() const { return *field_; }
  std::size_t block_of(std::uint32_t var) const { return var / p_; }

 private:
  std::size_t t_;
  std::uint32_t p_;
  const ExtensionField* field_;
};

/// y_i(m): the characteristic vector of m restricted to block i, as an
/// element of F_{2^p}. Zero exactly when m avoids the block.
std::vector<Fpk> y_vector(const CMonomial& m, const ExplicitParams& params);

/// psi(y_1(m) * ... * y_t(m)).
int f_coeff(const CMonomial& m, const ExplicitParams& params);

/// F over all 2^n multilinear monomials.
CPoly<Rational> build_f(const ExplicitParams& params, const Caps& caps = {});
/// F' = (F + 1) / 2 coefficientwise, over the same monomials.
CPoly<Rational> build_f_prime(const ExplicitParams& params, const Caps& caps = {});

Rational sum_coeffs(const CPoly<Rational>& f);

/// f = g * h with g over A, h over B, A and B disjoint, each of size at least
/// ceil(eps * n).
struct ProductPoly {
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  CPoly<Rational> g;
  CPoly<Rational> h;
  Rational eps;

  CPoly<Rational> materialize(const Caps& caps = {}) const { return CPoly<Rational>::multiply(g, h, caps); }
};

ProductPoly make_product_poly(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b, CPoly<Rational> g,
                              CPoly<Rational> h, Rational eps);

struct Correlation {
  Rational corr;
  /// corr^2 / (norm_sq(F) * norm_sq(f)); zero when f = 0.
  Rational ratio_sq;
};

Correlation corr_f_vs(const CPoly<Rational>& f, const ExplicitParams& params, const Caps& caps = {});

/// sum over y_i in A_i of psi(z * y_1 * ... * y_s).
Integer exp_sum(const std::vector<std::vector<Fpk>>& sets, const Fpk& z, const Caps& caps = {});

/// For each block i with 2 |X'' n X(i)| >= p, some variable of X(i) occurs in
/// m''. X' and X'' must partition the variables; m'' must live on X''.
bool is_suitable_restriction(const std::vector<std::uint32_t>& x1, const std::vector<std::uint32_t>& x2,
                             const CMonomial& m2, const ExplicitParams& params);

/// f = prod_i sum_j x_ij and g = prod_j sum_i x_ij over n^2 variables, x_ij
/// at index i*n + j. Their Hadamard product is the permanent.
std::pair<CPoly<Rational>, CPoly<Rational>> permanent_hadamard(std::size_t n, std::size_t max_n = 5,
                                                               const Caps& caps = {});

}  // namespace hadamard
