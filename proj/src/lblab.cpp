#include "hadamard/lblab.hpp"

#include <algorithm>
#include <set>

namespace hadamard {

ExplicitParams::ExplicitParams(std::size_t t, std::uint32_t p) : t_(t), p_(p) {
  if (t == 0) throw InputError("t must be at least 1");
  if (!is_prime(p)) throw InputError("p must be prime");
  if (t * p > 62) throw ResourceError("n = t*p above 62 variables");
  field_ = &ExtensionField::get(2, p);
}

std::vector<Fpk> y_vector(const CMonomial& m, const ExplicitParams& params) {
  if (m.size() != params.n()) throw InputError("monomial arity does not match t*p");
  std::vector<Fpk> y;
  for (std::size_t i = 0; i < params.t(); ++i) {
    std::vector<std::uint8_t> bits(params.p());
    for (std::uint32_t j = 0; j < params.p(); ++j) {
      const auto e = m[i * params.p() + j];
      if (e > 1) throw InputError("monomial is not multilinear");
      bits[j] = static_cast<std::uint8_t>(e);
    }
    y.push_back(encode_bits(params.field(), bits));
  }
  return y;
}

int f_coeff(const CMonomial& m, const ExplicitParams& params) {
  Fpk prod = params.field().element(1);
  for (const auto& y : y_vector(m, params)) prod *= y;
  return psi(prod);
}

namespace {

CMonomial monomial_of_mask(std::uint64_t mask, std::size_t n) {
  CMonomial m(n, 0);
  for (std::size_t i = 0; i < n; ++i) m[i] = (mask >> i) & 1;
  return m;
}

template <class Fn>
CPoly<Rational> dense(const ExplicitParams& params, const Caps& caps, Fn&& coeff) {
  const std::size_t n = params.n();
  if (n >= 63 || (std::uint64_t{1} << n) > caps.max_terms) {
    throw ResourceError("2^" + std::to_string(n) + " monomials exceed the term cap");
  }
  CPoly<Rational> f(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const CMonomial m = monomial_of_mask(mask, n);
    f.add_term(m, coeff(m));
  }
  return f;
}

}  // namespace

CPoly<Rational> build_f(const ExplicitParams& params, const Caps& caps) {
  return dense(params, caps, [&](const CMonomial& m) { return Rational(f_coeff(m, params)); });
}

CPoly<Rational> build_f_prime(const ExplicitParams& params, const Caps& caps) {
  return dense(params, caps, [&](const CMonomial& m) { return Rational(f_coeff(m, params) + 1) / 2; });
}

Rational sum_coeffs(const CPoly<Rational>& f) {
  Rational s = 0;
  for (const auto& [m, c] : f.terms()) s += c;
  return s;
}

ProductPoly make_product_poly(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b, CPoly<Rational> g,
                              CPoly<Rational> h, Rational eps) {
  if (g.n_vars() != h.n_vars()) throw InputError("product polynomial: arity mismatch");
  const std::size_t n = g.n_vars();
  std::set<std::uint32_t> sa(a.begin(), a.end());
  std::set<std::uint32_t> sb(b.begin(), b.end());
  if (sa.size() != a.size() || sb.size() != b.size()) throw InputError("product polynomial: repeated variable");
  for (auto v : sa) {
    if (v >= n) throw InputError("product polynomial: variable out of range");
    if (sb.count(v)) throw InputError("product polynomial: A and B overlap");
  }
  for (auto v : sb) {
    if (v >= n) throw InputError("product polynomial: variable out of range");
  }
  if (eps < 0 || eps > 1) throw InputError("product polynomial: eps must lie in [0, 1]");
  // ceil(eps * n) without leaving the rationals
  const Rational need = eps * Rational(n);
  Integer bound = mp::numerator(need) / mp::denominator(need);
  if (Rational(bound) < need) bound += 1;
  if (Integer(a.size()) < bound || Integer(b.size()) < bound) {
    throw InputError("product polynomial: |A| and |B| must be at least ceil(eps*n) = " + to_string(bound));
  }
  auto within = [](const CPoly<Rational>& f, const std::set<std::uint32_t>& s) {
    for (const auto& [m, c] : f.terms()) {
      for (std::uint32_t v = 0; v < m.size(); ++v) {
        if (m[v] && !s.count(v)) return false;
      }
    }
    return true;
  };
  if (!within(g, sa)) throw InputError("product polynomial: g uses a variable outside A");
  if (!within(h, sb)) throw InputError("product polynomial: h uses a variable outside B");
  return ProductPoly{std::move(a), std::move(b), std::move(g), std::move(h), std::move(eps)};
}

Correlation corr_f_vs(const CPoly<Rational>& f, const ExplicitParams& params, const Caps& caps) {
  if (f.n_vars() != params.n()) throw InputError("corr_f_vs: arity mismatch");
  const auto big = build_f(params, caps);
  Correlation out;
  out.corr = corr(big, f);
  const Rational nf = norm_sq(f);
  out.ratio_sq = nf.is_zero() ? Rational(0) : out.corr * out.corr / (norm_sq(big) * nf);
  return out;
}

Integer exp_sum(const std::vector<std::vector<Fpk>>& sets, const Fpk& z, const Caps& caps) {
  long double count = 1;
  for (const auto& s : sets) count *= static_cast<long double>(s.size());
  if (count > static_cast<long double>(caps.max_terms)) throw ResourceError("exp_sum: too many tuples");
  if (!z.bound()) throw InputError("exp_sum: z must be a field element");
  Integer total = 0;
  if (count == 0) return total;
  std::vector<std::size_t> idx(sets.size(), 0);
  while (true) {
    Fpk prod = z;
    for (std::size_t i = 0; i < sets.size(); ++i) prod *= sets[i][idx[i]];
    total += psi(prod);
    std::size_t i = 0;
    while (i < sets.size() && ++idx[i] == sets[i].size()) idx[i++] = 0;
    if (i == sets.size()) break;
  }
  return total;
}

bool is_suitable_restriction(const std::vector<std::uint32_t>& x1, const std::vector<std::uint32_t>& x2,
                             const CMonomial& m2, const ExplicitParams& params) {
  const std::size_t n = params.n();
  std::vector<int> seen(n, 0);
  for (auto v : x1) {
    if (v >= n || seen[v]++) throw InputError("X' and X'' must partition the variables");
  }
  for (auto v : x2) {
    if (v >= n || seen[v]++) throw InputError("X' and X'' must partition the variables");
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<std::ptrdiff_t>(n)) {
    throw InputError("X' and X'' must partition the variables");
  }
  if (m2.size() != n) throw InputError("m'' arity mismatch");
  const std::set<std::uint32_t> in_x2(x2.begin(), x2.end());
  for (std::uint32_t v = 0; v < n; ++v) {
    if (m2[v] && !in_x2.count(v)) throw InputError("m'' uses a variable outside X''");
  }
  for (std::size_t i = 0; i < params.t(); ++i) {
    std::size_t heavy = 0;
    bool touched = false;
    for (std::uint32_t j = 0; j < params.p(); ++j) {
      const auto v = static_cast<std::uint32_t>(i * params.p() + j);
      heavy += in_x2.count(v);
      touched = touched || m2[v] != 0;
    }
    if (2 * heavy >= params.p() && !touched) return false;
  }
  return true;
}

std::pair<CPoly<Rational>, CPoly<Rational>> permanent_hadamard(std::size_t n, std::size_t max_n, const Caps& caps) {
  if (n == 0) throw InputError("permanent_hadamard needs n >= 1");
  if (n > max_n) throw ResourceError("permanent_hadamard: n above the cap of " + std::to_string(max_n));
  const std::size_t vars = n * n;
  auto x = [&](std::size_t i, std::size_t j) { return static_cast<std::uint32_t>(i * n + j); };
  CPoly<Rational> f = CPoly<Rational>::constant(vars, Rational(1));
  CPoly<Rational> g = CPoly<Rational>::constant(vars, Rational(1));
  for (std::size_t i = 0; i < n; ++i) {
    CPoly<Rational> row(vars);
    CPoly<Rational> col(vars);
    for (std::size_t j = 0; j < n; ++j) {
      row += CPoly<Rational>::variable(vars, x(i, j));
      col += CPoly<Rational>::variable(vars, x(j, i));
    }
    f = CPoly<Rational>::multiply(f, row, caps);
    g = CPoly<Rational>::multiply(g, col, caps);
  }
  return {std::move(f), std::move(g)};
}

}  // namespace hadamard
