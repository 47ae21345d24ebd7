#include "hadamard/field.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

namespace hadamard {

// ---------------------------------------------------------------------------
// Rational

namespace {

bool is_integer_text(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Integer parse_integer(std::string_view s) {
  if (!is_integer_text(s)) throw InputError("malformed integer '" + std::string(s) + "'");
  if (s.front() == '+') s.remove_prefix(1);
  return Integer(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  const Integer num = parse_integer(text.substr(0, slash));
  const Integer den = parse_integer(text.substr(slash + 1));
  if (den.is_zero()) throw InputError("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Integer& z) { return z.str(); }

std::string to_string(const Rational& q) {
  const Integer den = mp::denominator(q);
  if (den == 1) return mp::numerator(q).str();
  return mp::numerator(q).str() + "/" + den.str();
}

FieldSpec RationalField::spec() const { return FieldSpec{}; }

// ---------------------------------------------------------------------------
// Prime fields

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

const PrimeField& PrimeField::get(std::uint32_t p) {
  static std::mutex mutex;
  static std::map<std::uint32_t, std::unique_ptr<PrimeField>> registry;
  if (p >= (1u << 31) || !is_prime(p)) {
    throw InputError("F_p requires a prime p < 2^31, got " + std::to_string(p));
  }
  std::lock_guard lock(mutex);
  auto& slot = registry[p];
  if (!slot) slot.reset(new PrimeField(p));
  return *slot;
}

Fp PrimeField::element(std::int64_t v) const { return Fp(*this, v); }

Fp PrimeField::from_index(std::uint64_t i) const {
  if (i >= p_) throw InputError("element index out of range");
  return Fp(*this, static_cast<std::int64_t>(i));
}

FieldSpec PrimeField::spec() const { return FieldSpec{FieldKind::Prime, p_, 1, {}}; }

std::string PrimeField::name() const { return "F_" + std::to_string(p_); }

namespace {

std::int64_t reduce(std::int64_t v, std::uint32_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return r < 0 ? r + p : r;
}

const PrimeField* common_field(const Fp& a, const Fp& b) {
  if (a.field() && b.field() && a.field() != b.field()) {
    throw ArithmeticError("mixed-field operands: " + a.field()->name() + " and " + b.field()->name());
  }
  return a.field() ? a.field() : b.field();
}

std::int64_t checked(std::int64_t v, bool overflow) {
  if (overflow) throw ArithmeticError("overflow in unbound constant arithmetic");
  return v;
}

}  // namespace

Fp::Fp(const PrimeField& field, std::int64_t v) : field_(&field), value_(reduce(v, field.characteristic())) {}

Fp Fp::operator-() const {
  if (!field_) return Fp(checked(-value_, value_ == std::numeric_limits<std::int64_t>::min()));
  return Fp(*field_, -value_);
}

Fp& Fp::operator+=(const Fp& rhs) {
  const PrimeField* f = common_field(*this, rhs);
  if (!f) {
    std::int64_t out;
    value_ = checked(out, __builtin_add_overflow(value_, rhs.value_, &out));
    return *this;
  }
  const std::uint32_t p = f->characteristic();
  value_ = (reduce(value_, p) + reduce(rhs.value_, p)) % p;
  field_ = f;
  return *this;
}

Fp& Fp::operator-=(const Fp& rhs) {
  const PrimeField* f = common_field(*this, rhs);
  if (!f) {
    std::int64_t out;
    value_ = checked(out, __builtin_sub_overflow(value_, rhs.value_, &out));
    return *this;
  }
  const std::uint32_t p = f->characteristic();
  value_ = (reduce(value_, p) + p - reduce(rhs.value_, p)) % p;
  field_ = f;
  return *this;
}

Fp& Fp::operator*=(const Fp& rhs) {
  const PrimeField* f = common_field(*this, rhs);
  if (!f) {
    std::int64_t out;
    value_ = checked(out, __builtin_mul_overflow(value_, rhs.value_, &out));
    return *this;
  }
  const std::uint32_t p = f->characteristic();
  value_ = static_cast<std::int64_t>(static_cast<std::uint64_t>(reduce(value_, p)) *
                                     static_cast<std::uint64_t>(reduce(rhs.value_, p)) % p);
  field_ = f;
  return *this;
}

Fp& Fp::operator/=(const Fp& rhs) {
  const PrimeField* f = common_field(*this, rhs);
  const Fp divisor = (f && !rhs.field_) ? Fp(*f, rhs.value_) : rhs;
  return *this *= divisor.inverse();
}

Fp Fp::inverse() const {
  if (!field_) {
    if (value_ == 1 || value_ == -1) return *this;
    if (value_ == 0) throw ArithmeticError("division by zero");
    throw ArithmeticError("cannot invert an integer constant outside a field");
  }
  if (value_ == 0) throw ArithmeticError("division by zero in " + field_->name());
  return pow(field_->characteristic() - 2);
}

Fp Fp::pow(std::uint64_t e) const {
  if (!field_) {
    if (value_ == 0 || value_ == 1) return e == 0 ? Fp(1) : *this;
    if (value_ == -1) return Fp(e % 2 == 0 ? 1 : -1);
    throw ArithmeticError("cannot exponentiate an integer constant outside a field");
  }
  Fp result(*field_, 1);
  Fp base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

bool operator==(const Fp& a, const Fp& b) {
  const PrimeField* f = common_field(a, b);
  if (!f) return a.value_ == b.value_;
  const std::uint32_t p = f->characteristic();
  return reduce(a.value_, p) == reduce(b.value_, p);
}

std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.value(); }

std::string to_string(const Fp& a) { return std::to_string(a.value()); }

// ---------------------------------------------------------------------------
// Polynomials over F_p (helpers for irreducibility)

namespace {

constexpr std::uint64_t kTrialDivisionCap = std::uint64_t{1} << 24;

// True when the monic polynomial g divides f (both low degree first).
bool divides(std::span<const std::uint32_t> g, std::span<const std::uint32_t> f, std::uint32_t p) {
  std::vector<std::uint64_t> r(f.begin(), f.end());
  const std::size_t dg = g.size() - 1;
  for (std::size_t d = r.size(); d-- > dg;) {
    const std::uint64_t c = r[d] % p;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dg; ++j) {
      r[d - dg + j] = (r[d - dg + j] + (p - c) * g[j]) % p;
    }
  }
  return std::all_of(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(dg),
                     [p](std::uint64_t c) { return c % p == 0; });
}

std::uint64_t checked_power(std::uint64_t base, unsigned e, std::uint64_t limit) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (out > limit / base) return limit + 1;
    out *= base;
  }
  return out;
}

void digits_of(std::uint64_t i, std::uint32_t p, std::span<std::uint32_t> out) {
  for (auto& d : out) {
    d = static_cast<std::uint32_t>(i % p);
    i /= p;
  }
}

}  // namespace

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic) {
  if (monic.size() < 2 || monic.back() % p != 1) return false;
  const unsigned k = static_cast<unsigned>(monic.size() - 1);
  if (k == 1) return true;
  std::uint64_t total = 0;
  for (unsigned d = 1; d <= k / 2; ++d) total += checked_power(p, d, kTrialDivisionCap);
  if (total > kTrialDivisionCap) {
    throw ResourceError("irreducibility check for F_" + std::to_string(p) + "^" + std::to_string(k) +
                        " needs more than 2^24 trial divisors");
  }
  std::vector<std::uint32_t> g;
  for (unsigned d = 1; d <= k / 2; ++d) {
    g.assign(d + 1, 0);
    g[d] = 1;
    const std::uint64_t count = checked_power(p, d, kTrialDivisionCap);
    for (std::uint64_t i = 0; i < count; ++i) {
      digits_of(i, p, std::span(g).first(d));
      if (divides(g, monic, p)) return false;
    }
  }
  return true;
}

FpPoly find_irreducible(std::uint32_t p, unsigned k) {
  if (!is_prime(p)) throw InputError("find_irreducible needs a prime characteristic");
  if (k == 0) throw InputError("extension degree must be at least 1");
  FpPoly f(k + 1, 0);
  f[k] = 1;
  const std::uint64_t count = checked_power(p, k, std::numeric_limits<std::uint64_t>::max() / 2);
  for (std::uint64_t i = 0; i < count; ++i) {
    digits_of(i, p, std::span(f).first(k));
    if (is_irreducible(p, f)) return f;
  }
  throw InputError("no irreducible polynomial found");  // unreachable for prime p
}

// ---------------------------------------------------------------------------
// Extension fields

ExtensionField::ExtensionField(std::uint32_t p, unsigned k, FpPoly modulus)
    : p_(p), k_(k), modulus_(std::move(modulus)), base_(&PrimeField::get(p)) {
  size_ = checked_power(p, k, std::uint64_t{1} << 62);
  if (size_ > (std::uint64_t{1} << 62)) throw InputError("extension field larger than 2^62 elements");
}

const ExtensionField& ExtensionField::get(std::uint32_t p, unsigned k) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, unsigned>, FpPoly> defaults;
  FpPoly modulus;
  {
    std::lock_guard lock(mutex);
    auto it = defaults.find({p, k});
    if (it != defaults.end()) modulus = it->second;
  }
  if (modulus.empty()) {
    if (k == 0 || k > kMaxExtensionDegree) throw InputError("extension degree must be in [1, 32]");
    modulus = find_irreducible(p, k);
    std::lock_guard lock(mutex);
    defaults[{p, k}] = modulus;
  }
  return get(p, k, modulus);
}

const ExtensionField& ExtensionField::get(std::uint32_t p, unsigned k, std::span<const std::uint32_t> modulus) {
  static std::mutex mutex;
  static std::map<std::tuple<std::uint32_t, unsigned, FpPoly>, std::unique_ptr<ExtensionField>> registry;
  if (!is_prime(p) || p >= (1u << 31)) throw InputError("F_{p^k} requires a prime p < 2^31");
  if (k == 0 || k > kMaxExtensionDegree) throw InputError("extension degree must be in [1, 32]");
  if (modulus.size() != k + 1) throw InputError("modulus must have k + 1 coefficients");
  FpPoly mod(modulus.begin(), modulus.end());
  for (auto& c : mod) c %= p;
  {
    std::lock_guard lock(mutex);
    auto it = registry.find({p, k, mod});
    if (it != registry.end()) return *it->second;
  }
  if (mod.back() != 1) throw InputError("modulus must be monic");
  if (!is_irreducible(p, mod)) throw InputError("modulus is reducible over F_" + std::to_string(p));
  std::lock_guard lock(mutex);
  auto& slot = registry[{p, k, mod}];
  if (!slot) slot.reset(new ExtensionField(p, k, mod));
  return *slot;
}

Fpk ExtensionField::element(std::int64_t v) const { return Fpk(v).bind_to(*this); }

Fpk ExtensionField::from_coeffs(std::span<const std::int64_t> coeffs) const {
  if (coeffs.size() > k_) throw InputError("too many coefficients for " + name());
  Fpk out;
  out.field_ = this;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.coeffs_[i] = static_cast<std::uint32_t>(reduce(coeffs[i], p_));
  }
  return out;
}

Fpk ExtensionField::from_index(std::uint64_t i) const {
  if (i >= size_) throw InputError("element index out of range");
  Fpk out;
  out.field_ = this;
  digits_of(i, p_, std::span(out.coeffs_).first(k_));
  return out;
}

Fpk ExtensionField::generator() const {
  if (k_ == 1) return element(reduce(-static_cast<std::int64_t>(modulus_[0]), p_));
  Fpk out;
  out.field_ = this;
  out.coeffs_[1] = 1;
  return out;
}

FieldSpec ExtensionField::spec() const { return FieldSpec{FieldKind::Extension, p_, k_, modulus_}; }

std::string ExtensionField::name() const { return "F_" + std::to_string(p_) + "^" + std::to_string(k_); }

Fpk Fpk::bind_to(const ExtensionField& field) const {
  if (field_) return *this;
  Fpk out;
  out.field_ = &field;
  out.coeffs_[0] = static_cast<std::uint32_t>(reduce(constant_, field.p_));
  return out;
}

const ExtensionField* Fpk::common(const Fpk& a, const Fpk& b) {
  if (a.field_ && b.field_ && a.field_ != b.field_) {
    throw ArithmeticError("mixed-field operands: " + a.field_->name() + " and " + b.field_->name());
  }
  return a.field_ ? a.field_ : b.field_;
}

std::vector<std::uint32_t> Fpk::coeffs() const {
  if (!field_) throw ArithmeticError("unbound constant has no coefficient vector");
  return {coeffs_.begin(), coeffs_.begin() + field_->k_};
}

std::uint64_t Fpk::index() const {
  if (!field_) throw ArithmeticError("unbound constant has no index");
  std::uint64_t out = 0;
  for (unsigned i = field_->k_; i-- > 0;) out = out * field_->p_ + coeffs_[i];
  return out;
}

bool Fpk::is_zero() const {
  if (!field_) return constant_ == 0;
  return std::all_of(coeffs_.begin(), coeffs_.begin() + field_->k_, [](std::uint32_t c) { return c == 0; });
}

Fpk Fpk::operator-() const {
  if (!field_) return Fpk(checked(-constant_, constant_ == std::numeric_limits<std::int64_t>::min()));
  Fpk out = *this;
  const std::uint32_t p = field_->p_;
  for (unsigned i = 0; i < field_->k_; ++i) out.coeffs_[i] = (p - coeffs_[i]) % p;
  return out;
}

Fpk& Fpk::operator+=(const Fpk& rhs) {
  const ExtensionField* f = common(*this, rhs);
  if (!f) {
    std::int64_t out;
    constant_ = checked(out, __builtin_add_overflow(constant_, rhs.constant_, &out));
    return *this;
  }
  *this = bind_to(*f);
  const Fpk r = rhs.bind_to(*f);
  for (unsigned i = 0; i < f->k_; ++i) {
    coeffs_[i] = static_cast<std::uint32_t>((std::uint64_t{coeffs_[i]} + r.coeffs_[i]) % f->p_);
  }
  return *this;
}

Fpk& Fpk::operator-=(const Fpk& rhs) { return *this += -rhs; }

Fpk& Fpk::operator*=(const Fpk& rhs) {
  const ExtensionField* f = common(*this, rhs);
  if (!f) {
    std::int64_t out;
    constant_ = checked(out, __builtin_mul_overflow(constant_, rhs.constant_, &out));
    return *this;
  }
  const Fpk a = bind_to(*f);
  const Fpk b = rhs.bind_to(*f);
  const unsigned k = f->k_;
  const std::uint32_t p = f->p_;
  std::array<std::uint64_t, 2 * kMaxExtensionDegree> prod{};
  for (unsigned i = 0; i < k; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (unsigned j = 0; j < k; ++j) {
      prod[i + j] = (prod[i + j] + std::uint64_t{a.coeffs_[i]} * b.coeffs_[j]) % p;
    }
  }
  // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
  for (unsigned d = 2 * k - 1; d-- > k;) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (unsigned j = 0; j < k; ++j) {
      prod[d - k + j] = (prod[d - k + j] + (p - c) * f->modulus_[j]) % p;
    }
  }
  field_ = f;
  for (unsigned i = 0; i < k; ++i) coeffs_[i] = static_cast<std::uint32_t>(prod[i]);
  return *this;
}

Fpk& Fpk::operator/=(const Fpk& rhs) {
  const ExtensionField* f = common(*this, rhs);
  return *this *= (f ? rhs.bind_to(*f) : rhs).inverse();
}

Fpk Fpk::inverse() const {
  if (!field_) {
    if (constant_ == 1 || constant_ == -1) return *this;
    if (constant_ == 0) throw ArithmeticError("division by zero");
    throw ArithmeticError("cannot invert an integer constant outside a field");
  }
  if (is_zero()) throw ArithmeticError("division by zero in " + field_->name());
  return pow(field_->size_ - 2);
}

Fpk Fpk::pow(std::uint64_t e) const {
  if (!field_) {
    if (constant_ == 0 || constant_ == 1) return e == 0 ? Fpk(1) : *this;
    if (constant_ == -1) return Fpk(e % 2 == 0 ? 1 : -1);
    throw ArithmeticError("cannot exponentiate an integer constant outside a field");
  }
  Fpk result = field_->element(1);
  Fpk base = *this;
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

bool operator==(const Fpk& a, const Fpk& b) {
  const ExtensionField* f = Fpk::common(a, b);
  if (!f) return a.constant_ == b.constant_;
  const Fpk x = a.bind_to(*f);
  const Fpk y = b.bind_to(*f);
  return std::equal(x.coeffs_.begin(), x.coeffs_.begin() + f->degree(), y.coeffs_.begin());
}

std::ostream& operator<<(std::ostream& os, const Fpk& a) { return os << to_string(a); }

std::string to_string(const Fpk& a) {
  if (!a.bound()) return std::to_string(a.constant());
  std::ostringstream os;
  os << '[';
  const auto cs = a.coeffs();
  for (std::size_t i = 0; i < cs.size(); ++i) os << (i ? "," : "") << cs[i];
  os << ']';
  return os.str();
}

Fp trace(const Fpk& a) {
  if (!a.bound()) throw ArithmeticError("trace of an unbound constant");
  const ExtensionField& f = *a.field();
  Fpk sum = a;
  Fpk conj = a;
  for (unsigned i = 1; i < f.degree(); ++i) {
    conj = conj.pow(f.characteristic());
    sum += conj;
  }
  return Fp(f.base(), sum.coeff(0));
}

int psi(const Fpk& a) {
  if (!a.bound()) throw ArithmeticError("psi of an unbound constant");
  if (a.field()->characteristic() != 2) throw InputError("psi is defined here only for characteristic 2");
  return trace(a).value() == 0 ? 1 : -1;
}

Fpk encode_bits(const ExtensionField& field, std::span<const std::uint8_t> bits) {
  if (field.characteristic() != 2) throw InputError("bit encoding requires a field of characteristic 2");
  if (bits.size() != field.degree()) {
    throw InputError("bit vector of length " + std::to_string(bits.size()) + " for F_2^" +
                     std::to_string(field.degree()));
  }
  std::vector<std::int64_t> coeffs(bits.begin(), bits.end());
  for (auto c : coeffs) {
    if (c > 1) throw InputError("bit vector entries must be 0 or 1");
  }
  return field.from_coeffs(coeffs);
}

std::vector<std::uint8_t> decode_bits(const Fpk& a) {
  if (!a.bound() || a.field()->characteristic() != 2) throw InputError("decode_bits needs an element of F_2^k");
  const auto cs = a.coeffs();
  return {cs.begin(), cs.end()};
}

// ---------------------------------------------------------------------------

FieldSpec parse_field_flag(std::string_view text) {
  auto number = [&](std::string_view part) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw InputError("malformed field descriptor '" + std::string(text) + "'");
    }
    return v;
  };
  if (text == "q" || text == "Q") return FieldSpec{};
  if (text.starts_with("fp:")) {
    FieldSpec spec{FieldKind::Prime, number(text.substr(3)), 1, {}};
    PrimeField::get(spec.p);
    return spec;
  }
  if (text.starts_with("fpk:")) {
    const auto rest = text.substr(4);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw InputError("expected fpk:<p>:<k>");
    return FieldSpec{FieldKind::Extension, number(rest.substr(0, colon)), number(rest.substr(colon + 1)), {}};
  }
  throw InputError("unknown field descriptor '" + std::string(text) + "' (expected q, fp:<p> or fpk:<p>:<k>)");
}

}  // namespace hadamard
