#pragma once

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace hadamard {

struct FieldSpec;
class Fp;

/// The prime field F_p for a prime p < 2^31.
///
/// Instances are interned: get(p) always returns the same object, which lives
/// for the rest of the process. Elements refer to their field by address, so
/// two elements belong to the same field exactly when their field pointers
/// agree.
class PrimeField {
 public:
  using Element = Fp;

  static const PrimeField& get(std::uint32_t p);

  std::uint32_t characteristic() const { return p_; }
  std::uint64_t size() const { return p_; }

  Fp element(std::int64_t v) const;
  /// The element with canonical representative i, for i < size().
  Fp from_index(std::uint64_t i) const;

  FieldSpec spec() const;
  std::string name() const;

  PrimeField(const PrimeField&) = delete;
  PrimeField& operator=(const PrimeField&) = delete;

 private:
  explicit PrimeField(std::uint32_t p) : p_(p) {}
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// An element of some F_p.
///
/// An element is either bound to a field, holding a residue in [0, p), or an
/// unbound integer constant. Unbound constants exist so that `Fp(0)` and
/// `Fp(1)` can be written without a field at hand (Eigen builds zeros and
/// identities that way); they adopt the field of the other operand in any
/// mixed expression.
class Fp {
 public:
  Fp() = default;
  template <std::integral I>
  Fp(I v) : value_(static_cast<std::int64_t>(v)) {}  // NOLINT(google-explicit-constructor)
  Fp(const PrimeField& field, std::int64_t v);

  const PrimeField* field() const { return field_; }
  bool bound() const { return field_ != nullptr; }
  /// Residue in [0, p) for bound elements, the raw integer otherwise.
  std::int64_t value() const { return value_; }

  bool is_zero() const { return value_ == 0; }

  Fp operator-() const;
  Fp& operator+=(const Fp& rhs);
  Fp& operator-=(const Fp& rhs);
  Fp& operator*=(const Fp& rhs);
  Fp& operator/=(const Fp& rhs);

  Fp inverse() const;
  Fp pow(std::uint64_t e) const;

  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  friend Fp operator/(Fp a, const Fp& b) { return a /= b; }
  friend bool operator==(const Fp& a, const Fp& b);

 private:
  const PrimeField* field_ = nullptr;
  std::int64_t value_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Fp& a);
std::string to_string(const Fp& a);

}  // namespace hadamard
