#pragma once

#include "hadamard/prime_field.hpp"

#include <array>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hadamard {

class Fpk;

inline constexpr unsigned kMaxExtensionDegree = 32;

/// Monic polynomial over F_p, coefficients low degree first.
using FpPoly = std::vector<std::uint32_t>;

/// Smallest monic irreducible polynomial of degree k over F_p. Candidates are
/// ordered by reading the non-leading coefficients as base-p digits with the
/// constant term least significant, so (2, 3) yields x^3 + x + 1.
FpPoly find_irreducible(std::uint32_t p, unsigned k);

/// Exhaustive trial division by every monic polynomial of degree 1..k/2.
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> monic);

/// F_{p^k} = F_p[x] / (modulus), polynomial basis. Interned like PrimeField.
class ExtensionField {
 public:
  using Element = Fpk;

  /// Uses find_irreducible(p, k) as the modulus.
  static const ExtensionField& get(std::uint32_t p, unsigned k);
  /// Verifies that modulus is monic of degree k and irreducible.
  static const ExtensionField& get(std::uint32_t p, unsigned k, std::span<const std::uint32_t> modulus);

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::uint64_t size() const { return size_; }
  const FpPoly& modulus() const { return modulus_; }
  const PrimeField& base() const { return *base_; }

  Fpk element(std::int64_t v) const;
  Fpk from_coeffs(std::span<const std::int64_t> coeffs) const;
  /// Digits of i in base p are the coefficients, constant term first.
  Fpk from_index(std::uint64_t i) const;
  /// The class of x.
  Fpk generator() const;

  FieldSpec spec() const;
  std::string name() const;

  ExtensionField(const ExtensionField&) = delete;
  ExtensionField& operator=(const ExtensionField&) = delete;

 private:
  ExtensionField(std::uint32_t p, unsigned k, FpPoly modulus);
  friend class Fpk;

  std::uint32_t p_;
  unsigned k_;
  std::uint64_t size_;
  FpPoly modulus_;
  const PrimeField* base_;
};

/// An element of some F_{p^k}; unbound integer constants behave as in Fp.
class Fpk {
 public:
  Fpk() = default;
  template <std::integral I>
  Fpk(I v) : constant_(static_cast<std::int64_t>(v)) {}  // NOLINT(google-explicit-constructor)

  const ExtensionField* field() const { return field_; }
  bool bound() const { return field_ != nullptr; }
  /// The integer value of an unbound constant.
  std::int64_t constant() const { return constant_; }
  /// Coefficient of x^i; requires a bound element.
  std::uint32_t coeff(unsigned i) const { return coeffs_[i]; }
  std::vector<std::uint32_t> coeffs() const;
  /// Inverse of ExtensionField::from_index.
  std::uint64_t index() const;

  bool is_zero() const;

  Fpk operator-() const;
  Fpk& operator+=(const Fpk& rhs);
  Fpk& operator-=(const Fpk& rhs);
  Fpk& operator*=(const Fpk& rhs);
  Fpk& operator/=(const Fpk& rhs);

  Fpk inverse() const;
  Fpk pow(std::uint64_t e) const;

  friend Fpk operator+(Fpk a, const Fpk& b) { return a += b; }
  friend Fpk operator-(Fpk a, const Fpk& b) { return a -= b; }
  friend Fpk operator*(Fpk a, const Fpk& b) { return a *= b; }
  friend Fpk operator/(Fpk a, const Fpk& b) { return a /= b; }
  friend bool operator==(const Fpk& a, const Fpk& b);

 private:
  friend class ExtensionField;
  Fpk bind_to(const ExtensionField& field) const;
  static const ExtensionField* common(const Fpk& a, const Fpk& b);

  const ExtensionField* field_ = nullptr;
  std::int64_t constant_ = 0;  // only meaningful when unbound
  std::array<std::uint32_t, kMaxExtensionDegree> coeffs_{};
};

std::ostream& operator<<(std::ostream& os, const Fpk& a);
std::string to_string(const Fpk& a);

/// a + a^p + ... + a^{p^{k-1}}, as an element of the prime subfield.
Fp trace(const Fpk& a);

/// The trace character (-1)^{Tr(a)}; requires characteristic 2.
int psi(const Fpk& a);

/// Bit vector of length k to the element with those coefficients in F_{2^k}.
Fpk encode_bits(const ExtensionField& field, std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> decode_bits(const Fpk& a);

}  // namespace hadamard
