#pragma once

// Umbrella for the three scalar kinds. Every templated container in the
// library is parameterized on one of Rational, Fp, Fpk and takes the matching
// field object (RationalField, PrimeField, ExtensionField) only where it needs
// to manufacture elements (parsing, random sampling, lifting integers).

#include "hadamard/error.hpp"
#include "hadamard/extension_field.hpp"
#include "hadamard/prime_field.hpp"
#include "hadamard/rational.hpp"

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hadamard {

enum class FieldKind { Rational, Prime, Extension };

/// Serializable description of a field. An empty modulus for Extension means
/// "the default irreducible from find_irreducible".
struct FieldSpec {
  FieldKind kind = FieldKind::Rational;
  std::uint32_t p = 0;
  unsigned k = 0;
  std::vector<std::uint32_t> modulus;

  bool operator==(const FieldSpec&) const = default;
};

/// Parses the command-line form: q | fp:<p> | fpk:<p>:<k>.
FieldSpec parse_field_flag(std::string_view text);

template <class S>
concept Scalar = std::same_as<S, Rational> || std::same_as<S, Fp> || std::same_as<S, Fpk>;

template <class S>
struct field_of;
template <>
struct field_of<Rational> {
  using type = RationalField;
};
template <>
struct field_of<Fp> {
  using type = PrimeField;
};
template <>
struct field_of<Fpk> {
  using type = ExtensionField;
};
template <class S>
using FieldOf = typename field_of<S>::type;

inline bool is_zero(const Rational& q) { return q.is_zero(); }
inline bool is_zero(const Fp& a) { return a.is_zero(); }
inline bool is_zero(const Fpk& a) { return a.is_zero(); }

inline bool is_finite(const RationalField&) { return false; }
inline bool is_finite(const PrimeField&) { return true; }
inline bool is_finite(const ExtensionField&) { return true; }

/// Calls fn with the (interned) field object described by spec.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& fn) {
  switch (spec.kind) {
    case FieldKind::Prime:
      return fn(PrimeField::get(spec.p));
    case FieldKind::Extension:
      if (spec.modulus.empty()) return fn(ExtensionField::get(spec.p, spec.k));
      return fn(ExtensionField::get(spec.p, spec.k, spec.modulus));
    case FieldKind::Rational:
      break;
  }
  return fn(RationalField{});
}

}  // namespace hadamard

namespace Eigen {

template <>
struct NumTraits<hadamard::Fp> : GenericNumTraits<hadamard::Fp> {
  using Real = hadamard::Fp;
  using NonInteger = hadamard::Fp;
  using Literal = hadamard::Fp;
  using Nested = hadamard::Fp;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 4
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

template <>
struct NumTraits<hadamard::Fpk> : GenericNumTraits<hadamard::Fpk> {
  using Real = hadamard::Fpk;
  using NonInteger = hadamard::Fpk;
  using Literal = hadamard::Fpk;
  using Nested = hadamard::Fpk;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 64
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
