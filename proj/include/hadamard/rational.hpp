#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace hadamard {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

struct FieldSpec;

/// Parses "a" or "a/b" (optional sign on a). Throws InputError on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text: "a" when the denominator is 1, otherwise "a/b".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// The field of rationals. Stateless; exists so generic code can treat all
/// fields uniformly.
class RationalField {
 public:
  using Element = Rational;

  Rational element(std::int64_t v) const { return Rational(v); }
  FieldSpec spec() const;
  std::string name() const { return "Q"; }
  bool operator==(const RationalField&) const = default;
};

}  // namespace hadamard
