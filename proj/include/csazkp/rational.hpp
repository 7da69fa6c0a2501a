#pragma once

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csazkp {

// GMP keeps mpq_class values canonical (positive denominator, reduced) after
// every arithmetic operation; constructors from two integers must call
// canonicalize(), which make_rational() does.
using Integer = mpz_class;
using Rational = mpq_class;
using RatVector = std::vector<Rational>;

Rational make_rational(const Integer& num, const Integer& den);

/// "num/den" with the sign on the numerator only; zero is "0/1".
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Strict inverse of to_string: rejects unreduced fractions, "+", leading
/// zeros, zero or negative denominators and any surrounding bytes.
/// Throws DecodeError(syntax) with offsets relative to `text`.
Rational parse_rational(std::string_view text);

/// Strict decimal integer ("0", "-12", never "-0" or "007").
bool parse_integer(std::string_view text, Integer& out);

bool is_integral(const Rational& q);

/// lcm of all denominators (1 for an empty range).
Integer denominator_lcm(std::span<const Rational> values);

/// A vector of rationals over one common positive denominator.
struct ScaledVector {
  std::vector<Integer> num;
  Integer den{1};
};

ScaledVector to_scaled(std::span<const Rational> values);
RatVector from_scaled(std::span<const Integer> num, const Integer& den);

bool is_zero_vector(std::span<const Rational> v);

}  // namespace csazkp
