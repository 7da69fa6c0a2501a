#include "csazkp/rational.hpp"

#include "csazkp/errors.hpp"

namespace csazkp {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) {
    throw UsageError("rational with zero denominator");
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(10); }

std::string to_string(const Rational& q) {
  return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

bool parse_integer(std::string_view text, Integer& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && text[i] == '-') {
    negative = true;
    ++i;
  }
  if (i == text.size()) return false;
  if (text[i] == '0' && (negative || i + 1 != text.size())) return false;
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') return false;
  }
  out.set_str(std::string(text.substr(i)), 10);
  if (negative) out = -out;
  return true;
}

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw DecodeError(DecodeError::Kind::syntax, 0, "rational without '/'");
  }
  Integer num;
  Integer den;
  if (!parse_integer(text.substr(0, slash), num)) {
    throw DecodeError(DecodeError::Kind::syntax, 0, "malformed numerator");
  }
  if (!parse_integer(text.substr(slash + 1), den) || den <= 0) {
    throw DecodeError(DecodeError::Kind::syntax, slash + 1, "malformed denominator");
  }
  Integer g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) {
    throw DecodeError(DecodeError::Kind::syntax, 0, "non-canonical (unreduced) rational");
  }
  return Rational(num, den);
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

Integer denominator_lcm(std::span<const Rational> values) {
  Integer l = 1;
  for (const auto& v : values) {
    if (v.get_den() != 1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
  }
  return l;
}

ScaledVector to_scaled(std::span<const Rational> values) {
  ScaledVector out;
  out.den = denominator_lcm(values);
  out.num.resize(values.size());
  Integer factor;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (sgn(values[i]) == 0) continue;
    mpz_divexact(factor.get_mpz_t(), out.den.get_mpz_t(), values[i].get_den_mpz_t());
    out.num[i] = values[i].get_num() * factor;
  }
  return out;
}

RatVector from_scaled(std::span<const Integer> num, const Integer& den) {
  RatVector out(num.size());
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (sgn(num[i]) == 0) continue;
    out[i] = make_rational(num[i], den);
  }
  return out;
}

bool is_zero_vector(std::span<const Rational> v) {
  for (const auto& x : v) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

}  // namespace csazkp
