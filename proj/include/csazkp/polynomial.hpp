#pragma once

#include <string>
#include <utility>

#include "csazkp/rational.hpp"

namespace csazkp {

/// Univariate polynomial over the rationals, lowest degree first. Trailing
/// zero coefficients are never stored, so equality is structural.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(RatVector coefficients);

  static Polynomial monomial(std::size_t degree, const Rational& coefficient = 1);

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const;
  const RatVector& coefficients() const noexcept { return coeffs_; }
  Rational coefficient(std::size_t i) const;
  const Rational& leading() const { return coeffs_.back(); }

  Rational evaluate(const Rational& t) const;
  Polynomial derivative() const;
  /// e.g. "t^2 - t"
  std::string to_string(char variable = 't') const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Rational& c, const Polynomial& p);

 private:
  void trim();
  RatVector coeffs_;
};

/// Euclidean division; throws UsageError on a zero divisor.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);
Polynomial make_monic(const Polynomial& p);

}  // namespace csazkp
