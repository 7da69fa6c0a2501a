#include "doctest.h"
#include "oracle.hpp"

#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/matrix.hpp"
#include "csazkp/polynomial.hpp"
#include "csazkp/rational.hpp"

using namespace csazkp;

namespace {

RatMatrix mat(std::size_t r, std::size_t c, std::initializer_list<long> v) {
  RatVector e;
  for (long x : v) e.emplace_back(x);
  return RatMatrix(r, c, e);
}

Rational q(long n, long d) { return make_rational(n, d); }

}  // namespace

TEST_CASE("rational text form is canonical") {
  CHECK(to_string(q(1, 2)) == "1/2");
  CHECK(to_string(Rational(-3)) == "-3/1");
  CHECK(to_string(Rational(0)) == "0/1");
  CHECK(to_string(q(6, -4)) == "-3/2");
  CHECK(parse_rational("-3/2") == q(-3, 2));
  for (const char* bad : {"2/4", "1/0", "+1/2", "01/2", "1/-2", "-0/1", "1/2 ", "1", "", "1//2", "a/b", "1/02"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), DecodeError);
  }
}

TEST_CASE("solve_linear on the spec systems") {
  const RatVector b{Rational(3), q(1, 2)};
  auto x = solve_linear(RatMatrix::identity(2), b);
  REQUIRE(x);
  CHECK(*x == b);
  CHECK_FALSE(solve_linear(mat(2, 2, {1, 1, 2, 2}), RatVector{Rational(1), Rational(3)}));
  CHECK_THROWS_AS(solve_linear(RatMatrix::identity(2), RatVector{Rational(1)}), UsageError);
}

TEST_CASE("solve_linear underdetermined gives free variables zero") {
  // x + 2y + 3z = 6 -> pivot on x, y = z = 0.
  auto x = solve_linear(mat(1, 3, {1, 2, 3}), RatVector{Rational(6)});
  REQUIRE(x);
  CHECK(*x == RatVector{Rational(6), Rational(0), Rational(0)});
  // First column zero: pivot moves to y.
  auto y = solve_linear(mat(2, 3, {0, 2, 1, 0, 4, 3}), RatVector{Rational(2), Rational(6)});
  REQUIRE(y);
  CHECK(oracle::mul(mat(2, 3, {0, 2, 1, 0, 4, 3}), *y) == RatVector{Rational(2), Rational(6)});
  CHECK((*y)[0] == 0);
}

TEST_CASE("solve_linear multiply-back on random invertible 5x5 systems") {
  Rng rng(11);
  int tested = 0;
  while (tested < 50) {
    RatMatrix a = oracle::random_matrix(5, 5, 9, rng);
    if (oracle::det(a) == 0) continue;
    const RatVector b = oracle::random_vector(5, 9, rng);
    auto x = solve_linear(a, b);
    REQUIRE(x);
    CHECK(oracle::mul(a, *x) == b);
    ++tested;
  }
}

TEST_CASE("solve_linear rejects inconsistent random systems") {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    // Rank-2 4x3 matrix: third column = first + second.
    RatMatrix a = oracle::random_matrix(4, 3, 5, rng);
    for (std::size_t i = 0; i < 4; ++i) a(i, 2) = a(i, 0) + a(i, 1);
    RatMatrix aug(4, 4);
    RatVector b = oracle::random_vector(4, 7, rng);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) aug(i, j) = a(i, j);
      aug(i, 3) = b[i];
    }
    const bool consistent = oracle::rank(aug) == oracle::rank(a);
    auto x = solve_linear(a, b);
    CHECK(x.has_value() == consistent);
    if (x) CHECK(oracle::mul(a, *x) == b);
  }
}

TEST_CASE("invert_matrix examples and multiply-back") {
  CHECK(*invert_matrix(RatMatrix::identity(3)) == RatMatrix::identity(3));
  const RatMatrix swap = mat(2, 2, {0, 1, 1, 0});
  CHECK(*invert_matrix(swap) == swap);
  CHECK_FALSE(invert_matrix(mat(2, 2, {1, 2, 2, 4})));
  CHECK_THROWS_AS(invert_matrix(RatMatrix(2, 3)), UsageError);
  Rng rng(13);
  int tested = 0;
  while (tested < 50) {
    RatMatrix a = oracle::random_matrix(4, 4, 6, rng);
    const bool singular = oracle::det(a) == 0;
    auto inv = invert_matrix(a);
    CHECK(inv.has_value() == !singular);
    if (singular) continue;
    CHECK(oracle::mul(a, *inv) == RatMatrix::identity(4));
    CHECK(oracle::mul(*inv, a) == RatMatrix::identity(4));
    ++tested;
  }
}

TEST_CASE("kernel_basis examples and rank-nullity") {
  CHECK(kernel_basis(RatMatrix::identity(2)).empty());
  const auto k = kernel_basis(mat(2, 2, {1, 1, 1, 1}));
  REQUIRE(k.size() == 1);
  CHECK(k[0] == RatVector{Rational(1), Rational(-1)});
  Rng rng(14);
  for (int t = 0; t < 100; ++t) {
    // Random 6x4 with a forced dependency between columns.
    RatMatrix a = oracle::random_matrix(6, 4, 4, rng);
    const long c1 = rng.uniform_int(-3, 3);
    const long c2 = rng.uniform_int(-3, 3);
    for (std::size_t i = 0; i < 6; ++i) a(i, 3) = c1 * a(i, 0) + c2 * a(i, 1);
    if (t % 3 == 0)
      for (std::size_t i = 0; i < 6; ++i) a(i, 2) = a(i, 1);
    const std::size_t r = oracle::rank(a);
    CHECK(rank(a) == r);
    const auto basis = kernel_basis(a);
    CHECK(basis.size() == 4 - r);
    for (const auto& v : basis) {
      CHECK(oracle::mul(a, v) == RatVector(6));
      // Pivot-normalized: first nonzero entry is 1.
      auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
      REQUIRE(it != v.end());
      CHECK(*it == 1);
    }
    if (!basis.empty()) {
      RatMatrix kb = RatMatrix::from_columns(basis);
      CHECK(oracle::rank(kb) == basis.size());
    }
  }
}

TEST_CASE("determinant agrees with elimination oracle") {
  Rng rng(15);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = 1 + t % 6;
    RatMatrix a = oracle::random_matrix(n, n, 3, rng);
    if (t % 5 == 0) {
      for (std::size_t i = 0; i < n; ++i) a(i, 0) = 0;
    }
    CHECK(determinant(a) == oracle::det(a));
  }
}

TEST_CASE("matrix products match the naive oracle") {
  Rng rng(16);
  for (int t = 0; t < 40; ++t) {
    RatMatrix a(3, 4), b(4, 2);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j) a(i, j) = oracle::random_vector(1, 20, rng)[0];
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) b(i, j) = oracle::random_vector(1, 20, rng)[0];
    CHECK(a * b == oracle::mul(a, b));
    const RatVector x = oracle::random_vector(4, 20, rng);
    CHECK(a * x == oracle::mul(a, x));
  }
}

TEST_CASE("polynomial arithmetic") {
  const Polynomial p(RatVector{Rational(-1), Rational(0), Rational(1)});  // t^2 - 1
  const Polynomial d(RatVector{Rational(-1), Rational(1)});               // t - 1
  auto [quot, rem] = divmod(p, d);
  CHECK(rem.is_zero());
  CHECK(quot == Polynomial(RatVector{Rational(1), Rational(1)}));
  CHECK(p.to_string() == "t^2 - 1");
  CHECK(Polynomial(RatVector{Rational(0), Rational(-1), Rational(1)}).to_string() == "t^2 - t");
  CHECK(Polynomial::monomial(2).to_string() == "t^2");
  CHECK(make_monic(Polynomial(RatVector{Rational(2), Rational(4)})) == Polynomial(RatVector{q(1, 2), Rational(1)}));
  CHECK(p.evaluate(Rational(3)) == 8);
  CHECK(Polynomial().degree() == -1);
}
