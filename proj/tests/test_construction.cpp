#include "doctest.h"
#include "oracle.hpp"

#include <complex>

#include "csazkp/construction.hpp"
#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/rng.hpp"

using namespace csazkp;

namespace {

AlgElement el(std::initializer_list<long> v) {
  AlgElement x;
  for (long c : v) x.coords.emplace_back(c);
  return x;
}

// Periods eta_i = sum over the i-th coset of the index-p subgroup of
// (Z/q)^*, evaluated numerically from actual roots of unity.
std::vector<double> numeric_periods(unsigned p, unsigned q, unsigned g) {
  std::vector<double> eta(p, 0.0);
  unsigned long power = 1;
  for (unsigned e = 0; e < q - 1; ++e) {
    eta[e % p] += std::cos(2.0 * M_PI * static_cast<double>(power) / q);
    power = power * g % q;
  }
  return eta;
}

unsigned find_generator(unsigned q) {
  for (unsigned g = 2; g < q; ++g) {
    unsigned long x = 1;
    unsigned order = 0;
    do {
      x = x * g % q;
      ++order;
    } while (x != 1);
    if (order == q - 1) return g;
  }
  return 0;
}

RatMatrix matrix_power(const RatMatrix& m, int e) {
  RatMatrix r = RatMatrix::identity(m.rows());
  for (int i = 0; i < e; ++i) r = oracle::mul(r, m);
  return r;
}

}  // namespace

TEST_CASE("cyclic field p=2 is the real quadratic subfield of Q(zeta_5)") {
  const CyclicFieldData f = cyclic_field(2);
  CHECK(f.conductor == 5);
  CHECK(f.field.identity() == el({-1, -1}));  // sum of periods is -1
  CHECK(f.generator_minpoly.to_string() == "t^2 + t - 1");
  CHECK(f.sigma != RatMatrix::identity(2));
  CHECK(matrix_power(f.sigma, 2) == RatMatrix::identity(2));
}

TEST_CASE("cyclic field p=3 has q=7 and an automorphism of order 3") {
  const CyclicFieldData f = cyclic_field(3);
  CHECK(f.conductor == 7);
  CHECK(f.generator_minpoly.to_string() == "t^3 + t^2 - 2*t - 1");
  CHECK(f.sigma != RatMatrix::identity(3));
  CHECK(matrix_power(f.sigma, 3) == RatMatrix::identity(3));
  CHECK(verify_isomorphism(f.field, f.field, Isomorphism{f.sigma}));
}

TEST_CASE("period multiplication tables match numeric roots of unity") {
  for (unsigned p : {2U, 3U, 5U, 7U}) {
    const CyclicFieldData f = cyclic_field(p);
    CAPTURE(p);
    CHECK((f.conductor - 1) % (2 * p) == 0);
    // Smallest prime with that property.
    for (unsigned q = 2; q < f.conductor; ++q) {
      bool prime = q > 1;
      for (unsigned d = 2; d * d <= q; ++d)
        if (q % d == 0) prime = false;
      CHECK_FALSE((prime && (q - 1) % (2 * p) == 0));
    }
    const unsigned g = find_generator(f.conductor);
    const auto eta = numeric_periods(p, f.conductor, g);
    // Match the library's labelling up to rotation: eta_0 is the generator.
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        double lhs = eta[i] * eta[j];
        double rhs = 0;
        for (std::size_t k = 0; k < p; ++k) rhs += f.field.gamma(i, j, k).get_d() * eta[k];
        CHECK(std::fabs(lhs - rhs) < 1e-9);
      }
    CHECK(center_dimension(f.field) == p);
    CHECK(verify_isomorphism(f.field, f.field, Isomorphism{f.sigma}));
    CHECK(matrix_power(f.sigma, static_cast<int>(p)) == RatMatrix::identity(p));
  }
  CHECK_THROWS_AS(cyclic_field(4), UsageError);
  CHECK_THROWS_AS(cyclic_field(11), UsageError);
}

TEST_CASE("period fields have no zero divisors among random samples") {
  Rng rng(41);
  for (unsigned p : {2U, 3U, 5U}) {
    const CyclicFieldData f = cyclic_field(p);
    int failures = 0;
    for (int t = 0; t < 200; ++t) {
      AlgElement x = random_element(f.field, 10, rng);
      if (x == f.field.zero()) continue;
      failures += !invert_element(f.field, x).has_value();
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("Hamilton quaternions from Q(i) with a = -1") {
  const CyclicFieldData qi = quadratic_field(-1);
  const Algebra h = cyclic_algebra(qi, Rational(-1));
  REQUIRE(h.dim() == 4);
  // Basis index i*2 + r for l_r u^i: 1, i, u, iu.
  const AlgElement one = el({1, 0, 0, 0}), i = el({0, 1, 0, 0}), u = el({0, 0, 1, 0}), iu = el({0, 0, 0, 1});
  CHECK(h.identity() == one);
  const AlgElement minus_one = el({-1, 0, 0, 0});
  CHECK(multiply(h, i, i) == minus_one);
  CHECK(multiply(h, u, u) == minus_one);
  CHECK(multiply(h, iu, iu) == minus_one);
  CHECK(multiply(h, i, u) == iu);
  CHECK(multiply(h, u, i) == scale(Rational(-1), iu));
  CHECK(center_dimension(h) == 1);
  Rng rng(42);
  for (int t = 0; t < 200; ++t) {
    const AlgElement x = random_element(h, 20, rng);
    if (x == h.zero()) continue;
    CHECK(invert_element(h, x).has_value());
  }
}

TEST_CASE("split algebra a = 1 has the zero divisor (1+u)(1-u)") {
  const Algebra s = cyclic_algebra(quadratic_field(-1), Rational(1));
  const AlgElement a = el({1, 0, 1, 0}), b = el({1, 0, -1, 0});
  CHECK(multiply(s, a, b) == s.zero());
  CHECK(oracle::product(s, a, b) == s.zero());
  CHECK(center_dimension(s) == 1);
  CHECK_THROWS_AS(cyclic_algebra(quadratic_field(-1), Rational(0)), UsageError);
  CHECK_THROWS_AS(quadratic_field(4), UsageError);
}

TEST_CASE("cubic cyclic algebra: central, and generic minimal polynomials are irreducible") {
  const CyclicFieldData f = cyclic_field(3);
  Rng rng(43);
  for (long a : {2L, 3L, 5L, 12345L}) {
    const Algebra d = cyclic_algebra(f, Rational(a));
    CHECK(d.dim() == 9);
    CHECK(center_dimension(d) == 1);
  }
  const Algebra d = cyclic_algebra(f, Rational(2));
  int checked = 0;
  while (checked < 50) {
    const AlgElement x = random_element(d, 5, rng);
    const Polynomial mp = minimal_polynomial(d, x);
    if (mp.degree() == 1) continue;
    CHECK(mp.degree() == 3);
    CHECK_FALSE(oracle::has_rational_root(mp));
    ++checked;
  }
}

TEST_CASE("rational root oracle sanity") {
  CHECK(oracle::has_rational_root(Polynomial(RatVector{Rational(-8), Rational(0), Rational(0), Rational(1)})));
  CHECK_FALSE(oracle::has_rational_root(Polynomial(RatVector{Rational(-2), Rational(0), Rational(0), Rational(1)})));
  CHECK(oracle::has_rational_root(Polynomial(RatVector{make_rational(-1, 3), Rational(1)})));
  CHECK_FALSE(oracle::has_rational_root(Polynomial(RatVector{Rational(-1), Rational(-2), Rational(1), Rational(1)})));
}

TEST_CASE("division algebras from tensor products") {
  Rng rng(44);
  CHECK(build_division_algebra(1, rng).dim() == 1);
  const Algebra q = build_division_algebra(2, rng);
  CHECK(q.dim() == 4);
  CHECK(center_dimension(q) == 1);
  int failures = 0;
  for (int t = 0; t < 300; ++t) {
    const AlgElement x = random_element(q, 10, rng);
    if (x == q.zero()) continue;
    failures += !invert_element(q, x).has_value();
  }
  CHECK(failures == 0);
  const Algebra d6 = build_division_algebra(6, rng);
  CHECK(d6.dim() == 36);
  CHECK(center_dimension(d6) == 1);
  CHECK_THROWS_AS(build_division_algebra(4, rng), UsageError);
}

TEST_CASE("quaternions tensor quaternions split") {
  // H (x) H is M4(Q); random sampling finds an element whose minimal
  // polynomial has a rational root, which yields an explicit zero divisor.
  const Algebra h = cyclic_algebra(quadratic_field(-1), Rational(-1));
  const Algebra hh = tensor_product(h, h);
  Rng rng(45);
  bool found = false;
  for (int t = 0; t < 200 && !found; ++t) {
    const AlgElement x = random_element(hh, 2, rng);
    const Polynomial f = minimal_polynomial(hh, x);
    for (long r = -8; r <= 8 && !found; ++r) {
      if (f.evaluate(Rational(r)) != 0) continue;
      const Polynomial g = divmod(f, Polynomial(RatVector{Rational(-r), Rational(1)})).first;
      const AlgElement left = add(x, scale(Rational(-r), hh.identity()));
      const AlgElement right = evaluate(hh, g, x);
      if (left == hh.zero() || right == hh.zero()) continue;
      CHECK(oracle::product(hh, left, right) == hh.zero());
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("matrix presentations") {
  const auto forced = matrix_presentation(2, [] { return matrix_units(2); });
  RatVector g(64);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t l = 0; l < 2; ++l)
        for (std::size_t n = 0; n < 2; ++n)
          if (j == l) g[((i * 2 + j) * 4 + (l * 2 + n)) * 4 + (i * 2 + n)] = 1;
  CHECK(forced.algebra.structure_constants() == g);
  CHECK(forced.attempts == 1);

  int calls = 0;
  const auto retried = matrix_presentation(2, [&] {
    ++calls;
    auto b = matrix_units(2);
    if (calls == 1) b[3] = b[0];  // dependent
    return b;
  });
  CHECK(retried.attempts == 2);
  CHECK_THROWS_AS(matrix_presentation(
                      2, [] { return std::vector<RatMatrix>(4, RatMatrix::identity(2)); }, 5),
                  RandomnessError);

  Rng r1(46), r2(46);
  const auto p1 = random_matrix_presentation(2, 5, r1);
  const auto p2 = random_matrix_presentation(2, 5, r2);
  CHECK(p1.algebra == p2.algebra);
  CHECK(new_algebra(p1.algebra.data()) == p1.algebra);
  // The model basis really multiplies like the structure constants say.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      RatMatrix expect(2, 2);
      for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t e = 0; e < 4; ++e)
          expect(e / 2, e % 2) += p1.algebra.gamma(i, j, k) * p1.model_basis[k](e / 2, e % 2);
      CHECK(oracle::mul(p1.model_basis[i], p1.model_basis[j]) == expect);
    }
}

TEST_CASE("keygen over seeds and variants") {
  for (Variant v : {Variant::matrix, Variant::division, Variant::order}) {
    for (unsigned k : {2U, 3U}) {
      for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Rng rng(1000 + seed);
        const KeyPair key = keygen(KeygenParams{v, k, 5, 16, true}, rng);
        CAPTURE(to_string(v));
        CAPTURE(k);
        CHECK(key.pub.a0.dim() == k * k);
        CHECK(verify_isomorphism(key.pub.a0, key.pub.a1, key.secret_phi));
        CHECK_FALSE(key.pub.a0 == key.pub.a1);
        REQUIRE(key.pub.public_element);
        CHECK(minimal_polynomial(key.pub.a1, *key.pub.public_element).degree() == static_cast<int>(k));
        CHECK(center_dimension(key.pub.a0) == 1);
        if (v == Variant::order) {
          CHECK(key.pub.a0.is_integral());
          CHECK(key.pub.a1.is_integral());
          REQUIRE(key.pub.order);
          CHECK(key.secret_phi.matrix.is_integral());
          for (const Rational& e : key.secret_phi.matrix.entries()) CHECK(abs(e) <= key.pub.order->bound);
        }
      }
    }
  }
  Rng rng(47);
  CHECK_THROWS_AS(keygen(KeygenParams{Variant::matrix, 1, 5, 16, true}, rng), UsageError);
  CHECK_THROWS_AS(keygen(KeygenParams{Variant::division, 4, 5, 16, true}, rng), UsageError);
  CHECK(is_squarefree(6));
  CHECK_FALSE(is_squarefree(12));
  CHECK(parse_variant("order") == Variant::order);
  CHECK_FALSE(parse_variant("Order"));
}
