#include "doctest.h"
#include "oracle.hpp"

#include "csazkp/algebra.hpp"
#include "csazkp/errors.hpp"
#include "csazkp/linalg.hpp"
#include "csazkp/rng.hpp"

using namespace csazkp;

namespace {

// e_ij e_kl = delta_jk e_il, basis index i*k + j; built here, not by the library.
RatVector matrix_unit_gamma(std::size_t k) {
  const std::size_t m = k * k;
  RatVector g(m * m * m);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l)
        for (std::size_t n = 0; n < k; ++n)
          if (j == l) g[((i * k + j) * m + (l * k + n)) * m + (i * k + n)] = 1;
  return g;
}

Algebra units(std::size_t k) { return new_algebra(k * k, matrix_unit_gamma(k)); }

AlgElement el(std::initializer_list<long> v) {
  AlgElement x;
  for (long c : v) x.coords.emplace_back(c);
  return x;
}

RatMatrix as_matrix(const AlgElement& x, std::size_t k) { return RatMatrix(k, k, x.coords); }

AlgElement random_rational_element(std::size_t m, Rng& rng) { return AlgElement{oracle::random_vector(m, 7, rng)}; }

Isomorphism random_iso_from(const Algebra& a, Rng& rng, Algebra& target) {
  Presentation p = random_presentation(a, 4, rng);
  target = p.algebra;
  return p.iso;
}

}  // namespace

TEST_CASE("matrix units are accepted with identity (1,0,0,1)") {
  const Algebra a = units(2);
  CHECK(a.identity() == el({1, 0, 0, 1}));
  CHECK(is_associative(a.data()));
}

TEST_CASE("perturbed matrix units fail associativity") {
  RatVector g = matrix_unit_gamma(2);
  g[(1 * 4 + 2) * 4 + 0] += 1;  // e12 e21 now has an extra e11
  CHECK_THROWS_AS(new_algebra(4, g), StructuralError);
  CHECK_FALSE(is_associative(AlgebraData{4, g}));
  try {
    new_algebra(4, g);
  } catch (const StructuralError& e) {
    CHECK(std::string(e.what()).find("(i,j,k,l)") != std::string::npos);
  }
}

TEST_CASE("algebra without identity is rejected") {
  // Zero multiplication is associative but has no unit.
  CHECK_THROWS_AS(new_algebra(2, RatVector(8)), StructuralError);
  CHECK_THROWS_AS(new_algebra(2, RatVector(7)), UsageError);
}

TEST_CASE("identity is solved, not read from a fixed coordinate") {
  // Q x Q with b0 b0 = b0/2, b1 b1 = b1/3: identity 2 b0 + 3 b1.
  RatVector g(8);
  g[0] = make_rational(1, 2);
  g[(1 * 2 + 1) * 2 + 1] = make_rational(1, 3);
  const Algebra a = new_algebra(2, g);
  CHECK(a.identity() == el({2, 3}));
}

TEST_CASE("multiply agrees with literal matrix products") {
  const Algebra a2 = units(2);
  CHECK(multiply(a2, el({0, 1, 0, 0}), el({0, 0, 1, 0})) == el({1, 0, 0, 0}));
  Rng rng(21);
  for (std::size_t k : {2U, 3U, 4U}) {
    const Algebra a = units(k);
    for (int t = 0; t < 20; ++t) {
      const AlgElement x = random_rational_element(k * k, rng);
      const AlgElement y = random_rational_element(k * k, rng);
      CHECK(multiply(a, a.identity(), x) == x);
      const RatMatrix xy = oracle::mul(as_matrix(x, k), as_matrix(y, k));
      CHECK(multiply(a, x, y).coords == xy.entries());
    }
  }
}

TEST_CASE("regular representation") {
  const Algebra a = units(2);
  CHECK(regular_representation(a, a.identity()) == RatMatrix::identity(4));
  CHECK(regular_representation(a, a.zero()) == RatMatrix(4, 4));
  Rng rng(22);
  Algebra b = a;
  random_iso_from(a, rng, b);
  for (int t = 0; t < 20; ++t) {
    const AlgElement x = random_rational_element(4, rng);
    const AlgElement y = random_rational_element(4, rng);
    CHECK(regular_representation(b, x) == oracle::left_matrix(b, x));
    CHECK(regular_representation(b, multiply(b, x, y)) ==
          oracle::mul(regular_representation(b, x), regular_representation(b, y)));
  }
}

TEST_CASE("minimal polynomial examples") {
  const Algebra a = units(2);
  CHECK(minimal_polynomial(a, a.identity()).to_string() == "t - 1");
  CHECK(minimal_polynomial(a, el({1, 0, 0, 0})).to_string() == "t^2 - t");
  CHECK(minimal_polynomial(a, el({0, 1, 0, 0})).to_string() == "t^2");
  CHECK(minimal_polynomial(a, a.zero()).to_string() == "t");
}

TEST_CASE("minimal polynomial against the characteristic polynomial oracle") {
  Rng rng(23);
  for (std::size_t k : {2U, 3U}) {
    Algebra b = units(k);
    random_iso_from(units(k), rng, b);
    for (int t = 0; t < 60; ++t) {
      AlgElement x = random_element(b, 6, rng);
      if (t % 10 == 0) x = scale(Rational(3), b.identity());
      const Polynomial f = minimal_polynomial(b, x);
      CHECK(f.is_monic());
      CHECK(f.degree() <= static_cast<int>(k));
      CHECK(oracle::is_zero(oracle::evaluate(b, f, x)));
      CHECK(oracle::remainder(oracle::charpoly(oracle::left_matrix(b, x)), f).is_zero());
      CHECK(oracle::krylov_rank(b, x, static_cast<std::size_t>(f.degree())) == static_cast<std::size_t>(f.degree()));
      CHECK(evaluate(b, f, x) == b.zero());
    }
  }
}

TEST_CASE("invert_element") {
  const Algebra a = units(2);
  auto half = invert_element(a, scale(Rational(2), a.identity()));
  REQUIRE(half);
  CHECK(*half == scale(make_rational(1, 2), a.identity()));
  CHECK_FALSE(invert_element(a, el({0, 1, 0, 0})));
  Rng rng(24);
  Algebra b = a;
  random_iso_from(units(3), rng, b);
  for (int t = 0; t < 40; ++t) {
    AlgElement x = random_element(b, 2, rng);
    if (t % 4 == 0) x = apply(Isomorphism{RatMatrix::identity(9)}, b.zero());
    auto y = invert_element(b, x);
    CHECK(y.has_value() == invert_matrix(oracle::left_matrix(b, x)).has_value());
    if (y) {
      CHECK(oracle::product(b, x, *y) == b.identity());
      CHECK(oracle::product(b, *y, x) == b.identity());
    }
  }
}

TEST_CASE("change_basis") {
  const Algebra a = units(2);
  const Presentation same = change_basis(a, RatMatrix::identity(4));
  CHECK(same.algebra == a);
  CHECK(same.iso == Isomorphism::identity(4));

  // Swap b1 and b2: gamma'_{ijk} = gamma_{pi(i) pi(j) pi(k)}.
  RatMatrix perm = RatMatrix::identity(4);
  perm(1, 1) = perm(2, 2) = 0;
  perm(1, 2) = perm(2, 1) = 1;
  const Presentation swapped = change_basis(a, perm);
  const std::size_t pi[4] = {0, 2, 1, 3};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) CHECK(swapped.algebra.gamma(i, j, k) == a.gamma(pi[i], pi[j], pi[k]));

  Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    RatMatrix tm = random_invertible_matrix(4, 5, rng);
    const Presentation p = change_basis(a, tm);
    CHECK(verify_isomorphism(a, p.algebra, p.iso));
    // The trusted result must survive full revalidation.
    const Algebra again = new_algebra(p.algebra.data());
    CHECK(again.identity() == p.algebra.identity());
    CHECK(oracle::mul(p.iso.matrix, tm) == RatMatrix::identity(4));
  }
  CHECK_THROWS_AS(change_basis(a, RatMatrix(4, 4)), UsageError);
}

TEST_CASE("conjugation_isomorphism") {
  const Algebra a = units(2);
  auto triv = conjugation_isomorphism(a, a.identity());
  REQUIRE(triv);
  CHECK(triv->algebra == a);
  CHECK(triv->iso == Isomorphism::identity(4));
  CHECK_FALSE(conjugation_isomorphism(a, el({0, 1, 0, 0})));
  Rng rng(26);
  Algebra b = a;
  random_iso_from(units(2), rng, b);
  const AlgElement r = random_invertible_element(b, 5, rng);
  auto c = conjugation_isomorphism(b, r);
  REQUIRE(c);
  CHECK(new_algebra(c->algebra.data()) == c->algebra);
  CHECK(verify_isomorphism(b, c->algebra, c->iso));
  const AlgElement r_inv = *invert_element(b, r);
  for (int t = 0; t < 100; ++t) {
    const AlgElement x = random_element(b, 5, rng);
    const AlgElement fx = apply(c->iso, x);
    CHECK(minimal_polynomial(b, x) == minimal_polynomial(c->algebra, fx));
    // Map is x -> r x r^{-1} in coordinates.
    CHECK(fx == oracle::product(b, oracle::product(b, r, x), r_inv));
  }
}

TEST_CASE("compose, invert and verify") {
  Rng rng(27);
  const Algebra a = units(2);
  Algebra b = a, c = a;
  const Isomorphism f = random_iso_from(a, rng, b);
  const Isomorphism g = random_iso_from(b, rng, c);
  CHECK(compose_iso(Isomorphism::identity(4), f) == f);
  CHECK(invert_iso(invert_iso(f)) == f);
  CHECK(verify_isomorphism(a, a, Isomorphism::identity(4)));
  CHECK(verify_isomorphism(a, c, compose_iso(g, f)));
  CHECK(verify_isomorphism(b, a, invert_iso(f)));
  CHECK(compose_iso(g, f).matrix == oracle::mul(g.matrix, f.matrix));

  // Transpose is unital and invertible but reverses products.
  RatMatrix transpose = RatMatrix::identity(4);
  transpose(1, 1) = transpose(2, 2) = 0;
  transpose(1, 2) = transpose(2, 1) = 1;
  CHECK_FALSE(verify_isomorphism(a, a, Isomorphism{transpose}));
  CHECK_FALSE(verify_isomorphism(a, a, Isomorphism{RatMatrix(4, 4)}));
  CHECK_FALSE(verify_isomorphism(a, units(3), Isomorphism::identity(4)));
  int accepted = 0;
  for (int t = 0; t < 200; ++t) accepted += verify_isomorphism(a, b, Isomorphism{random_invertible_matrix(4, 3, rng)});
  CHECK(accepted == 0);
}

TEST_CASE("tensor products") {
  const Algebra q = new_algebra(1, RatVector{Rational(1)});
  const Algebra a = units(2);
  const Algebra aq = tensor_product(a, q);
  CHECK(aq == a);
  CHECK(tensor_product(q, a) == a);
  const Algebra a3 = units(3);
  const Algebra t = tensor_product(a, a3);
  CHECK(t.dim() == 36);
  // M2 (x) M2 is M4: the tensor of matrix units multiplies like a 4x4 model.
  const Algebra aa = tensor_product(a, a);
  Rng rng(28);
  for (int n = 0; n < 10; ++n) {
    const AlgElement x = random_element(aa, 3, rng);
    const AlgElement y = random_element(aa, 3, rng);
    CHECK(multiply(aa, x, y) == oracle::product(aa, x, y));
  }
  CHECK(center_dimension(aa) == 1);
}

TEST_CASE("integral scaling") {
  const Algebra a = units(2);
  const ScaledAlgebra same = integral_scaling(a);
  CHECK(same.scale == 1);
  CHECK(same.algebra == a);

  RatVector g(8);
  g[0] = make_rational(1, 2);
  g[(1 * 2 + 1) * 2 + 1] = make_rational(1, 3);
  const ScaledAlgebra s = integral_scaling(new_algebra(2, g));
  CHECK(s.scale == 6);
  CHECK(s.algebra.is_integral());
  CHECK(s.algebra.gamma(0, 0, 0) == 3);
  CHECK(s.algebra.gamma(1, 1, 1) == 2);
  CHECK(verify_isomorphism(new_algebra(2, g), s.algebra, scaling_isomorphism(2, s.scale)));

  Rng rng(29);
  for (int t = 0; t < 10; ++t) {
    Algebra b = a;
    random_iso_from(a, rng, b);
    Integer lcm = 1;
    for (const Rational& x : b.structure_constants()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    const ScaledAlgebra sb = integral_scaling(b);
    CHECK(sb.scale == lcm);
    CHECK(new_algebra(sb.algebra.data()).is_integral());
  }
}

TEST_CASE("random elements") {
  const Algebra a = units(2);
  Rng rng(30);
  CHECK_THROWS_AS(random_element(a, 0, rng), UsageError);
  for (int t = 0; t < 200; ++t)
    for (const Rational& c : random_element(a, 1, rng).coords) CHECK((c == -1 || c == 0 || c == 1));
  const int n = 10000;
  std::vector<double> sum(4, 0.0);
  for (int t = 0; t < n; ++t) {
    const AlgElement x = random_element(a, 10, rng);
    for (std::size_t i = 0; i < 4; ++i) sum[i] += x.coords[i].get_d();
  }
  const double sigma = std::sqrt((21.0 * 21.0 - 1.0) / 12.0 / n);
  for (double s : sum) CHECK(std::fabs(s / n) < 3 * sigma);
  Rng r1(99), r2(99);
  CHECK(random_element(a, 10, r1) == random_element(a, 10, r2));
}

TEST_CASE("random invertible element records attempts") {
  const Algebra a = units(2);
  Rng rng(31);
  int attempts = 0;
  const AlgElement x = random_invertible_element(a, 1, rng, 64, &attempts);
  CHECK(attempts >= 1);
  CHECK(invert_element(a, x).has_value());
  // The zero algebra element is never invertible: a height that can only
  // produce zero is impossible, so exhaust the cap on a degenerate algebra.
  RatVector g(8);
  g[0] = 1;
  g[(0 * 2 + 1) * 2 + 1] = 1;
  g[(1 * 2 + 0) * 2 + 1] = 1;  // Q[e]/(e^2): dual numbers
  const Algebra dual = new_algebra(2, g);
  int dual_attempts = 0;
  random_invertible_element(dual, 1, rng, 64, &dual_attempts);
  CHECK(dual_attempts >= 1);
}

TEST_CASE("unimodular matrices") {
  Rng rng(32);
  for (int t = 0; t < 50; ++t) {
    const RatMatrix u = random_unimodular_matrix(4, 16, rng);
    CHECK(u.is_integral());
    const Rational d = oracle::det(u);
    CHECK((d == 1 || d == -1));
    for (const Rational& e : u.entries()) CHECK(abs(e) <= 16);
  }
}
