#include <doctest.h>

#include <set>

#include "hecke/error.hpp"
#include "hecke/qform.hpp"
#include "oracles.hpp"

using namespace hecke;
using namespace hecke::qform;

namespace {

QuadForm form(long a, long b, long c) { return {mpz_class(a), mpz_class(b), mpz_class(c)}; }

// Two forms are equivalent iff some small unimodular substitution maps one to the other.
bool equivalent_by_search(const QuadForm& f, const QuadForm& g, long box) {
  for (long p = -box; p <= box; ++p)
    for (long q = -box; q <= box; ++q)
      for (long r = -box; r <= box; ++r)
        for (long s = -box; s <= box; ++s) {
          if (p * s - q * r != 1) continue;
          // f(p x + q y, r x + s y)
          const mpz_class a = f.a * p * p + f.b * p * r + f.c * r * r;
          const mpz_class b = 2 * f.a * p * q + f.b * (p * s + q * r) + 2 * f.c * r * s;
          const mpz_class c = f.a * q * q + f.b * q * s + f.c * s * s;
          if (a == g.a && b == g.b && c == g.c) return true;
        }
  return false;
}

}  // namespace

TEST_SUITE("qform") {
  TEST_CASE("reduction") {
    CHECK(reduce(form(1, 0, 1)) == form(1, 0, 1));
    CHECK(reduce(form(2, 2, 3)) == form(2, 2, 3));
    CHECK(reduce(form(3, 2, 2)) == form(2, 2, 3));
    CHECK(equivalent_by_search(form(3, 2, 2), form(2, 2, 3), 3));
    // Every form with small coefficients reduces to an equivalent reduced form.
    for (long a = 1; a <= 6; ++a)
      for (long b = -6; b <= 6; ++b)
        for (long c = 1; c <= 6; ++c) {
          const auto f = form(a, b, c);
          if (f.disc() >= 0 || -f.disc() > 100) continue;
          const auto r = reduce(f);
          CHECK(r.is_reduced());
          CHECK(r.disc() == f.disc());
          CHECK(equivalent_by_search(f, r, 3));
        }
    CHECK_THROWS_AS(reduce(form(1, 3, 1)), Error);
  }

  TEST_CASE("class numbers match the reduced-form scan") {
    CHECK(class_number(-4) == 1);
    CHECK(class_number(-15) == 2);
    CHECK(class_group(-15).forms() == std::vector<QuadForm>{form(1, 1, 4), form(2, 1, 2)});
    const auto g23 = class_group(-23);
    CHECK(g23.size() == 3);
    CHECK(g23.order(1) == 3);
    for (long d = -3; d >= -400; --d) {
      if (!is_discriminant(d)) continue;
      CHECK(class_number(d) == oracle::reduced_forms(d, true).size());
    }
    CHECK_FALSE(is_discriminant(-5));
    CHECK_THROWS_AS(class_group(5), Error);
    CHECK_THROWS_AS(class_group(-5), Error);
  }

  TEST_CASE("composition is an abelian group law") {
    for (long d : {-23L, -56L, -71L, -84L, -199L, -260L, -399L}) {
      const auto g = class_group(d);
      const auto n = g.size();
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(g.mul(i, g.identity()) == i);
        CHECK(g.mul(i, g.inverse(i)) == g.identity());
        for (std::size_t j = 0; j < n; ++j) {
          CHECK(g.mul(i, j) == g.mul(j, i));
          for (std::size_t k = 0; k < n; ++k) CHECK(g.mul(g.mul(i, j), k) == g.mul(i, g.mul(j, k)));
        }
        CHECK(compose(g.forms()[i], principal_form(d)) == g.forms()[i]);
      }
    }
  }

  TEST_CASE("Kronecker symbol") {
    CHECK(kronecker(-15, 5) == 0);
    CHECK(kronecker(-15, 2) == 1);
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-4, 2) == 0);
    for (long d = -3; d >= -200; --d) {
      if (!is_discriminant(d)) continue;
      const long m8 = ((d % 8) + 8) % 8;
      CHECK(kronecker(d, 2) == (m8 % 2 == 0 ? 0 : (m8 == 1 ? 1 : -1)));
      for (long ell : {3L, 5L, 7L, 11L, 13L}) CHECK(kronecker(d, static_cast<std::uint64_t>(ell)) == oracle::legendre(d, ell));
    }
  }

  TEST_CASE("Hurwitz class numbers") {
    CHECK(hurwitz_H(3) == mpq_class(1, 3));
    CHECK(hurwitz_H(4) == mpq_class(1, 2));
    CHECK(hurwitz_H(20) == 2);
    for (long ell = 2; ell <= 50; ++ell) {
      if (!oracle::is_prime(static_cast<std::uint64_t>(ell))) continue;
      CHECK(hurwitz_H(static_cast<std::uint64_t>(4 * ell)) == oracle::hurwitz(4 * ell));
    }
    for (long n = 3; n <= 160; ++n)
      if (n % 4 == 0 || n % 4 == 3) CHECK(hurwitz_H(static_cast<std::uint64_t>(n)) == oracle::hurwitz(n));
    CHECK_THROWS_AS(hurwitz_H(5), Error);
  }

  TEST_CASE("prime class orders and witnesses") {
    auto r = prime_class_order(-15, 2);
    CHECK(r.order == 2);
    CHECK(r.witness.norm == 4);
    r = prime_class_order(-4, 5);
    CHECK(r.order == 1);
    CHECK(r.witness.norm == 5);
    // Ramified and principal: D = -8, ell = 2 has (2, 0, 1) ~ (1, 0, 2).
    r = prime_class_order(-8, 2);
    CHECK(r.order == 1);
    CHECK(r.witness.norm == 2);
    CHECK_THROWS_AS(prime_class_order(-23, 5), Error);  // (-23/5) = -1

    for (long d : {-23L, -47L, -71L, -84L, -143L, -311L}) {
      for (std::uint64_t ell : {2ULL, 3ULL, 5ULL, 7ULL}) {
        if (kronecker(d, ell) == -1) continue;
        const auto g = class_group(d);
        const auto res = prime_class_order(d, ell);
        CHECK(res.order == g.order(g.index_of(prime_form(d, ell))));
        mpz_class power = 1;
        for (std::uint64_t i = 0; i < res.order; ++i) power *= ell;
        CHECK(res.witness.norm == power);
        CHECK(res.witness.trace * res.witness.trace - 4 * res.witness.norm == d * res.witness.y * res.witness.y);
      }
    }
  }
}
