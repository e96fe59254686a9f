#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hecke/error.hpp"
#include "hecke/ff.hpp"
#include "hecke/poly.hpp"
#include "oracles.hpp"

using namespace hecke;
using namespace hecke::ff;

namespace {

Elem random_nonzero(const Field& f, std::mt19937_64& rng) {
  for (;;) {
    auto e = f.random(rng);
    if (!e.is_zero()) return e;
  }
}

Poly random_poly(const Field& f, int degree, std::mt19937_64& rng) {
  std::vector<Elem> c;
  for (int i = 0; i < degree; ++i) c.push_back(f.random(rng));
  c.push_back(random_nonzero(f, rng));
  return Poly(f, c);
}

// Monic irreducible factors with multiplicity as a sorted multiset of encodings.
std::multiset<std::string> factor_multiset(const Poly& f) {
  std::multiset<std::string> out;
  for (const auto& fac : poly_factor(f)) {
    std::string key;
    for (const auto& c : fac.poly.coeffs()) key += c.encode().get_str() + ",";
    for (int i = 0; i < fac.multiplicity; ++i) out.insert(key);
  }
  return out;
}

}  // namespace

TEST_SUITE("ff") {
  TEST_CASE("integer helpers agree with trial division and naive exponentiation") {
    for (u64 n = 0; n < 3000; ++n) CHECK(is_prime(n) == oracle::is_prime(n));
    CHECK(is_prime(2147483647ULL));
    CHECK_FALSE(is_prime(2147483647ULL * 3));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
      const u64 m = 2 + rng() % 5000;
      const u64 a = rng() % m, e = rng() % 100;
      CHECK(powmod(a, e, m) == oracle::pow_mod(a, e, m));
    }
    CHECK(invmod(3, 7) == 5);
    CHECK(reduce(-1, 11) == 10);
    CHECK(mult_order(3, 5) == 4);
    CHECK(mult_order(11, 5) == 1);
  }

  TEST_CASE("field construction and modulus choice") {
    CHECK(make_field(5, 1).modulus() == std::vector<u64>{0, 1});
    CHECK(make_field(3, 2).modulus() == std::vector<u64>{1, 0, 1});
    const auto f = make_field(11, 2);
    CHECK(f.order() == 121);
    CHECK(make_field(11, 2) == f);
    // The modulus has no root in F_11.
    const auto m = f.modulus();
    for (u64 x = 0; x < 11; ++x) CHECK((m[0] + m[1] * x + x * x) % 11 != 0);
    // It is the smallest such by the encoding m0 + 11 m1.
    for (u64 m1 = 0; m1 < 11; ++m1)
      for (u64 m0 = 0; m0 < 11; ++m0) {
        if (m0 + 11 * m1 >= m[0] + 11 * m[1]) continue;
        bool has_root = false;
        for (u64 x = 0; x < 11; ++x) has_root |= (m0 + m1 * x + x * x) % 11 == 0;
        CHECK(has_root);
      }
    CHECK_THROWS_AS(make_field(12, 1), Error);
    CHECK_THROWS_AS(make_field(5, 0), Error);
  }

  TEST_CASE("field axioms on random samples") {
    std::mt19937_64 rng(2);
    for (auto [p, k] : {std::pair<u64, int>{2, 5}, {3, 2}, {5, 3}, {11, 2}, {13, 4}}) {
      const auto f = make_field(p, k);
      for (int i = 0; i < 50; ++i) {
        const auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
        CHECK((a + b) * c == a * c + b * c);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a - a == f.zero());
        CHECK(a.pow(f.order()) == a);
        CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
        CHECK(f.decode(a.encode()) == a);
        const auto u = random_nonzero(f, rng);
        CHECK((u * u.inv()).is_one());
        CHECK(u / u == f.one());
      }
    }
  }

  TEST_CASE("square roots") {
    std::mt19937_64 rng(3);
    for (auto [p, k] : {std::pair<u64, int>{7, 1}, {3, 2}, {5, 2}, {11, 2}}) {
      const auto f = make_field(p, k);
      long squares = 0;
      for (long idx = 0; idx < f.order().get_si(); ++idx) {
        const auto a = f.decode(idx);
        const auto r = a.sqrt();
        CHECK(r.has_value() == a.is_square());
        if (r) {
          ++squares;
          CHECK(*r * *r == a);
          CHECK(*r <= -*r);
        }
      }
      CHECK(squares == (f.order().get_si() - 1) / 2 + 1);
      CHECK_FALSE(f.nonresidue().is_square());
    }
  }

  TEST_CASE("embeddings are ring maps and descend inverts them") {
    std::mt19937_64 rng(4);
    const auto small = make_field(5, 2), big = make_field(5, 4);
    const Embedding e(small, big);
    for (int i = 0; i < 30; ++i) {
      const auto a = small.random(rng), b = small.random(rng);
      CHECK(e(a + b) == e(a) + e(b));
      CHECK(e(a * b) == e(a) * e(b));
      CHECK(e.descend(e(a)) == a);
    }
    // Elements of F_625 outside F_25 do not descend.
    CHECK_FALSE(e.descend(big.gen()).has_value());
  }
}

TEST_SUITE("poly") {
  TEST_CASE("roots of small polynomials") {
    const auto f5 = make_field(5, 1);
    auto roots = poly_roots(Poly::from_ints(f5, {-1, 0, 1}));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == f5.from_int(1));
    CHECK(roots[1] == f5.from_int(4));
    CHECK(poly_roots(Poly::from_ints(make_field(3, 1), {1, 0, 1})).empty());

    const auto f9 = make_field(3, 2);
    const auto x = f9.gen();
    roots = poly_roots(Poly::from_ints(f9, {1, 0, 1}));
    // Exhaustive evaluation over F_9.
    std::vector<Elem> expected;
    for (long i = 0; i < 9; ++i)
      if ((f9.decode(i) * f9.decode(i) + f9.one()).is_zero()) expected.push_back(f9.decode(i));
    std::sort(expected.begin(), expected.end());
    CHECK(roots == expected);
    CHECK(std::set<Elem>(roots.begin(), roots.end()) == std::set<Elem>{x, x.scaled(2)});
  }

  TEST_CASE("factorization of small polynomials") {
    const auto f5 = make_field(5, 1);
    auto facs = poly_factor(Poly::from_ints(f5, {-1, 0, 1}));
    REQUIRE(facs.size() == 2);
    CHECK(((facs[0].poly == Poly::from_ints(f5, {-1, 1}) && facs[1].poly == Poly::from_ints(f5, {-4, 1})) ||
           (facs[0].poly == Poly::from_ints(f5, {-4, 1}) && facs[1].poly == Poly::from_ints(f5, {-1, 1}))));
    CHECK(poly_less(facs[0].poly, facs[1].poly));

    const auto f3 = make_field(3, 1);
    const auto quartic = Poly::from_ints(f3, {1, 0, 0, 0, 1});
    facs = poly_factor(quartic);
    REQUIRE(facs.size() == 2);
    Poly prod = Poly::constant(f3.one());
    for (const auto& fac : facs) {
      CHECK(fac.poly.degree() == 2);
      CHECK(fac.multiplicity == 1);
      prod = prod * fac.poly;
    }
    CHECK(prod == quartic);
    // Trial division by all monic quadratics over F_3 finds exactly these two.
    int dividing = 0;
    for (long c0 = 0; c0 < 3; ++c0)
      for (long c1 = 0; c1 < 3; ++c1)
        if (divides(Poly::from_ints(f3, {c0, c1, 1}), quartic)) ++dividing;
    CHECK(dividing == 2);
  }

  TEST_CASE("division and gcd identities") {
    std::mt19937_64 rng(5);
    const auto f = make_field(7, 2);
    for (int i = 0; i < 40; ++i) {
      const auto a = random_poly(f, 1 + static_cast<int>(rng() % 7), rng);
      const auto b = random_poly(f, 1 + static_cast<int>(rng() % 4), rng);
      auto [q, r] = divmod(a, b);
      CHECK(q * b + r == a);
      CHECK(r.degree() < b.degree());
      const auto g = gcd(a, b);
      CHECK(divides(g, a));
      CHECK(divides(g, b));
      CHECK(gcd(a * b, b) == b.monic());
      CHECK((a * b).derivative() == a.derivative() * b + a * b.derivative());
    }
    CHECK_THROWS_AS(divmod(Poly::x(f), Poly(f)), Error);
  }

  TEST_CASE("factorization is multiplicative and reconstructs the input") {
    std::mt19937_64 rng(6);
    for (auto [p, k] : {std::pair<u64, int>{2, 1}, {3, 2}, {11, 1}, {5, 2}}) {
      const auto f = make_field(p, k);
      for (int i = 0; i < 15; ++i) {
        const auto a = random_poly(f, 1 + static_cast<int>(rng() % 6), rng);
        const auto b = random_poly(f, 1 + static_cast<int>(rng() % 6), rng);
        auto left = factor_multiset(a * b);
        auto right = factor_multiset(a);
        for (auto& s : factor_multiset(b)) right.insert(s);
        CHECK(left == right);
        Poly prod = Poly::constant(a.lead());
        for (const auto& fac : poly_factor(a)) {
          CHECK(is_irreducible(fac.poly));
          for (int m = 0; m < fac.multiplicity; ++m) prod = prod * fac.poly;
        }
        CHECK(prod == a);
      }
    }
  }

  TEST_CASE("roots match exhaustive evaluation") {
    std::mt19937_64 rng(7);
    for (auto [p, k] : {std::pair<u64, int>{7, 1}, {3, 3}, {5, 2}}) {
      const auto f = make_field(p, k);
      for (int i = 0; i < 10; ++i) {
        const auto a = random_poly(f, 1 + static_cast<int>(rng() % 5), rng);
        std::vector<Elem> expected;
        for (long idx = 0; idx < f.order().get_si(); ++idx)
          if (a.eval(f.decode(idx)).is_zero()) expected.push_back(f.decode(idx));
        std::sort(expected.begin(), expected.end());
        CHECK(poly_roots(a) == expected);
      }
    }
    CHECK_THROWS_AS(poly_roots(Poly(make_field(5, 1))), Error);
  }
}
