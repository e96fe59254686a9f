#include <doctest.h>

#include <random>
#include <set>

#include "hecke/error.hpp"
#include "hecke/padic.hpp"
#include "oracles.hpp"

using namespace hecke;
using namespace hecke::padic;

namespace {

Zp zp(u64 p, int m, long v) { return Zp::from_int(p, m, v); }

// Random element of p Z_p (4 Z_2 for p = 2) that is nonzero mod p^M.
Zp random_small(u64 p, int m, std::mt19937_64& rng) {
  for (;;) {
    auto t = Zp::random(p, m, rng) * static_cast<long>(p == 2 ? 4 : p);
    if (!t.is_zero()) return t;
  }
}

Zp random_unit(u64 p, int m, std::mt19937_64& rng) {
  for (;;) {
    auto u = Zp::random(p, m, rng);
    if (u.is_unit()) return u;
  }
}

}  // namespace

TEST_SUITE("padic") {
  TEST_CASE("ring arithmetic and valuations") {
    const auto a = zp(5, 6, 50);
    CHECK(a.valuation() == 2);
    CHECK(a.unit_part() == zp(5, 6, 2));
    CHECK((a * zp(5, 6, 3)).value() == 150);
    CHECK(zp(5, 3, -1).value() == 124);
    CHECK(zp(5, 3, -1).centered() == -1);
    CHECK((zp(7, 5, 3) * zp(7, 5, 3).inv()) == zp(7, 5, 1));
    CHECK_THROWS_AS(zp(7, 5, 14).inv(), Error);
    CHECK_THROWS_AS(zp(7, 5, 0).valuation(), Error);
    CHECK(zp(7, 5, 0).valuation_capped() == 5);
    CHECK(Zp::from_rational(5, 4, mpq_class(1, 2)) * 2 == zp(5, 4, 1));
    CHECK(zp(5, 4, 125).shifted_down(2) == zp(5, 2, 5));
    CHECK(zp(3, 4, 5).digits() == std::vector<u64>{2, 1, 0, 0});
  }

  TEST_CASE("logarithm and exponential") {
    CHECK(log1p(zp(5, 6, 0)).is_zero());
    CHECK(exp(zp(5, 6, 0)) == zp(5, 6, 1));
    CHECK(exp(log1p(zp(5, 3, 5))) == zp(5, 3, 6));
    CHECK(exp(zp(5, 4, 5)) * exp(zp(5, 4, 5)) == exp(zp(5, 4, 10)));
    CHECK_THROWS_AS(log1p(zp(5, 6, 1)), Error);
    CHECK_THROWS_AS(exp(zp(2, 6, 2)), Error);
    std::mt19937_64 rng(1);
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL}) {
      for (int i = 0; i < 50; ++i) {
        const auto t = random_small(p, 24, rng);
        const auto s = random_small(p, 24, rng);
        CHECK(log1p(t).valuation() == t.valuation());
        CHECK(exp(log1p(t)) == t + 1);
        CHECK(log1p(exp(t) - 1) == t);
        CHECK(log1p((t + 1) * (s + 1) - 1) == log1p(t) + log1p(s));
      }
    }
  }

  TEST_CASE("Teichmuller representatives") {
    CHECK(teichmuller(zp(5, 2, 2)) == zp(5, 2, 7));
    CHECK(teichmuller(zp(5, 6, 1)) == zp(5, 6, 1));
    CHECK(teichmuller(zp(5, 6, 26)) == zp(5, 6, 1));
    std::mt19937_64 rng(2);
    for (u64 p : {3ULL, 5ULL, 13ULL}) {
      for (int i = 0; i < 50; ++i) {
        const auto x = random_unit(p, 24, rng), y = random_unit(p, 24, rng);
        const auto w = teichmuller(x);
        CHECK(w.pow(static_cast<long>(p - 1)) == zp(p, 24, 1));
        CHECK((w - x).valuation_capped() >= 1);
        CHECK(teichmuller(x * y) == w * teichmuller(y));
      }
    }
  }

  TEST_CASE("binomial powers") {
    std::mt19937_64 rng(3);
    const auto t = zp(5, 6, 5);
    CHECK(binom_pow(t, zp(5, 6, 1)) == t);
    CHECK(binom_pow(t, zp(5, 6, -1)) == -t / (t + 1));
    CHECK(binom_pow(zp(5, 3, 5), zp(5, 3, 5)) == zp(5, 3, 25));
    for (u64 p : {3ULL, 5ULL, 7ULL}) {
      for (int i = 0; i < 30; ++i) {
        const auto s = random_small(p, 24, rng);
        const auto lam = random_unit(p, 24, rng), mu = random_unit(p, 24, rng);
        const auto once = binom_pow(binom_pow(s, lam), mu);
        CHECK(once.with_precision(22) == binom_pow(s, lam * mu).with_precision(22));
        CHECK(binom_pow(s, lam).valuation() == s.valuation());
        // Integer exponents agree with repeated multiplication.
        const long n = static_cast<long>(rng() % 20);
        CHECK(binom_pow(s, zp(p, 24, n)) == (s + 1).pow(n) - 1);
      }
    }
  }

  TEST_CASE("square roots of units") {
    std::mt19937_64 rng(4);
    for (u64 p : {3ULL, 5ULL, 11ULL}) {
      const auto squares = oracle::unit_squares(p, 3);
      for (long v = 1; v < 27 * 5 && v < static_cast<long>(p * p * p); ++v) {
        if (v % static_cast<long>(p) == 0) continue;
        CHECK(is_square_unit(zp(p, 3, v)) == (squares.count(static_cast<u64>(v)) == 1));
      }
      for (int i = 0; i < 30; ++i) {
        const auto u = random_unit(p, 24, rng);
        const auto r = sqrt(u * u);
        CHECK(r * r == u * u);
      }
    }
  }

  TEST_CASE("cyclotomic fixed-point test") {
    CHECK(cyclo_binom_fixed(5, 1, zp(5, 24, 6), 24));
    CHECK_FALSE(cyclo_binom_fixed(5, 2, zp(5, 24, 6), 24));
    for (u64 p : {3ULL, 5ULL, 7ULL})
      for (int a = 1; a <= 3; ++a) {
        CHECK(cyclo_binom_fixed(p, a, zp(p, 24, 1), 24));
        for (long lam = 1; lam < 200; ++lam) {
          if (lam % static_cast<long>(p) == 0) continue;
          const bool divisible = (lam - 1) % static_cast<long>(oracle::pow_mod(p, static_cast<u64>(a), 1u << 30)) == 0;
          CHECK(cyclo_binom_fixed(p, a, zp(p, 24, lam), 24) == divisible);
          CHECK(cyclo_ring_fixed(p, a, zp(p, 24, lam), 24) == divisible);
        }
      }
  }

  TEST_CASE("orbit closures") {
    auto d = orbit_closure(zp(5, 24, -1));
    CHECK(d.finite);
    CHECK(d.orbit_size == 2);
    d = orbit_closure(zp(5, 24, 6));
    CHECK(d.teich_order == 1);
    CHECK(d.wild_valuation == 1);
    CHECK(d.component_count == 1);
    CHECK(d.radius_exponent == -1);
    d = orbit_closure(zp(5, 24, 2));
    CHECK(d.component_count == 4);
    CHECK(d.wild_valuation == 1);
    CHECK_FALSE(d.finite);
    d = orbit_closure(teichmuller(zp(7, 24, 3)));
    CHECK(d.finite);
    CHECK(d.orbit_size == 6);
    CHECK_THROWS_AS(orbit_closure(zp(5, 24, 10)), Error);
  }

  TEST_CASE("unramified quadratic extension") {
    std::mt19937_64 rng(5);
    CHECK(Wq::nonresidue(11) == 2);
    CHECK(Wq::nonresidue(7) == 3);
    for (u64 p : {3ULL, 5ULL, 11ULL}) {
      for (int i = 0; i < 30; ++i) {
        const auto x = Wq::random(p, 24, rng), y = Wq::random(p, 24, rng);
        CHECK((x * y).norm() == x.norm() * y.norm());
        CHECK((x * y).sigma() == x.sigma() * y.sigma());
        CHECK(x.sigma().sigma() == x);
        CHECK(x * x.sigma() == Wq::from_zp(x.norm()));
        CHECK(x.trace() == (x + x.sigma()).a0());
        if (x.is_unit()) {
          CHECK(x * x.inv() == Wq::from_ints(p, 24, 1, 0));
          const auto w = teichmuller(x);
          CHECK(w.pow(p * p - 1) == Wq::from_ints(p, 24, 1, 0));
          CHECK((w - x).valuation_capped() >= 1);
        }
      }
      CHECK(teichmuller_units(p, 8).size() == p * p - 1);
    }
  }

  TEST_CASE("norm surjectivity modulo p^2") {
    for (u64 p : {3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
      const u64 mod = p * p;
      std::set<u64> norms, odd;
      for (u64 a0 = 0; a0 < mod; ++a0)
        for (u64 a1 = 0; a1 < mod; ++a1) {
          const auto x = Wq::from_ints(p, 2, static_cast<long>(a0), static_cast<long>(a1));
          if (!x.is_unit()) continue;
          norms.insert(x.norm().value().get_ui());
          // -p Nm(x) has valuation 1 with unit part -Nm(x).
          odd.insert((-x.norm()).value().get_ui());
        }
      std::size_t units = 0;
      for (u64 v = 1; v < mod; ++v) units += v % p != 0;
      CHECK(norms.size() == units);
      CHECK(odd.size() == units);
    }
  }
}
