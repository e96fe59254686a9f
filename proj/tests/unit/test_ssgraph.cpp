#include <doctest.h>

#include <cmath>
#include <set>

#include "hecke/error.hpp"
#include "hecke/qform.hpp"
#include "hecke/ssgraph.hpp"
#include "oracles.hpp"

using namespace hecke;
using namespace hecke::ssgraph;

namespace {

// Trace and determinant mod m of a closed walk acting on E[m], with discrete
// logarithms found by exhaustive search over i P1 + j P2.
std::pair<long, long> torsion_action(const SSGraph& g, std::size_t start, const Walk& w, long m) {
  const auto basis = ec::torsion_basis(g.vertices()[start].curve, m);
  const auto& field = basis.p1.x.field();
  auto image = [&](ec::Point pt) {
    for (const auto& step : w) pt = g.isogeny(step).over(field)(pt);
    return pt;
  };
  auto dlog = [&](const ec::Point& pt) {
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < m; ++j)
        if (ec::add(basis.curve, ec::mul(basis.curve, basis.p1, i), ec::mul(basis.curve, basis.p2, j)) == pt)
          return std::pair<long, long>{i, j};
    FAIL("point outside the span of the basis");
    return std::pair<long, long>{0, 0};
  };
  const auto [a, c] = dlog(image(basis.p1));
  const auto [b, d] = dlog(image(basis.p2));
  return {(a + d) % m, (((a * d - b * c) % m) + m) % m};
}

bool is_square_integer(const mpz_class& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

}  // namespace

TEST_SUITE("ssgraph") {
  TEST_CASE("supersingular j-invariants agree with point counting") {
    for (u64 p : {11ULL, 13ULL, 17ULL, 23ULL}) {
      const auto js = supersingular_js(p);
      CHECK(static_cast<long>(js.size()) == oracle::supersingular_j_count(static_cast<long>(p)));
      for (const auto& j : js) CHECK(ec::is_supersingular_j(j));
    }
    CHECK_THROWS_AS(supersingular_js(3), Error);
    CHECK_THROWS_AS(supersingular_js(15), Error);
  }

  TEST_CASE("graph at p = 11, ell = 5") {
    const auto g = build_ssgraph(11, 5, 1);
    REQUIRE(g.vertices().size() == 2);
    CHECK(g.vertices()[0].j == g.base_field().from_int(0));
    CHECK(g.vertices()[1].j == g.base_field().from_int(1));
    CHECK(g.adjacency() == std::vector<std::vector<long>>{{3, 3}, {2, 4}});
    const auto r = graph_report(g);
    CHECK(r.connected);
    CHECK_FALSE(r.bipartite);
    CHECK(r.out_degrees == std::vector<long>{6, 6});
  }

  TEST_CASE("single-vertex graph at p = 13") {
    const auto g = build_ssgraph(13, 5, 1);
    CHECK(g.vertices().size() == 1);
    CHECK(g.adjacency() == std::vector<std::vector<long>>{{6}});
    CHECK(graph_report(g).loops == g.arrows().size());
  }

  TEST_CASE("rigid level structure") {
    const auto g = build_ssgraph(11, 3, 4);
    CHECK(g.rigid());
    const auto r = graph_report(g);
    for (long d : r.out_degrees) CHECK(d == 4);
    for (long d : r.in_degrees) CHECK(d == 4);
    CHECK(r.connected);
    for (const auto& v : g.vertices()) {
      CHECK_FALSE(v.point.infinity);
      CHECK(ec::point_order(v.curve.base_change(v.point.x.field()), v.point, 4) == 4);
    }
  }

  TEST_CASE("argument validation") {
    CHECK_THROWS_AS(build_ssgraph(11, 2, 1), Error);
    CHECK_THROWS_AS(build_ssgraph(11, 3, 33), Error);
    CHECK_THROWS_AS(build_ssgraph(11, 11, 1), Error);
    CHECK_THROWS_AS(build_ssgraph(12, 3, 1), Error);
    try {
      build_ssgraph(11, 3, 33);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::SharedCharacteristic);
    }
  }

  TEST_CASE("walk endomorphisms") {
    const auto g = build_ssgraph(11, 3, 1);
    const auto empty = walk_char_poly(g, 0, {});
    CHECK(empty.trace == 2);
    CHECK(empty.norm == 1);
    for (const auto& arr_index : g.out(0)) {
      const Walk w{{arr_index, 0}};
      const auto back = dual_return(g, 0, w);
      Walk both = w;
      both.insert(both.end(), back.begin(), back.end());
      CHECK(g.end_of(0, both) == 0);
      const auto e = walk_char_poly(g, 0, both);
      CHECK(e.trace == 6);
      CHECK(e.norm == 9);
    }
    const auto walks = closed_walks(g, 0, 2);
    REQUIRE_FALSE(walks.empty());
    for (std::size_t i = 1; i < walks.size(); ++i) CHECK(walks[i - 1].size() <= walks[i].size());
    for (const auto& w : walks) {
      if (w.size() != 2) continue;
      const auto e = walk_char_poly(g, 0, w);
      CHECK(e.norm == 9);
      CHECK(abs(e.trace) <= 6);
      const mpz_class disc = e.trace * e.trace - 36;
      CHECK(((abs(e.trace) == 6) || !is_square_integer(disc)));
      // Independent torsion-action oracle at m = 5 and 7.
      for (long m : {5L, 7L}) {
        const auto [tr, det] = torsion_action(g, 0, w, m);
        CHECK(mpz_class(e.trace - tr) % m == 0);
        CHECK(det == 9 % m);
      }
    }
  }

  TEST_CASE("walk endomorphisms at level N fix the marked point") {
    const auto g = build_ssgraph(11, 3, 4);
    for (const auto& w : closed_walks(g, 0, 3)) {
      const auto e = walk_char_poly(g, 0, w);
      mpz_class power = 1;
      for (std::size_t i = 0; i < w.size(); ++i) power *= 3;
      CHECK(e.norm == power);
      CHECK(e.trace * e.trace <= 4 * e.norm);
      const auto& v = g.vertices()[0];
      auto pt = v.point;
      for (const auto& step : w) pt = g.isogeny(step).over(pt.x.field())(pt);
      CHECK(pt == v.point);
    }
    for (std::size_t a : g.out(0)) {
      if (g.arrows()[a].dst == 0) continue;
      CHECK_THROWS_AS(walk_char_poly(g, 0, {{a, 0}}), Error);
      break;
    }
  }

  TEST_CASE("monoid certificates") {
    auto c = monoid_certificates(build_ssgraph(11, 5, 1), 8);
    REQUIRE(c.odd_walk.has_value());
    CHECK(c.odd_walk->size() % 2 == 1);
    CHECK(c.odd_walk->size() <= 3);
    CHECK(c.alpha_check);
    CHECK(c.noncommuting_pair.has_value());
    const auto [e1, e2] = *c.noncommuting_pair;
    CHECK(e1.trace * e1.trace - 4 * e1.norm < 0);
    CHECK(e2.trace * e2.trace - 4 * e2.norm < 0);

    CHECK(alpha(3, 1) == 1);
    CHECK(alpha(3, 5) == 4);
    CHECK(alpha(3, 4) == 2);
    // Odd closed walks exist at level 5 although 3 has order 4 mod 5, so the
    // length congruence is reported as violated.
    c = monoid_certificates(build_ssgraph(11, 3, 5), 8);
    CHECK(c.odd_walk.has_value());
    CHECK_FALSE(c.alpha_check);
    CHECK_FALSE(c.alpha_violation_lengths.empty());
  }

  TEST_CASE("square classes") {
    using padic::Zp;
    CHECK(sat_membership(Zp::from_int(11, 24, 1), 5));
    CHECK(sat_membership(Zp::from_int(11, 24, 5), 5));
    CHECK_FALSE(sat_membership(Zp::from_int(11, 24, 2), 5));
    CHECK_THROWS_AS(sat_membership(Zp::from_int(11, 24, 22), 5), Error);
    for (u64 p : {3ULL, 5ULL, 7ULL}) {
      const auto squares = oracle::unit_squares(p, 3);
      for (u64 ell : {2ULL, 3ULL, 5ULL, 7ULL}) {
        if (ell == p) continue;
        for (u64 u = 1; u < p * p * p; ++u) {
          if (u % p == 0) continue;
          const u64 inv_ell = oracle::pow_mod(ell, p * p * (p - 1) - 1, p * p * p);
          const bool expected = squares.count(u) || squares.count(u * inv_ell % (p * p * p));
          CHECK(sat_membership(Zp::from_int(p, 3, static_cast<long>(u)), ell) == expected);
        }
      }
    }
  }

  TEST_CASE("rank report") {
    const auto r = graph_report(build_ssgraph(13, 5, 1));
    REQUIRE(r.cycle_rank_ud.has_value());
    CHECK(*r.cycle_rank_ud >= 0);
    CHECK(rank_formula(13, 5) == 1 + qform::hurwitz_H(20) / 4 + 2);
    CHECK(r.rank_formula == rank_formula(13, 5));
  }

  TEST_CASE("auxiliary moduli avoid p, ell and N") {
    const auto g = build_ssgraph(11, 3, 5);
    for (long m : auxiliary_moduli(g)) {
      CHECK(m % 11 != 0);
      CHECK(m % 3 != 0);
      CHECK(m % 5 != 0);
    }
  }
}
