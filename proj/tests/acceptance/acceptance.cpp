// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exits 0 when the failing set equals the
// documented set of known failures (--expect-fail), so an unexpected pass is
// reported as loudly as an unexpected failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curated.hpp"
#include "hecke/discdyn.hpp"
#include "hecke/error.hpp"
#include "hecke/markov.hpp"
#include "hecke/padic.hpp"
#include "hecke/qform.hpp"
#include "hecke/ssgraph.hpp"
#include "hecke/volcano.hpp"
#include "oracles.hpp"

using namespace hecke;
using padic::Wq;
using padic::Zp;
using u64 = std::uint64_t;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::set<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      failures.insert(what);
      pass = false;
    }
  }

  std::string summary() const {
    std::string out = detail.str();
    if (!failures.empty()) {
      out += " | failed:";
      for (const auto& f : failures) out += " " + f + ";";
    }
    return out;
  }
};

struct Criterion {
  int id;
  std::string title;
  double time_limit;  // seconds, 0 for none
  std::function<void(Outcome&)> run;
};

mpq_class canonical(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpz_class ipow(u64 base, std::size_t e) {
  mpz_class r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

std::string fmt_walk_count(std::size_t n, const char* what) { return std::to_string(n) + " " + what; }

// 1. Transition matrix and stationary distribution at p = 11, ell = 5.
void markov_example(Outcome& o) {
  const auto t = markov::normalize(ssgraph::build_ssgraph(11, 5, 1));
  const markov::RationalMatrix expected{{canonical(3, 6), canonical(3, 6)}, {canonical(2, 6), canonical(4, 6)}};
  const markov::RationalMatrix swapped{{expected[1][1], expected[1][0]}, {expected[0][1], expected[0][0]}};
  const bool direct = t.entries() == expected;
  o.require(direct || t.entries() == swapped, "transition matrix is not (1/6)[[3,3],[2,4]] up to relabeling");
  const auto pi = markov::stationary(t);
  const markov::Distribution want = direct ? markov::Distribution{canonical(2, 5), canonical(3, 5)}
                                           : markov::Distribution{canonical(3, 5), canonical(2, 5)};
  o.require(pi == want, "stationary distribution is not (2/5, 3/5)");
  o.detail << "pi = (" << pi[0].get_str() << ", " << pi[1].get_str() << ")";
}

// 2. Degree, connectivity and odd closed walks on the level suite.
void degree_suite(Outcome& o) {
  const std::vector<std::tuple<u64, u64, u64>> suite{{11, 3, 1}, {11, 5, 1}, {13, 5, 1}, {11, 3, 4}, {11, 3, 5}, {23, 3, 4}};
  for (auto [p, ell, n] : suite) {
    const auto g = ssgraph::build_ssgraph(p, ell, n);
    const auto r = ssgraph::graph_report(g);
    const std::string tag = "(" + std::to_string(p) + "," + std::to_string(ell) + "," + std::to_string(n) + ")";
    for (long d : r.out_degrees) o.require(d == static_cast<long>(ell + 1), tag + " out-degree " + std::to_string(d));
    if (g.rigid())
      for (long d : r.in_degrees) o.require(d == static_cast<long>(ell + 1), tag + " in-degree " + std::to_string(d));
    o.require(r.connected, tag + " not connected");
    const auto c = ssgraph::monoid_certificates(g, 2 * g.vertices().size() + 1);
    o.require(c.odd_walk.has_value() && c.odd_walk->size() % 2 == 1, tag + " no odd closed walk");
  }
  o.detail << suite.size() << " instances";
}

// 3. Simplicity and girth at N = 37 > 4 ell^2.
void simplicity(Outcome& o) {
  const auto r = ssgraph::graph_report(ssgraph::build_ssgraph(11, 3, 37));
  const auto bound = static_cast<std::size_t>(std::ceil(std::log(37.0 / 4.0) / std::log(3.0)));
  o.require(r.loops == 0, "loops present");
  o.require(r.multi_edges == 0, "multiple arrows present");
  o.require(r.simple, "graph not simple");
  o.require(r.girth.has_value() && *r.girth >= bound, "girth below ceil(log_3(37/4))");
  o.detail << "girth " << (r.girth ? std::to_string(*r.girth) : "none") << " >= " << bound;
}

// 4. Vertex counts against point counting.
void vertex_counts(Outcome& o) {
  for (u64 p : {11ULL, 13ULL, 23ULL, 31ULL, 37ULL}) {
    const auto g = ssgraph::build_ssgraph(p, 3, 1);
    const long expected = oracle::supersingular_j_count(static_cast<long>(p));
    o.require(static_cast<long>(g.vertices().size()) == expected,
              "p=" + std::to_string(p) + ": " + std::to_string(g.vertices().size()) + " vertices, oracle " + std::to_string(expected));
    if (p % 12 == 1)
      o.require(g.vertices().size() == (p - 1) / 12, "p=" + std::to_string(p) + ": not (p-1)/12 vertices");
    o.detail << p << ":" << g.vertices().size() << " ";
  }
}

// 5. Volcano level structure, formula and empirical.
void volcano_structure(Outcome& o) {
  std::size_t formula_cases = 0;
  for (long d : {-7L, -15L, -20L, -23L, -39L, -56L, -71L, -84L, -35L, -47L, -8L, -11L}) {
    for (u64 ell : {2ULL, 3ULL, 5ULL}) {
      if (mpz_divisible_ui_p(mpz_class(d).get_mpz_t(), ell * ell) != 0) continue;
      const auto v = volcano::build_synthetic(d, ell, 2);
      const int kron = qform::kronecker(d, ell);
      const auto h = oracle::reduced_forms(d, true).size();
      // Level sizes: rim, then (ell - kron) ell^(i - 1) children per rim vertex.
      o.require(v.level_sizes[0] == v.rim_size, "rim level size");
      for (int i = 1; i <= 2; ++i) {
        const mpz_class want = mpz_class(static_cast<unsigned long>(v.rim_size)) * (static_cast<long>(ell) - kron) * ipow(ell, static_cast<std::size_t>(i - 1));
        o.require(v.level_sizes[static_cast<std::size_t>(i)] == want, "level size formula at D=" + std::to_string(d));
        const long sub = d * ipow(ell, 2 * static_cast<std::size_t>(i)).get_si();
        o.require(v.level_sizes[static_cast<std::size_t>(i)] * (h / v.rim_size) == oracle::reduced_forms(sub, true).size(),
                  "class number partition at D=" + std::to_string(sub));
      }
      ++formula_cases;
    }
  }
  for (const auto& c : curated::kVolcanoSuite) {
    const auto e = volcano::build_empirical(c.p, c.j0, c.ell, 2);
    const auto s = volcano::build_synthetic(e.rim_disc, c.ell, e.height);
    const std::string tag = "(" + std::to_string(c.p) + "," + std::to_string(c.j0) + "," + std::to_string(c.ell) + ")";
    o.require(e.height <= 2, tag + " height above 2");
    o.require(s.rim_size == e.rim_size, tag + " rim size");
    bool same = s.level_sizes.size() == e.level_sizes.size();
    for (std::size_t i = 0; same && i < s.level_sizes.size(); ++i) same = s.level_sizes[i] == e.level_sizes[i];
    o.require(same, tag + " level sizes");
  }
  o.detail << formula_cases << " formula cases, " << curated::kVolcanoSuite.size() << " empirical instances";
}

// 6. Serre-Tate maps and the cyclotomic fixed-point criterion.
void serre_tate(Outcome& o) {
  constexpr int kM = 24;
  std::mt19937_64 rng(6);
  for (u64 p : {3ULL, 5ULL, 7ULL}) {
    for (int i = 0; i < 30; ++i) {
      const auto t = Zp::random(p, kM, rng) * static_cast<long>(p);
      Zp lam, mu;
      do lam = Zp::random(p, kM, rng); while (!lam.is_unit());
      do mu = Zp::random(p, kM, rng); while (!mu.is_unit());
      const auto composed = padic::binom_pow(padic::binom_pow(t, lam), mu);
      o.require(composed.with_precision(kM - 2) == padic::binom_pow(t, lam * mu).with_precision(kM - 2), "homomorphism");
      o.require(padic::binom_pow(t, lam).valuation_capped() == t.valuation_capped(), "isometry");
      const auto st = discdyn::serre_tate_multivar({{lam.inv()}}, {{mu}}, {{t}});
      o.require(st[0][0] == padic::binom_pow(t, mu / lam), "g = 1 specialization");
    }
    for (int a = 1; a <= 2; ++a) {
      const long pa = static_cast<long>(p) * (a == 2 ? static_cast<long>(p) : 1);
      for (long lam = 1; lam < 300; ++lam) {
        if (lam % static_cast<long>(p) == 0) continue;
        const bool fixed = discdyn::classify_periodic(Zp::from_int(p, kM, lam), 1, a);
        o.require(fixed == ((lam - 1) % pa == 0), "circle fixed iff p^a | lambda - 1 at p=" + std::to_string(p));
      }
    }
  }
  o.detail << "p in {3,5,7}, a in {1,2}, M = " << kM;
}

// 7. Orbit closures against residue enumeration.
void orbit_closures(Outcome& o) {
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (u64 p : {3ULL, 5ULL, 7ULL}) {
    for (int i = 0; i < 30; ++i) {
      Zp lam;
      do lam = Zp::random(p, 24, rng); while (!lam.is_unit());
      const auto d = padic::orbit_closure(lam);
      o.require(d.radius_exponent == -d.wild_valuation || d.finite, "radius exponent");
      for (int k = 1; k <= 4; ++k) {
        const u64 mod = oracle::pow_mod(p, static_cast<u64>(k), ~0ULL);
        const u64 lk = mpz_class(lam.value() % static_cast<unsigned long>(mod)).get_ui();
        const auto seen = oracle::power_residues(lk, p, k, mod * p);
        const u64 coset_step = oracle::pow_mod(p, static_cast<u64>(std::min(d.wild_valuation, k)), ~0ULL);
        std::set<u64> predicted;
        if (d.finite) {
          u64 x = 1;
          for (u64 n = 0; n < d.orbit_size; ++n, x = x * lk % mod) predicted.insert(x);
        } else {
          u64 x = 1;
          for (u64 n = 0; n < d.component_count; ++n, x = x * lk % mod)
            for (u64 y = 0; y < mod; y += coset_step) predicted.insert(x * ((1 + y) % mod) % mod);
        }
        o.require(seen == predicted, "residues mod p^" + std::to_string(k) + " at p=" + std::to_string(p));
        // The closure has exactly component_count components at level k once k exceeds the wild valuation.
        if (!d.finite && k > d.wild_valuation)
          o.require(seen.size() == d.component_count * (mod / coset_step), "component count");
        ++checked;
      }
    }
  }
  o.detail << checked << " (lambda, k) pairs";
}

// 8. Endomorphisms of closed walks.
void walk_endomorphisms(Outcome& o) {
  const auto g = ssgraph::build_ssgraph(11, 3, 1);
  const auto walks = ssgraph::closed_walks(g, 0, 4);
  for (const auto& w : walks) {
    const auto e = ssgraph::walk_char_poly(g, 0, w);
    o.require(e.norm == ipow(3, w.size()), "norm is not ell^d");
    o.require(e.trace * e.trace <= 4 * e.norm, "Weil bound");
    auto both = w;
    const auto back = ssgraph::dual_return(g, 0, w);
    both.insert(both.end(), back.begin(), back.end());
    const auto s = ssgraph::walk_char_poly(g, 0, both);
    o.require(s.trace * s.trace == 4 * s.norm, "dual return is not scalar");
  }
  o.detail << fmt_walk_count(walks.size(), "walks at (11,3,1)");
  std::size_t violations = 0, level_walks = 0;
  for (auto [p, ell, n] : {std::tuple<u64, u64, u64>{11, 3, 4}, {11, 3, 5}, {23, 3, 4}}) {
    const auto gn = ssgraph::build_ssgraph(p, ell, n);
    for (const auto& w : ssgraph::closed_walks(gn, 0, 4)) {
      ++level_walks;
      const auto e = ssgraph::walk_char_poly(gn, 0, w);
      o.require(e.norm == ipow(ell, w.size()), "norm at level N");
      if (mpz_class(e.norm % n) != 1) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " of " + std::to_string(level_walks) +
                                 " level-N closed walks have ell^d != 1 mod N");
  o.detail << ", " << level_walks << " level-N walks";
}

// 9. Square classes and transitivity witnesses.
void transitivity(Outcome& o) {
  for (u64 p : {3ULL, 5ULL, 11ULL, 13ULL}) {
    const u64 mod = p * p * p;
    const auto squares = oracle::unit_squares(p, 3);
    for (u64 ell : {2ULL, 3ULL, 5ULL, 7ULL}) {
      if (ell == p) continue;
      const u64 inv = oracle::pow_mod(ell, p * p * (p - 1) - 1, mod);
      for (u64 u = 1; u < mod; ++u) {
        if (u % p == 0) continue;
        const bool want = squares.count(u) || squares.count(u * inv % mod);
        o.require(ssgraph::sat_membership(Zp::from_int(p, 3, static_cast<long>(u)), ell) == want, "square table mod p^3");
      }
    }
  }
  std::mt19937_64 rng(9);
  const auto zero = Wq::from_ints(11, 24, 0, 0);
  for (int i = 0; i < 100; ++i) {
    const auto x = Wq::random(11, 24, rng).scaled(Zp::from_int(11, 24, 11));
    const auto w = discdyn::transitivity_witness(x, 5);
    o.require(discdyn::mobius_apply(w.gamma, zero) == x, "witness does not map 0 to x");
    o.require(w.det == w.gamma.det() && ssgraph::sat_membership(w.det, 5), "det not in (Z_p^x)^2 <ell>");
  }
  o.detail << "p in {3,5,11,13}; 100 witnesses at p = 11, ell = 5";
}

// 10. Random-walk measure at p = 11, ell = 5.
void measure(Outcome& o) {
  const auto g = ssgraph::build_ssgraph(11, 5, 1);
  const auto gens = discdyn::hecke_generators(g, 2, 24);
  const auto x0 = Wq::from_ints(11, 24, 0, 0);
  const auto m = discdyn::random_walk(gens, x0, 100'000, 7);
  o.require(m.support() == m.classes(), std::to_string(m.support()) + " of " + std::to_string(m.classes()) + " classes visited");
  for (std::size_t i = 1; i < m.checkpoints.size(); ++i)
    o.require(m.checkpoints[i].tv <= m.checkpoints[i - 1].tv, "TV increased at " + std::to_string(m.checkpoints[i].steps));
  const auto again = discdyn::random_walk(gens, x0, 100'000, 7);
  o.require(again.counts == m.counts, "not deterministic under the seed");
  o.detail << m.support() << "/" << m.classes() << " classes, " << gens.size() << " generators, final TV "
           << (m.checkpoints.empty() ? 0.0 : m.checkpoints.back().tv);
}

// 11. Cycle rank against the rank formula.
void rank_report(Outcome& o) {
  for (auto [p, ell] : {std::pair<u64, u64>{13, 5}, {37, 3}}) {
    const auto r = ssgraph::graph_report(ssgraph::build_ssgraph(p, ell, 1));
    o.require(r.cycle_rank_ud.has_value() && *r.cycle_rank_ud >= 0, "cycle rank is not a nonnegative integer");
    const auto formula = ssgraph::rank_formula(p, ell);
    o.detail << "(" << p << "," << ell << "): count " << (r.cycle_rank_ud ? *r.cycle_rank_ud : -1) << ", formula "
             << formula.get_str() << (r.cycle_rank_ud && mpq_class(*r.cycle_rank_ud) == formula ? " agree" : " differ") << "; ";
  }
}

// 12. Quasi-canonical counts.
void qc_counts(Outcome& o) {
  const u64 p = 3;
  o.require(discdyn::qc_count(p, 0, false) == 1 && discdyn::qc_count(p, 0, true) == 1, "level 0");
  for (int s = 1; s <= 3; ++s) {
    o.require(discdyn::qc_count(p, s, false) == (p + 1) * ipow(p, static_cast<std::size_t>(s - 1)), "unramified");
    o.require(discdyn::qc_count(p, s, true) == ipow(p, static_cast<std::size_t>(s)), "ramified");
  }
  o.detail << "p = 3, s <= 3";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria documented as failing");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "transition matrix and stationary distribution at (11,5,1)", 5, markov_example},
      {2, "degrees, connectivity and odd walks on the level suite", 60, degree_suite},
      {3, "simplicity and girth at (11,3,37)", 120, simplicity},
      {4, "vertex counts against point counting", 0, vertex_counts},
      {5, "volcano structure, formula and empirical", 120, volcano_structure},
      {6, "Serre-Tate dynamics and fixed p^a-circles", 0, serre_tate},
      {7, "orbit closures against residue enumeration", 0, orbit_closures},
      {8, "closed-walk endomorphisms", 0, walk_endomorphisms},
      {9, "square classes and transitivity witnesses", 0, transitivity},
      {10, "random-walk measure support and TV decay", 60, measure},
      {11, "cycle rank and rank formula report", 0, rank_report},
      {12, "quasi-canonical counts", 0, qc_counts},
  };

  std::set<int> failed;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0) o.require(secs < c.time_limit, "runtime over " + std::to_string(c.time_limit) + " s");
    if (!o.pass) failed.insert(c.id);
    std::printf("%s %2d %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs, o.summary().c_str());
    std::fflush(stdout);
  }

  std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (!only.empty()) {
    std::set<int> subset;
    for (int id : expected)
      if (std::find(only.begin(), only.end(), id) != only.end()) subset.insert(id);
    expected = subset;
  }
  if (failed == expected) return 0;
  for (int id : failed)
    if (!expected.count(id)) std::printf("unexpected failure: %d\n", id);
  for (int id : expected)
    if (!failed.count(id)) std::printf("unexpected pass: %d\n", id);
  return 1;
}
