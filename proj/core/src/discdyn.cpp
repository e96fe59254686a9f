#include "hecke/discdyn.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "hecke/error.hpp"

namespace hecke::discdyn {

namespace {

Wq times_p(const Wq& w) { return w.scaled(Zp::from_int(w.p(), w.precision(), static_cast<long>(w.p()))); }

void check_disc_point(const Wq& w) {
  if (w.valuation_capped() < 1) raise(Errc::ChartEscape, "point " + w.str() + " lies outside U");
}

double total_variation(const std::vector<u64>& x, u64 nx, const std::vector<u64>& y, u64 ny) {
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += std::fabs(static_cast<double>(x[i]) / static_cast<double>(nx) - static_cast<double>(y[i]) / static_cast<double>(ny));
  }
  return s / 2;
}

}  // namespace

Zp apply(const DiscAutomorphism& f, const Zp& t) {
  if (!f.lambda.is_unit()) raise(Errc::NotAUnit, "disc automorphism exponent must be a unit");
  return padic::binom_pow(t, f.lambda);
}

ZpMatrix serre_tate_multivar(const ZpMatrix& f_inv, const ZpMatrix& g_dag, const ZpMatrix& t) {
  const std::size_t g = t.size();
  auto square = [g](const ZpMatrix& m) {
    return m.size() == g && std::all_of(m.begin(), m.end(), [g](const auto& row) { return row.size() == g; });
  };
  if (g == 0 || !square(f_inv) || !square(g_dag) || !square(t)) raise(Errc::InvalidArgument, "matrices must be square of equal size");
  ZpMatrix logs(g);
  for (std::size_t r = 0; r < g; ++r) {
    for (std::size_t s = 0; s < g; ++s) logs[r].push_back(padic::log1p(t[r][s]));
  }
  ZpMatrix out(g);
  const Zp zero = t[0][0] - t[0][0];
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) {
      Zp acc = zero;
      for (std::size_t r = 0; r < g; ++r) {
        for (std::size_t s = 0; s < g; ++s) acc += f_inv[r][i] * logs[r][s] * g_dag[s][j];
      }
      out[i].push_back(padic::exp(acc) - 1);
    }
  }
  return out;
}

bool classify_periodic(const Zp& lambda, int m, int a) {
  if (m < 1) raise(Errc::InvalidArgument, "period must be positive");
  if (a < 0) raise(Errc::InvalidArgument, "conductor valuation must be nonnegative");
  if (a == 0) return true;
  return padic::cyclo_binom_fixed(lambda.p(), a, lambda.pow(static_cast<long>(m)), lambda.precision());
}

mpz_class qc_count(u64 p, int s, bool ramified) {
  if (s < 0) raise(Errc::InvalidArgument, "level must be nonnegative");
  if (s == 0) return 1;
  if (ramified) return padic::pow_p(p, s);
  return mpz_class(static_cast<unsigned long>(p + 1)) * padic::pow_p(p, s - 1);
}

QuatUnit QuatUnit::identity(u64 p, int precision) {
  return {Wq::from_ints(p, precision, 1, 0), Wq::from_ints(p, precision, 0, 0)};
}

Zp QuatUnit::det() const { return a.norm() - b.norm() * static_cast<long>(a.p()); }

QuatUnit operator*(const QuatUnit& l, const QuatUnit& r) {
  return {l.a * r.a + times_p(l.b.sigma() * r.b), l.b * r.a + l.a.sigma() * r.b};
}

Wq mobius_apply(const QuatUnit& g, const Wq& w) {
  check_disc_point(w);
  const Wq num = g.a * w + times_p(g.b.sigma());
  const Wq den = g.b * w + g.a.sigma();
  if (!den.is_unit()) raise(Errc::ChartEscape, "denominator is not a unit");
  const Wq out = num / den;
  check_disc_point(out);
  return out;
}

TransitivityWitness transitivity_witness(const Wq& x, u64 ell) {
  check_disc_point(x);
  const u64 p = x.p();
  const int prec = x.precision();
  // b = x^sigma a / p makes gamma(0) = x, with det = N(a) (1 - N(x) / p).
  const Wq x_over_p = x.shifted_down(1);
  for (const Wq& tu : padic::teichmuller_units(p, prec)) {
    const QuatUnit gamma{tu, x_over_p.sigma() * tu};
    const Zp det = gamma.det();
    if (!det.is_unit()) continue;
    if (!ssgraph::sat_membership(det, ell)) continue;
    return {gamma, det, padic::is_square_unit(det)};
  }
  raise(Errc::SearchExhausted, "no Teichmuller representative gives an admissible determinant");
}

QuatUnit lift_endo(const ssgraph::WalkEndo& e, u64 p, int precision) {
  const Zp norm(p, precision, e.norm);
  if (!norm.is_unit()) raise(Errc::NotAUnit, "endomorphism norm must be prime to p");
  const Zp half = Zp::from_int(p, precision, 2).inv();
  const Zp trace(p, precision, e.trace);
  const Zp r = (trace * trace - norm * 4) * half * half;
  const Zp d_inv = Zp::from_int(p, precision, static_cast<long>(Wq::nonresidue(p))).inv();
  // b = 0 would fix the origin; start the search at the first nonzero b.
  for (u64 idx = 1; idx < p * p; ++idx) {
    const Wq b = Wq::from_ints(p, precision, static_cast<long>(idx % p), static_cast<long>(idx / p));
    const Zp x = (r - b.norm() * static_cast<long>(p)) * d_inv;
    if (!x.is_unit() || !padic::is_square_unit(x)) continue;
    const QuatUnit g{Wq(trace * half, padic::sqrt(x)), b};
    if (!(g.det() == norm)) raise(Errc::InvalidArgument, "lifted generator has the wrong determinant");
    return g;
  }
  raise(Errc::SearchExhausted, "no lift for trace " + e.trace.get_str() + " and norm " + e.norm.get_str());
}

std::vector<QuatUnit> hecke_generators(const ssgraph::SSGraph& g, std::size_t max_length, int precision) {
  std::vector<QuatUnit> out;
  std::set<std::pair<mpz_class, mpz_class>> seen;
  for (const auto& w : ssgraph::closed_walks(g, 0, max_length)) {
    const ssgraph::WalkEndo e = ssgraph::walk_char_poly(g, 0, w);
    if (e.trace * e.trace == 4 * e.norm) continue;
    if (!seen.emplace(e.trace, e.norm).second) continue;
    try {
      out.push_back(lift_endo(e, g.p(), precision));
    } catch (const Error& err) {
      if (err.code() != Errc::SearchExhausted) throw;
    }
  }
  return out;
}

std::size_t EmpiricalMeasure::support() const {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](u64 c) { return c > 0; }));
}

std::size_t residue_class_count(u64 p, int k) {
  if (k < 1) raise(Errc::InvalidArgument, "class exponent must be positive");
  const mpz_class m = padic::pow_p(p, k - 1);
  const mpz_class n = m * m;
  if (n > mpz_class(1UL << 24)) raise(Errc::ScaleExceeded, "too many residue classes");
  return static_cast<std::size_t>(n.get_ui());
}

std::size_t residue_class(const Wq& w, int k) {
  check_disc_point(w);
  if (k < 1) raise(Errc::InvalidArgument, "class exponent must be positive");
  if (k > w.precision()) raise(Errc::PrecisionExhausted, "class exponent exceeds precision");
  if (k == 1) return 0;
  const mpz_class m = padic::pow_p(w.p(), k - 1);
  const Wq z = w.shifted_down(1);
  const mpz_class lo = z.a0().value() % m;
  const mpz_class hi = z.a1().value() % m;
  return static_cast<std::size_t>(mpz_class(lo + m * hi).get_ui());
}

EmpiricalMeasure random_walk(const std::vector<QuatUnit>& generators, const Wq& x0, u64 steps, u64 seed, int k) {
  if (generators.empty()) raise(Errc::InvalidArgument, "no generators");
  check_disc_point(x0);
  std::vector<QuatUnit> inverses;
  for (const auto& g : generators) {
    if (!g.det().is_unit()) raise(Errc::NotAUnit, "generator determinant is not a unit");
    inverses.push_back(g.inverse());
  }
  EmpiricalMeasure m;
  m.p = x0.p();
  m.k = k;
  m.counts.assign(residue_class_count(m.p, k), 0);
  std::vector<std::pair<u64, std::vector<u64>>> snapshots;
  u64 next_snapshot = 1;
  while (next_snapshot < m.counts.size()) next_snapshot *= 2;
  std::mt19937_64 rng(seed);
  Wq x = x0;
  for (u64 n = 1; n <= steps; ++n) {
    x = mobius_apply(inverses[rng() % inverses.size()], x);
    ++m.counts[residue_class(x, k)];
    ++m.total;
    if (n == next_snapshot) {
      snapshots.emplace_back(n, m.counts);
      next_snapshot *= 2;
    }
  }
  for (std::size_t i = 0; i + 1 < snapshots.size(); ++i) {
    const auto& [n1, c1] = snapshots[i];
    const auto& [n2, c2] = snapshots[i + 1];
    m.checkpoints.push_back({n1, total_variation(c1, n1, c2, n2)});
  }
  return m;
}

}  // namespace hecke::discdyn
