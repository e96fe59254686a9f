#include "hecke/ssgraph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <numeric>
#include <set>

#include "hecke/error.hpp"
#include "hecke/qform.hpp"

namespace hecke::ssgraph {

namespace {

using ec::Curve;
using ec::Point;
using ff::Elem;
using ff::Embedding;
using ff::Field;

constexpr long kAuxiliaryModuli[] = {5, 7, 11, 13, 17, 19, 23};

Field field_for_level(u64 p, u64 level) {
  if (level <= 1) return ff::make_field(p, 2);
  const ff::Field f2 = ff::make_field(p, 2);
  const Curve probe(f2.zero(), f2.one());
  return ff::make_field(p, ec::torsion_field_degree(probe, static_cast<long>(level)));
}

void validate(u64 p, u64 ell, u64 level) {
  if (!ff::is_prime(p)) raise(Errc::NonPrime, std::to_string(p) + " is not prime");
  if (p < 5) raise(Errc::UnsupportedCharacteristic, "supersingular graphs need p >= 5");
  if (ell % 2 == 0) raise(Errc::EvenEll, "ell must be odd");
  if (!ff::is_prime(ell)) raise(Errc::NonPrime, std::to_string(ell) + " is not prime");
  if (ell == p) raise(Errc::SharedCharacteristic, "ell must differ from p");
  if (level < 1) raise(Errc::InvalidArgument, "level must be positive");
  if (std::gcd(level, p * ell) != 1) raise(Errc::SharedCharacteristic, "gcd(N, p*ell) != 1");
}

long nonneg_mod(long v, long m) {
  long r = ((v % m) + m) % m;
  return r;
}

}  // namespace

SSGraph::SSGraph(u64 p, u64 ell, u64 level, std::vector<SSVertex> vertices, std::vector<SSArrow> arrows)
    : p_(p),
      ell_(ell),
      level_(level),
      base_(ff::make_field(p, 2)),
      point_field_(field_for_level(p, level)),
      vertices_(std::move(vertices)),
      arrows_(std::move(arrows)) {
  const std::size_t n = vertices_.size();
  out_.assign(n, {});
  adjacency_.assign(n, std::vector<long>(n, 0));
  for (std::size_t a = 0; a < arrows_.size(); ++a) {
    const auto& arr = arrows_[a];
    if (arr.src >= n || arr.dst >= n) raise(Errc::InvalidArgument, "arrow endpoint out of range");
    out_[arr.src].push_back(a);
    ++adjacency_[arr.src][arr.dst];
  }
}

bool SSGraph::rigid() const {
  return std::all_of(vertices_.begin(), vertices_.end(), [](const SSVertex& v) { return v.aut_order == 1; });
}

bool SSGraph::solid() const {
  return std::all_of(vertices_.begin(), vertices_.end(), [](const SSVertex& v) { return v.aut_order <= 2; });
}

ec::Isogeny SSGraph::isogeny(const WalkStep& step) const {
  if (step.arrow >= arrows_.size()) raise(Errc::InvalidArgument, "arrow out of range");
  const auto& arr = arrows_[step.arrow];
  if (step.label >= arr.labels.size()) raise(Errc::InvalidArgument, "label out of range");
  return ec::Isogeny(vertices_[arr.src].curve, arr.kernel, static_cast<int>(ell_), arr.labels[step.label]);
}

std::size_t SSGraph::end_of(std::size_t start, const Walk& w) const {
  std::size_t at = start;
  for (const auto& s : w) {
    if (s.arrow >= arrows_.size()) raise(Errc::InvalidArgument, "arrow out of range");
    if (arrows_[s.arrow].src != at) raise(Errc::InvalidArgument, "walk is not contiguous");
    at = arrows_[s.arrow].dst;
  }
  return at;
}

const ec::TorsionBasis& SSGraph::torsion(std::size_t vertex, long m) const {
  std::lock_guard lock(cache_->mutex);
  auto& slot = cache_->torsion[{vertex, m}];
  if (!slot) slot = std::make_unique<ec::TorsionBasis>(ec::torsion_basis(vertices_[vertex].curve, m));
  return *slot;
}

bool operator==(const SSGraph& a, const SSGraph& b) {
  if (a.p_ != b.p_ || a.ell_ != b.ell_ || a.level_ != b.level_) return false;
  if (a.vertices_.size() != b.vertices_.size() || a.arrows_.size() != b.arrows_.size()) return false;
  for (std::size_t i = 0; i < a.vertices_.size(); ++i) {
    const auto& x = a.vertices_[i];
    const auto& y = b.vertices_[i];
    if (x.id != y.id || !(x.j == y.j) || !(x.curve == y.curve) || !(x.point == y.point) || x.aut_order != y.aut_order) return false;
  }
  for (std::size_t i = 0; i < a.arrows_.size(); ++i) {
    const auto& x = a.arrows_[i];
    const auto& y = b.arrows_[i];
    if (x.src != y.src || x.dst != y.dst || x.kernel.coeffs() != y.kernel.coeffs() || x.labels != y.labels) return false;
  }
  return true;
}

std::vector<Elem> supersingular_js(u64 p) {
  if (!ff::is_prime(p)) raise(Errc::NonPrime, std::to_string(p) + " is not prime");
  if (p < 5) raise(Errc::UnsupportedCharacteristic, "supersingular graphs need p >= 5");
  const Field f2 = ff::make_field(p, 2);
  std::optional<Elem> seed;
  for (u64 j = 0; j < p && !seed; ++j) {
    const Elem cand = f2.from_int(static_cast<ff::i64>(j));
    if (ec::is_supersingular_j(cand)) seed = cand;
  }
  if (!seed) raise(Errc::NotSupersingular, "no supersingular j-invariant in F_p");
  std::set<Elem> seen{*seed};
  std::deque<Elem> queue{*seed};
  while (!queue.empty()) {
    const Elem j = queue.front();
    queue.pop_front();
    const Curve e = ec::canonical_ss_model(j);
    for (const auto& k : ec::ell_subgroups(e, 2)) {
      const Elem next = ec::velu(e, k, 2).quotient().j();
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return {seen.begin(), seen.end()};
}

SSGraph build_ssgraph(u64 p, u64 ell, u64 level) {
  validate(p, ell, level);
  const std::vector<Elem> js = supersingular_js(p);
  if (js.size() * level * level > kMaxVertexBudget) {
    raise(Errc::ScaleExceeded, "instance exceeds " + std::to_string(kMaxVertexBudget) + " marked curves");
  }
  const Field f2 = ff::make_field(p, 2);
  const Field big = field_for_level(p, level);
  const Embedding emb(f2, big);
  const long n = static_cast<long>(level);

  std::map<Elem, std::size_t> j_index;
  std::vector<Curve> curves;
  for (const auto& j : js) {
    j_index.emplace(j, curves.size());
    curves.push_back(ec::canonical_ss_model(j));
  }

  std::vector<SSVertex> vertices;
  std::map<std::pair<std::size_t, Point>, std::size_t> vertex_of;
  for (std::size_t ji = 0; ji < curves.size(); ++ji) {
    const Curve& e = curves[ji];
    std::vector<Elem> auts;
    for (const auto& u : ec::automorphisms(e)) auts.push_back(emb(u));
    std::set<Point> reps;
    if (level == 1) {
      reps.insert(Point{});
    } else {
      const ec::TorsionBasis tb = ec::torsion_basis(e, n);
      for (const auto& [pt, ij] : tb.log) {
        if (std::gcd(std::gcd(ij.first, ij.second), n) != 1) continue;
        Point best = pt;
        for (const auto& u : auts) best = std::min(best, ec::scale_point(u, pt));
        reps.insert(best);
      }
    }
    for (const auto& rep : reps) {
      SSVertex v;
      v.id = vertices.size();
      v.j = js[ji];
      v.curve = e;
      v.point = rep;
      v.aut_order = static_cast<std::size_t>(
          std::count_if(auts.begin(), auts.end(), [&](const Elem& u) { return ec::scale_point(u, rep) == rep; }));
      vertex_of.emplace(std::make_pair(ji, rep), v.id);
      vertices.push_back(std::move(v));
    }
  }

  std::vector<SSArrow> arrows;
  for (std::size_t ji = 0; ji < curves.size(); ++ji) {
    const Curve& e = curves[ji];
    struct Branch {
      ff::Poly kernel;
      std::size_t target;
      std::vector<Elem> isos;      // over F_{p^2}, ascending
      std::vector<Elem> isos_big;  // the same, embedded
      std::optional<ec::IsogenyMap> map;
    };
    std::vector<Branch> branches;
    for (const auto& k : ec::ell_subgroups(e, static_cast<int>(ell))) {
      const ec::Isogeny phi = ec::velu(e, k, static_cast<int>(ell));
      const Elem tj = phi.quotient().j();
      const auto it = j_index.find(tj);
      if (it == j_index.end()) raise(Errc::InvalidArgument, "isogenous curve is not supersingular");
      Branch b{k, it->second, ec::isomorphisms(phi.quotient(), curves[it->second]), {}, std::nullopt};
      if (b.isos.empty()) raise(Errc::InvalidArgument, "quotient is not isomorphic to its canonical model");
      for (const auto& u : b.isos) b.isos_big.push_back(emb(u));
      if (level > 1) b.map.emplace(phi.over(big));
      branches.push_back(std::move(b));
    }
    if (branches.size() != ell + 1) raise(Errc::InvalidArgument, "canonical model lacks rational subgroups");
    for (auto it = vertex_of.lower_bound({ji, Point{}}); it != vertex_of.end() && it->first.first == ji; ++it) {
      const Point& pt = it->first.second;
      for (const auto& b : branches) {
        SSArrow arr;
        arr.src = it->second;
        arr.kernel = b.kernel;
        Point best;
        if (level == 1) {
          arr.labels = b.isos;
        } else {
          const Point img = (*b.map)(pt);
          std::vector<Point> moved;
          for (const auto& u : b.isos_big) moved.push_back(ec::scale_point(u, img));
          best = *std::min_element(moved.begin(), moved.end());
          for (std::size_t i = 0; i < moved.size(); ++i) {
            if (moved[i] == best) arr.labels.push_back(b.isos[i]);
          }
        }
        const auto dst = vertex_of.find({b.target, best});
        if (dst == vertex_of.end()) raise(Errc::InvalidArgument, "image point is not a vertex representative");
        arr.dst = dst->second;
        arrows.push_back(std::move(arr));
      }
    }
  }
  std::stable_sort(arrows.begin(), arrows.end(), [](const SSArrow& a, const SSArrow& b) { return a.src < b.src; });
  return SSGraph(p, ell, level, std::move(vertices), std::move(arrows));
}

mpq_class rank_formula(u64 p, u64 ell) {
  mpq_class gamma = qform::hurwitz_H(4 * ell) / 2;
  mpq_class r = 1 + gamma / 2 + mpq_class(static_cast<long>((ell - 1) * (p - 1)), 24);
  r.canonicalize();
  return r;
}

GraphReport graph_report(const SSGraph& g) {
  GraphReport r;
  const std::size_t n = g.vertices().size();
  const auto& adj = g.adjacency();
  r.out_degrees.assign(n, 0);
  r.in_degrees.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.out_degrees[i] += adj[i][j];
      r.in_degrees[j] += adj[i][j];
      if (i == j) r.loops += static_cast<std::size_t>(adj[i][j]);
      if (adj[i][j] > 1) ++r.multi_edges;
    }
  }
  r.simple = r.loops == 0 && r.multi_edges == 0;
  r.rigid = g.rigid();
  r.solid = g.solid();

  auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        const long e = forward ? adj[v][w] : adj[w][v];
        if (e > 0 && !seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  r.connected = n > 0 && reach(true) && reach(false);

  // Reaching some vertex with both parities yields an odd closed walk.
  std::vector<std::array<char, 2>> par(n, {0, 0});
  std::deque<std::pair<std::size_t, int>> q{{0, 0}};
  par[0][0] = 1;
  while (!q.empty()) {
    const auto [v, s] = q.front();
    q.pop_front();
    for (std::size_t w = 0; w < n; ++w) {
      if (adj[v][w] > 0 && !par[w][1 - s]) {
        par[w][1 - s] = 1;
        q.push_back({w, 1 - s});
      }
    }
  }
  r.bipartite = !std::any_of(par.begin(), par.end(), [](const auto& b) { return b[0] && b[1]; });

  for (std::size_t s = 0; s < n; ++s) {
    std::vector<long> dist(n, -1);
    std::deque<std::size_t> bq{s};
    dist[s] = 0;
    while (!bq.empty()) {
      const std::size_t v = bq.front();
      bq.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        if (adj[v][w] == 0) continue;
        if (w == s) {
          const std::size_t len = static_cast<std::size_t>(dist[v] + 1);
          if (!r.girth || len < *r.girth) r.girth = len;
        } else if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          bq.push_back(w);
        }
      }
    }
  }

  if (g.level() == 1) {
    std::size_t self_dual = 0;
    for (std::size_t a = 0; a < g.arrows().size(); ++a) {
      const auto& arr = g.arrows()[a];
      if (arr.src != arr.dst) continue;
      const ff::Poly dk = ec::dual_kernel(g.isogeny({a, 0}));
      if (dk.coeffs() == arr.kernel.coeffs()) ++self_dual;
    }
    r.self_dual_loops = self_dual;
    const long v = static_cast<long>(n);
    const long total = static_cast<long>(g.arrows().size());
    r.cycle_rank_ud = (total + static_cast<long>(self_dual)) / 2 - v + 1;
    r.rank_formula = rank_formula(g.p(), g.ell());
  }
  return r;
}

std::vector<long> auxiliary_moduli(const SSGraph& g) {
  std::vector<std::pair<u64, long>> ranked;
  for (long m : kAuxiliaryModuli) {
    if (std::gcd(static_cast<u64>(m), g.p() * g.ell() * g.level()) != 1) continue;
    ranked.emplace_back(ff::mult_order(g.p() % static_cast<u64>(m), static_cast<u64>(m)), m);
  }
  std::sort(ranked.begin(), ranked.end());
  std::vector<long> out;
  for (const auto& [deg, m] : ranked) out.push_back(m);
  return out;
}

WalkEndo walk_char_poly(const SSGraph& g, std::size_t start, const Walk& w) {
  if (start >= g.vertices().size()) raise(Errc::InvalidArgument, "start vertex out of range");
  if (g.end_of(start, w) != start) raise(Errc::NotClosed, "walk does not return to its start");
  WalkEndo out;
  mpz_ui_pow_ui(out.norm.get_mpz_t(), static_cast<unsigned long>(g.ell()), static_cast<unsigned long>(w.size()));
  if (w.empty()) {
    out.trace = 2;
    return out;
  }
  std::vector<ec::Isogeny> steps;
  for (const auto& s : w) steps.push_back(g.isogeny(s));

  if (g.level() > 1) {
    Point pt = g.vertices()[start].point;
    for (const auto& phi : steps) pt = phi.over(g.point_field())(pt);
    if (!(pt == g.vertices()[start].point)) raise(Errc::NotClosed, "composite does not fix the marked point");
  }

  // Trace bound |t| <= 2 ell^{d/2}: need modulus^2 > 16 ell^d.
  const mpz_class need = 16 * out.norm;
  mpz_class modulus = 1, residue = 0;
  for (long m : auxiliary_moduli(g)) {
    if (modulus * modulus > need) break;
    const ec::TorsionBasis& tb = g.torsion(start, m);
    const Field big = tb.curve.field();
    std::vector<ec::IsogenyMap> maps;
    for (const auto& phi : steps) maps.push_back(phi.over(big));
    long mat[2][2];
    const Point basis[2] = {tb.p1, tb.p2};
    for (int col = 0; col < 2; ++col) {
      Point pt = basis[col];
      for (const auto& mp : maps) pt = mp(pt);
      const auto it = tb.log.find(pt);
      if (it == tb.log.end()) raise(Errc::InvalidArgument, "walk image left the torsion group");
      mat[0][col] = it->second.first;
      mat[1][col] = it->second.second;
    }
    const long t = nonneg_mod(mat[0][0] + mat[1][1], m);
    const long det = nonneg_mod(mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0], m);
    const long norm_mod = static_cast<long>(mpz_fdiv_ui(out.norm.get_mpz_t(), static_cast<unsigned long>(m)));
    if (det != norm_mod) raise(Errc::InvalidArgument, "torsion action has the wrong determinant");
    // Combine t mod m with the residue so far.
    mpz_class x;
    const mpz_class mm(m);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), mm.get_mpz_t());
    x = residue + modulus * (((mpz_class(t) - residue) * inv) % mm);
    modulus *= mm;
    residue = x % modulus;
    if (residue < 0) residue += modulus;
  }
  if (modulus * modulus <= need) raise(Errc::TraceAmbiguous, "auxiliary moduli do not cover the trace bound");
  out.trace = 2 * residue > modulus ? mpz_class(residue - modulus) : residue;
  return out;
}

Walk dual_return(const SSGraph& g, std::size_t start, const Walk& w) {
  if (g.level() != 1) raise(Errc::InvalidArgument, "dual return walks are defined at level 1");
  g.end_of(start, w);
  Walk back;
  for (std::size_t i = w.size(); i-- > 0;) {
    const ec::Isogeny phi = g.isogeny(w[i]);
    const ec::Isogeny psi = ec::dual(phi);
    const std::size_t from = g.arrows()[w[i].arrow].dst;
    bool found = false;
    for (std::size_t a : g.out(from)) {
      const auto& arr = g.arrows()[a];
      if (arr.kernel.coeffs() != psi.kernel().coeffs()) continue;
      const auto it = std::find(arr.labels.begin(), arr.labels.end(), psi.post());
      if (it == arr.labels.end()) continue;
      back.push_back({a, static_cast<std::size_t>(it - arr.labels.begin())});
      found = true;
      break;
    }
    if (!found) raise(Errc::InvalidArgument, "dual isogeny is not an arrow of the graph");
  }
  return back;
}

std::vector<Walk> closed_walks(const SSGraph& g, std::size_t start, std::size_t max_length, std::size_t cap) {
  const std::size_t n = g.vertices().size();
  if (start >= n) raise(Errc::InvalidArgument, "start vertex out of range");
  // back[k][v]: some walk of length exactly k leads from v to start.
  std::vector<std::vector<char>> back(1, std::vector<char>(n, 0));
  back[0][start] = 1;
  std::vector<Walk> out;
  Walk cur;
  for (std::size_t len = 1; len <= max_length && out.size() < cap; ++len) {
    std::vector<char> next(n, 0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t a : g.out(v)) next[v] |= back[len - 1][g.arrows()[a].dst];
    back.push_back(std::move(next));
    if (!back[len][start]) continue;
    auto rec = [&](auto&& self, std::size_t at, std::size_t left) -> void {
      if (out.size() >= cap) return;
      if (left == 0) {
        out.push_back(cur);
        return;
      }
      for (std::size_t a : g.out(at)) {
        const std::size_t w = g.arrows()[a].dst;
        if (!back[left - 1][w]) continue;
        cur.push_back({a, 0});
        self(self, w, left - 1);
        cur.pop_back();
      }
    };
    rec(rec, start, len);
  }
  return out;
}

u64 alpha(u64 ell, u64 level) {
  if (level == 1) return 1;
  return ff::mult_order(ell % level, level);
}

MonoidCertificates monoid_certificates(const SSGraph& g, std::size_t budget) {
  MonoidCertificates c;
  const std::size_t n = g.vertices().size();
  if (n == 0) raise(Errc::InvalidArgument, "empty graph");

  // Shortest odd closed walk through any vertex, searched from each start.
  for (std::size_t s = 0; s < n && !c.odd_walk; ++s) {
    std::vector<std::array<long, 2>> via(n, {-1, -1});
    std::deque<std::pair<std::size_t, int>> q{{s, 0}};
    std::vector<std::array<std::size_t, 2>> depth(n, {0, 0});
    via[s][0] = -2;
    while (!q.empty()) {
      const auto [v, par] = q.front();
      q.pop_front();
      if (depth[v][par] >= budget) continue;
      for (std::size_t a : g.out(v)) {
        const std::size_t w = g.arrows()[a].dst;
        if (via[w][1 - par] != -1) continue;
        via[w][1 - par] = static_cast<long>(a);
        depth[w][1 - par] = depth[v][par] + 1;
        q.push_back({w, 1 - par});
      }
    }
    if (via[s][1] >= 0) {
      Walk walk;
      std::size_t v = s;
      int par = 1;
      do {
        const std::size_t a = static_cast<std::size_t>(via[v][par]);
        walk.push_back({a, 0});
        v = g.arrows()[a].src;
        par = 1 - par;
      } while (!(v == s && par == 0));
      std::reverse(walk.begin(), walk.end());
      c.odd_walk = std::move(walk);
      c.odd_walk_start = s;
    }
  }
  if (!c.odd_walk) c.budget_exhausted = true;

  const u64 a = alpha(g.ell(), g.level());
  const auto walks = closed_walks(g, 0, budget, 4096);
  std::vector<std::pair<WalkEndo, mpz_class>> endos;  // with squarefree part of the discriminant
  for (const auto& w : walks) {
    ++c.walks_checked;
    if (w.size() % a != 0) {
      c.alpha_check = false;
      c.alpha_violation_lengths.push_back(w.size());
    }
    if (c.noncommuting_pair || endos.size() >= 64) continue;
    WalkEndo e;
    try {
      e = walk_char_poly(g, 0, w);
    } catch (const Error& err) {
      if (err.code() == Errc::TraceAmbiguous) continue;
      throw;
    }
    mpz_class disc = e.trace * e.trace - 4 * e.norm;
    if (disc == 0) continue;
    mpz_class core = disc;
    for (mpz_class f = 2; f * f <= abs(core); ++f) {
      while (mpz_divisible_p(core.get_mpz_t(), mpz_class(f * f).get_mpz_t())) core /= f * f;
    }
    for (const auto& [prev, prev_core] : endos) {
      if (prev_core != core) {
        c.noncommuting_pair = std::make_pair(prev, e);
        break;
      }
    }
    endos.emplace_back(e, core);
  }
  std::sort(c.alpha_violation_lengths.begin(), c.alpha_violation_lengths.end());
  c.alpha_violation_lengths.erase(std::unique(c.alpha_violation_lengths.begin(), c.alpha_violation_lengths.end()),
                                  c.alpha_violation_lengths.end());
  if (!c.noncommuting_pair) c.budget_exhausted = true;
  return c;
}

bool sat_membership(const padic::Zp& u, u64 ell) {
  if (!u.is_unit()) raise(Errc::NotAUnit, "square-class test needs a unit");
  const u64 p = u.p();
  if (u.precision() < (p == 2 ? 5 : 3)) raise(Errc::PrecisionExhausted, "square-class test needs more precision");
  if (ell % p == 0) raise(Errc::SharedCharacteristic, "ell must differ from p");
  const padic::Zp l = padic::Zp::from_int(p, u.precision(), static_cast<long>(ell));
  return padic::is_square_unit(u) || padic::is_square_unit(u * l.inv());
}

}  // namespace hecke::ssgraph
