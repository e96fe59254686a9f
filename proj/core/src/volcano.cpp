#include "hecke/volcano.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "hecke/ec.hpp"
#include "hecke/error.hpp"

namespace hecke::volcano {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

mpz_class ell_pow(u64 ell, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

std::string_view rim_type_name(RimType t) {
  switch (t) {
    case RimType::InertPoint: return "inert-point";
    case RimType::RamifiedEdge: return "ramified-edge";
    case RimType::RamifiedLoop: return "ramified-loop";
    case RimType::SplitCycle: return "split-cycle";
  }
  return "?";
}

SyntheticVolcano build_synthetic(const mpz_class& disc, u64 ell, int depth) {
  if (disc >= 0 || !qform::is_discriminant(disc)) raise(Errc::BadDiscriminant, "not a negative discriminant: " + disc.get_str());
  if (!ff::is_prime(ell)) raise(Errc::NonPrime, std::to_string(ell) + " is not prime");
  if (depth < 0) raise(Errc::InvalidArgument, "depth must be nonnegative");
  const mpz_class l2 = ell_pow(ell, 2);
  if (mpz_divisible_p(disc.get_mpz_t(), l2.get_mpz_t()) && qform::is_discriminant(disc / l2)) {
    raise(Errc::BadDiscriminant, std::to_string(ell) + " divides the conductor of " + disc.get_str());
  }
  SyntheticVolcano v;
  v.disc = disc;
  v.ell = ell;
  v.depth = depth;
  v.kronecker = qform::kronecker(disc, ell);
  if (v.kronecker == -1) {
    v.rim_type = RimType::InertPoint;
    v.rim_size = 1;
  } else {
    const auto pco = qform::prime_class_order(disc, ell);
    v.rim_size = pco.order;
    v.f_rim = pco.witness;
    if (v.kronecker == 0) {
      v.rim_type = pco.order == 1 ? RimType::RamifiedLoop : RimType::RamifiedEdge;
    } else {
      v.rim_type = RimType::SplitCycle;
    }
  }
  const mpz_class rim(static_cast<unsigned long>(v.rim_size));
  v.level_sizes.push_back(rim);
  for (int i = 1; i <= depth; ++i) {
    v.level_sizes.push_back((mpz_class(static_cast<unsigned long>(ell)) - v.kronecker) * ell_pow(ell, i - 1) * rim);
  }
  return v;
}

VolcanoGraph materialize(const SyntheticVolcano& v, std::size_t max_vertices) {
  mpz_class total = 0;
  for (const auto& s : v.level_sizes) total += s;
  if (total > mpz_class(static_cast<unsigned long>(max_vertices))) {
    raise(Errc::ScaleExceeded, "volcano has " + total.get_str() + " vertices");
  }
  VolcanoGraph g;
  g.rim_size = v.rim_size;
  auto add_vertex = [&](int level) {
    g.level.push_back(level);
    g.up.push_back(kNone);
    g.out.emplace_back();
    return g.level.size() - 1;
  };
  auto add_pair = [&](std::size_t a, std::size_t b, int sign) {
    const std::size_t fwd = g.arrows.size();
    g.arrows.push_back({a, b, fwd + 1, sign});
    g.arrows.push_back({b, a, fwd, -sign});
    g.out[a].push_back(fwd);
    g.out[b].push_back(fwd + 1);
    return fwd;
  };
  for (u64 i = 0; i < v.rim_size; ++i) add_vertex(0);
  switch (v.rim_type) {
    case RimType::InertPoint: break;
    case RimType::RamifiedLoop: {
      const std::size_t id = g.arrows.size();
      g.arrows.push_back({0, 0, id, 1});
      g.out[0].push_back(id);
      break;
    }
    case RimType::RamifiedEdge: add_pair(0, 1, 0); break;
    case RimType::SplitCycle:
      for (u64 i = 0; i < v.rim_size; ++i) add_pair(i, (i + 1) % v.rim_size, 1);
      break;
  }
  std::vector<std::size_t> frontier(v.rim_size);
  for (u64 i = 0; i < v.rim_size; ++i) frontier[i] = i;
  for (int lvl = 1; lvl <= v.depth; ++lvl) {
    const u64 kids = lvl == 1 ? static_cast<u64>(static_cast<long>(v.ell) - v.kronecker) : v.ell;
    std::vector<std::size_t> next;
    for (std::size_t parent : frontier) {
      for (u64 c = 0; c < kids; ++c) {
        const std::size_t child = add_vertex(lvl);
        const std::size_t down = add_pair(parent, child, 0);
        g.up[child] = down + 1;
        next.push_back(child);
      }
    }
    frontier = std::move(next);
  }
  return g;
}

ReducedWalk reduce_walk(const VolcanoGraph& g, std::size_t start, const std::vector<std::size_t>& walk) {
  if (start >= g.size()) raise(Errc::InvalidArgument, "start vertex out of range");
  std::size_t at = start;
  std::vector<std::size_t> stack;
  long signed_steps = 0;
  for (std::size_t a : walk) {
    if (a >= g.arrows.size()) raise(Errc::InvalidArgument, "arrow out of range");
    if (g.arrows[a].src != at) raise(Errc::InvalidArgument, "walk is not contiguous");
    at = g.arrows[a].dst;
    if (!stack.empty() && g.arrows[stack.back()].dual == a) {
      stack.pop_back();
    } else {
      stack.push_back(a);
    }
  }
  if (at != start) raise(Errc::NotClosed, "walk does not return to its start");
  for (std::size_t a : stack) signed_steps += g.arrows[a].rim_sign;
  ReducedWalk r;
  r.reduced = std::move(stack);
  const long a = static_cast<long>(std::max<u64>(g.rim_size, 1));
  r.winding = signed_steps / a;
  if (r.winding != 0) {
    for (std::size_t v = start; g.level[v] > 0; v = g.arrows[g.up[v]].dst) r.to_rim.push_back(g.up[v]);
  }
  return r;
}

std::vector<std::size_t> normal_form_walk(const VolcanoGraph& g, const ReducedWalk& r) {
  std::vector<std::size_t> w = r.to_rim;
  if (r.winding != 0) {
    std::size_t at = w.empty() ? kNone : g.arrows[w.back()].dst;
    if (at == kNone) {
      // Start lies on the rim; recover it from the reduced walk.
      at = g.arrows[r.reduced.front()].src;
    }
    const int sign = r.winding > 0 ? 1 : -1;
    const u64 steps = static_cast<u64>(std::labs(r.winding)) * std::max<u64>(g.rim_size, 1);
    for (u64 s = 0; s < steps; ++s) {
      const auto& outs = g.out[at];
      const auto it = std::find_if(outs.begin(), outs.end(), [&](std::size_t a) { return g.arrows[a].rim_sign == sign; });
      w.push_back(*it);
      at = g.arrows[*it].dst;
    }
  }
  for (std::size_t i = r.to_rim.size(); i-- > 0;) w.push_back(g.arrows[r.to_rim[i]].dual);
  return w;
}

TraceNorm walk_endo(const SyntheticVolcano& v, std::size_t length, long winding) {
  const u64 turn = v.rim_size * static_cast<u64>(std::labs(winding));
  if (turn > length || (length - turn) % 2 != 0) raise(Errc::InvalidArgument, "winding incompatible with walk length");
  const mpz_class scalar = ell_pow(v.ell, static_cast<int>((length - turn) / 2));
  mpz_class tr_prev = 2, tr = 2;
  mpz_class nrm = 1;
  if (winding != 0) {
    if (!v.f_rim) raise(Errc::InvalidArgument, "inert rim has no winding");
    const mpz_class t = v.f_rim->trace, n = v.f_rim->norm;
    tr = t;
    tr_prev = 2;
    for (long k = 1; k < std::labs(winding); ++k) {
      mpz_class next = t * tr - n * tr_prev;
      tr_prev = tr;
      tr = next;
    }
    mpz_pow_ui(nrm.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(std::labs(winding)));
  }
  return TraceNorm{scalar * tr, scalar * scalar * nrm};
}

EmpiricalVolcano build_empirical(u64 p, u64 j0, u64 ell, int depth) {
  if (!ff::is_prime(p)) raise(Errc::NonPrime, std::to_string(p) + " is not prime");
  if (!ff::is_prime(ell)) raise(Errc::NonPrime, std::to_string(ell) + " is not prime");
  if (ell == p) raise(Errc::EqualCharacteristic, "ell equals the characteristic");
  if (p < 5) raise(Errc::UnsupportedCharacteristic, "characteristic 2 and 3 are not supported");
  if (depth < 0) raise(Errc::InvalidArgument, "depth must be nonnegative");
  const ff::Field fp = ff::make_field(p, 1);
  const ff::Elem start = fp.from_int(static_cast<ff::i64>(j0 % p));
  if (start.is_zero() || start == fp.from_int(1728)) raise(Errc::ExcludedJ, "j = 0 and j = 1728 are excluded");
  if (ec::is_supersingular_j(start)) raise(Errc::SupersingularStart, "j = " + start.str() + " is supersingular");

  // Whole component, neighbours with multiplicity.
  std::map<ff::Elem, std::size_t> index;
  std::vector<ff::Elem> verts;
  std::vector<std::vector<std::size_t>> nbrs;
  std::deque<std::size_t> queue;
  auto intern = [&](const ff::Elem& j) {
    auto [it, fresh] = index.emplace(j, verts.size());
    if (fresh) {
      verts.push_back(j);
      nbrs.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(start);
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    const ec::Curve e = ec::model_from_j(verts[v]);
    for (const auto& k : ec::ell_subgroups(e, static_cast<int>(ell))) {
      const std::size_t w = intern(ec::j_invariant(ec::velu(e, k, static_cast<int>(ell)).target()));
      nbrs[v].push_back(w);
    }
  }
  const std::size_t n = verts.size();

  EmpiricalVolcano out;
  out.p = p;
  out.ell = ell;
  out.depth = depth;
  out.j0 = start;
  out.component_size = n;
  for (const auto& j : verts) {
    if (j.is_zero() || j == fp.from_int(1728)) out.touches_extra_automorphisms = true;
  }
  const ec::Curve e0 = ec::model_from_j(start);
  out.trace = mpz_class(static_cast<unsigned long>(p + 1)) - ec::count_points(e0);
  out.frob_disc = out.trace * out.trace - 4 * mpz_class(static_cast<unsigned long>(p));

  std::vector<u64> deg(n);
  u64 max_deg = 0;
  for (std::size_t v = 0; v < n; ++v) {
    deg[v] = nbrs[v].size();
    max_deg = std::max(max_deg, deg[v]);
  }
  std::vector<int> level(n, 0);
  if (max_deg == ell + 1 && n > 1) {
    std::vector<int> dist(n, -1);
    std::deque<std::size_t> q;
    for (std::size_t v = 0; v < n; ++v) {
      if (deg[v] == 1) {
        dist[v] = 0;
        q.push_back(v);
      }
    }
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : nbrs[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
      }
    }
    int h = 0;
    for (int d : dist) h = std::max(h, d);
    out.height = h;
    for (std::size_t v = 0; v < n; ++v) level[v] = h - dist[v];
  }
  out.level_sizes.assign(static_cast<std::size_t>(out.height) + 1, 0);
  for (int l : level) ++out.level_sizes[static_cast<std::size_t>(l)];
  out.rim_size = out.level_sizes[0];

  mpz_class f2 = out.frob_disc;
  const mpz_class l2 = ell_pow(ell, 2);
  while (mpz_divisible_p(f2.get_mpz_t(), l2.get_mpz_t()) && qform::is_discriminant(f2 / l2)) {
    f2 /= l2;
    ++out.height_from_trace;
  }
  out.rim_disc = out.frob_disc / ell_pow(ell, 2 * out.height);
  out.kronecker = qform::kronecker(out.rim_disc, ell);

  bool first = true;
  for (std::size_t v = 0; v < n; ++v) {
    if (level[v] != 0) continue;
    const u64 rd = static_cast<u64>(std::count_if(nbrs[v].begin(), nbrs[v].end(), [&](std::size_t w) { return level[w] == 0; }));
    if (first) {
      out.rim_degree = rd;
      first = false;
    } else if (rd != out.rim_degree) {
      out.rim_degree_uniform = false;
    }
  }

  // Vertices within distance depth of the start.
  std::vector<int> dist(n, -1);
  std::vector<std::size_t> order;
  std::deque<std::size_t> q{0};
  dist[0] = 0;
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop_front();
    order.push_back(v);
    if (dist[v] == depth) continue;
    for (std::size_t w : nbrs[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push_back(w);
      }
    }
  }
  std::vector<std::size_t> local(n, kNone);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t v = order[i];
    local[v] = i;
    out.vertices.push_back(verts[v]);
    out.level.push_back(level[v]);
    out.distance.push_back(dist[v]);
    out.degree.push_back(deg[v]);
  }
  for (std::size_t v : order) {
    if (dist[v] >= depth) continue;
    for (std::size_t w : nbrs[v]) out.arrows.emplace_back(local[v], local[w]);
  }
  return out;
}

std::pair<padic::Zp, padic::Zp> lambda_of_endo(const mpz_class& trace, const mpz_class& norm, u64 p, int precision) {
  if (p == 2) raise(Errc::UnsupportedCharacteristic, "lambda extraction needs p odd");
  const padic::Zp t(p, precision, trace);
  const padic::Zp n(p, precision, norm);
  if (trace * trace == 4 * norm) {
    // Scalar endomorphism: both roots coincide.
    if (!n.is_unit()) raise(Errc::NotAUnit, "norm must be prime to p");
    const padic::Zp one = padic::Zp::from_int(p, precision, 1);
    return {one, one};
  }
  if (!n.is_unit()) raise(Errc::NotAUnit, "norm must be prime to p");
  // The discriminant is an exact integer: split it as p^(2k) times a unit square.
  const mpz_class disc = trace * trace - 4 * norm;
  const int v = padic::valuation(disc, p);
  const mpz_class unit = disc / padic::pow_p(p, v);
  const padic::Zp u(p, precision, unit);
  if (v % 2 != 0 || !padic::is_square_unit(u)) {
    raise(Errc::NotSplit, "x^2 - " + trace.get_str() + "x + " + norm.get_str() + " has no roots in Z_" + std::to_string(p));
  }
  const padic::Zp s = padic::sqrt(u) * padic::Zp(p, precision, padic::pow_p(p, v / 2));
  const padic::Zp half = padic::Zp::from_int(p, precision, 2).inv();
  const padic::Zp r1 = (t + s) * half;
  const padic::Zp r2 = (t - s) * half;
  return {r1 / r2, r2 / r1};
}

}  // namespace hecke::volcano
