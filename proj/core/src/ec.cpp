#include "hecke/ec.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "hecke/error.hpp"

namespace hecke::ec {

namespace {

u64 small_order(const Field& f) {
  if (f.order() > mpz_class(1UL << 24)) raise(Errc::ScaleExceeded, "field too large to enumerate: " + f.describe());
  return f.order().get_ui();
}

Elem elem_at(const Field& f, u64 idx) {
  std::vector<u64> c(static_cast<std::size_t>(f.degree()));
  for (auto& v : c) {
    v = idx % f.p();
    idx /= f.p();
  }
  return Elem(f, std::move(c));
}

u64 index_of(const Elem& e) {
  u64 r = 0;
  const auto& c = e.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) r = r * e.field().p() + c[i];
  return r;
}

Elem eval_mapped(const Poly& f, const Embedding& emb, const Elem& x) {
  Elem r = x.field().zero();
  for (std::size_t i = f.coeffs().size(); i-- > 0;) r = r * x + emb(f.coeffs()[i]);
  return r;
}

// Element of F_{p^2} (or F_p) identified inside the field of degree 2.
Elem to_quadratic(const Elem& j) {
  const Field f2 = ff::make_field(j.field().p(), 2);
  if (j.field() == f2) return j;
  if (j.field().degree() == 1) return Embedding(j.field(), f2)(j);
  if (j.field().degree() % 2 == 0) {
    auto d = Embedding(f2, j.field()).descend(j);
    if (d) return *d;
  }
  raise(Errc::NotSupersingular, "j-invariant " + j.str() + " does not lie in F_{p^2}");
}

}  // namespace

Curve::Curve(Elem a, Elem b) : a_(std::move(a)), b_(std::move(b)) {
  if (!(a_.field() == b_.field())) raise(Errc::InvalidArgument, "curve coefficients from different fields");
  if (a_.field().p() < 5) raise(Errc::UnsupportedCharacteristic, "short Weierstrass models need p >= 5");
  if (discriminant().is_zero()) raise(Errc::InvalidArgument, "singular curve " + str());
}

Elem Curve::discriminant() const {
  const Elem inner = a_.pow(u64{3}).scaled(4) + b_.square().scaled(27);
  return -inner.scaled(16);
}

Elem Curve::j() const {
  const Elem a3 = a_.pow(u64{3}).scaled(4);
  return a3.scaled(1728) / (a3 + b_.square().scaled(27));
}

Poly Curve::rhs() const { return Poly(field(), {b_, a_, field().zero(), field().one()}); }

Elem Curve::rhs(const Elem& x) const { return (x.square() + a_) * x + b_; }

Curve Curve::base_change(const Embedding& e) const { return Curve(e(a_), e(b_)); }

Curve Curve::scaled(const Elem& u) const {
  const Elem u2 = u.square();
  const Elem u4 = u2.square();
  return Curve(a_ * u4, b_ * u4 * u2);
}

std::string Curve::str() const { return "y^2 = x^3 + (" + a_.str() + ")x + (" + b_.str() + ")"; }

std::strong_ordering operator<=>(const Point& l, const Point& r) {
  if (l.infinity || r.infinity) return r.infinity <=> l.infinity;
  if (auto c = l.x <=> r.x; c != 0) return c;
  return l.y <=> r.y;
}

std::string Point::str() const {
  if (infinity) return "O";
  return "(" + x.str() + ", " + y.str() + ")";
}

bool on_curve(const Curve& e, const Point& pt) {
  if (pt.infinity) return true;
  return pt.y.square() == e.rhs(pt.x);
}

Point negate(const Point& pt) {
  if (pt.infinity) return pt;
  return Point::at(pt.x, -pt.y);
}

Point add(const Curve& e, const Point& l, const Point& r) {
  if (l.infinity) return r;
  if (r.infinity) return l;
  Elem slope;
  if (l.x == r.x) {
    if (l.y == -r.y) return Point{};
    slope = (l.x.square().scaled(3) + e.a()) / (l.y + l.y);
  } else {
    slope = (r.y - l.y) / (r.x - l.x);
  }
  Elem x3 = slope.square() - l.x - r.x;
  Elem y3 = slope * (l.x - x3) - l.y;
  return Point::at(std::move(x3), std::move(y3));
}

Point mul(const Curve& e, const Point& pt, const mpz_class& k) {
  if (k < 0) return mul(e, negate(pt), mpz_class(-k));
  Point r;
  const std::size_t bits = mpz_sizeinbase(k.get_mpz_t(), 2);
  if (k == 0) return r;
  for (std::size_t i = bits; i-- > 0;) {
    r = add(e, r, r);
    if (mpz_tstbit(k.get_mpz_t(), i)) r = add(e, r, pt);
  }
  return r;
}

Point mul(const Curve& e, const Point& pt, long k) { return mul(e, pt, mpz_class(k)); }

long point_order(const Curve& e, const Point& pt, long bound) {
  for (long d = 1; d <= bound; ++d) {
    if (bound % d == 0 && mul(e, pt, d).infinity) return d;
  }
  raise(Errc::InvalidArgument, "point order does not divide " + std::to_string(bound));
}

Point scale_point(const Elem& u, const Point& pt) {
  if (pt.infinity) return pt;
  const Elem u2 = u.square();
  return Point::at(u2 * pt.x, u2 * u * pt.y);
}

Point random_point(const Curve& e, std::mt19937_64& rng) {
  while (true) {
    Elem x = e.field().random(rng);
    auto y = e.rhs(x).sqrt();
    if (!y) continue;
    if (rng() & 1) return Point::at(std::move(x), -*y);
    return Point::at(std::move(x), *y);
  }
}

mpz_class count_points(const Curve& e) {
  const Field f = e.field();
  const u64 q = small_order(f);
  std::vector<char> square(q, 0);
  for (u64 i = 0; i < q; ++i) square[index_of(elem_at(f, i).square())] = 1;
  long total = 1;
  for (u64 i = 0; i < q; ++i) {
    const Elem v = e.rhs(elem_at(f, i));
    if (v.is_zero()) {
      total += 1;
    } else if (square[index_of(v)]) {
      total += 2;
    }
  }
  return mpz_class(total);
}

Elem j_invariant(const Curve& e) { return e.j(); }

Curve model_from_j(const Elem& j) {
  const Field f = j.field();
  if (j.is_zero()) return Curve(f.zero(), f.one());
  const Elem k1728 = f.from_int(1728);
  if (j == k1728) return Curve(f.one(), f.zero());
  const Elem c = k1728 - j;
  return Curve(j * c.scaled(3), j * c.square().scaled(2));
}

bool is_supersingular_j(const Elem& j) {
  const Field f = j.field();
  const u64 p = f.p();
  if (p < 5) raise(Errc::UnsupportedCharacteristic, "supersingularity test needs p >= 5");
  if (!(j.pow(p).pow(p) == j)) return false;
  const Field fp = ff::make_field(p, 1);
  std::optional<Elem> base = Embedding(fp, f).descend(j);
  if (!base) base = to_quadratic(j);
  const Curve model = model_from_j(*base);
  const mpz_class trace = model.field().order() + 1 - count_points(model);
  return trace % mpz_class(static_cast<unsigned long>(p)) == 0;
}

bool is_supersingular(const Curve& e) { return is_supersingular_j(e.j()); }

Curve canonical_ss_model(const Elem& j_in) {
  static std::mutex mutex;
  static std::map<std::pair<u64, u64>, Curve> cache;
  const Elem j = to_quadratic(j_in);
  const Field f = j.field();
  const u64 p = f.p();
  const auto key = std::make_pair(p, index_of(j));
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  if (!is_supersingular_j(j)) raise(Errc::NotSupersingular, "j = " + j.str() + " is ordinary");
  const mpz_class want = mpz_class(static_cast<unsigned long>(p - 1)) * (p - 1);
  const u64 q = small_order(f);
  std::optional<Curve> best;
  auto consider = [&](const Curve& c) {
    if (!best || std::tie(c.a(), c.b()) < std::tie(best->a(), best->b())) best = c;
  };
  if (j.is_zero() || j == f.from_int(1728)) {
    const bool zero = j.is_zero();
    for (u64 i = 1; i < q; ++i) {
      const Elem c = elem_at(f, i);
      const Curve model = zero ? Curve(f.zero(), c) : Curve(c, f.zero());
      if (count_points(model) == want) consider(model);
    }
  } else {
    const Curve base = model_from_j(j);
    const bool base_ok = count_points(base) == want;
    for (u64 i = 1; i < q; ++i) {
      const Elem t = elem_at(f, i);
      if (t.is_square() != base_ok) continue;
      consider(Curve(base.a() * t.square(), base.b() * t.square() * t));
    }
  }
  if (!best) raise(Errc::NotSupersingular, "no model with Frobenius p for j = " + j.str());
  std::lock_guard lock(mutex);
  cache.emplace(key, *best);
  return *best;
}

std::vector<Elem> isomorphisms(const Curve& source, const Curve& target) {
  const Field f = source.field();
  if (!(target.field() == f) || !(source.j() == target.j())) return {};
  Poly eq(f);
  if (source.a().is_zero()) {
    std::vector<Elem> c(7, f.zero());
    c[6] = f.one();
    c[0] = -(target.b() / source.b());
    eq = Poly(f, c);
  } else if (source.b().is_zero()) {
    std::vector<Elem> c(5, f.zero());
    c[4] = f.one();
    c[0] = -(target.a() / source.a());
    eq = Poly(f, c);
  } else {
    const Elem u2 = (target.b() / source.b()) / (target.a() / source.a());
    eq = Poly(f, {-u2, f.zero(), f.one()});
  }
  std::vector<Elem> out;
  for (const auto& u : ff::poly_roots(eq)) {
    if (source.scaled(u) == target) out.push_back(u);
  }
  return out;
}

std::vector<Elem> automorphisms(const Curve& e) { return isomorphisms(e, e); }

DivisionPolys::DivisionPolys(const Curve& e, int upto) : curve_(e) {
  const Field f = e.field();
  const Elem a = e.a(), b = e.b();
  const int top = std::max(upto, 4);
  psi_.assign(static_cast<std::size_t>(top) + 1, Poly(f));
  psi_[1] = Poly::constant(f.one());
  psi_[2] = Poly::constant(f.from_int(2));
  psi_[3] = Poly(f, {-a.square(), b.scaled(12), a.scaled(6), f.zero(), f.from_int(3)});
  psi_[4] = Poly(f, {-(b.square().scaled(8) + a.pow(u64{3})), -(a * b).scaled(4), -a.square().scaled(5), b.scaled(20),
                     a.scaled(5), f.zero(), f.one()})
                .scaled(f.from_int(4));
  const Poly rhs = e.rhs();
  const Poly rhs2 = rhs * rhs;
  const Elem half = f.from_int(2).inv();
  for (int n = 5; n <= top; ++n) {
    const auto& s = psi_;
    const int m = n / 2;
    if (n % 2 == 1) {
      const Poly t1 = s[m + 2] * s[m] * s[m] * s[m];
      const Poly t2 = s[m - 1] * s[m + 1] * s[m + 1] * s[m + 1];
      psi_[n] = (m % 2 == 0) ? rhs2 * t1 - t2 : t1 - rhs2 * t2;
    } else {
      const Poly inner = s[m + 2] * s[m - 1] * s[m - 1] - s[m - 2] * s[m + 1] * s[m + 1];
      psi_[n] = (s[m] * inner).scaled(half);
    }
  }
}

const Poly& DivisionPolys::psi(int m) const {
  if (m < 0 || m > upto()) raise(Errc::InvalidArgument, "division polynomial index out of range");
  return psi_[static_cast<std::size_t>(m)];
}

std::optional<Elem> DivisionPolys::x_multiple(const Elem& x, int m, const Embedding& emb) const {
  if (m == 1) return x;
  const Elem lo = eval_mapped(psi(m - 1), emb, x);
  const Elem mid = eval_mapped(psi(m), emb, x);
  const Elem hi = eval_mapped(psi(m + 1), emb, x);
  const Elem fx = eval_mapped(curve_.rhs(), emb, x);
  Elem num = lo * hi;
  Elem den = mid.square();
  if (m % 2 == 0) {
    den *= fx;
  } else {
    num *= fx;
  }
  if (den.is_zero()) return std::nullopt;
  return x - num / den;
}

Poly division_poly(const Curve& e, int m) {
  if (m < 1) raise(Errc::InvalidArgument, "division polynomial index must be positive");
  if (static_cast<u64>(m) % e.field().p() == 0) raise(Errc::BadTorsionOrder, "p divides m");
  if (m == 1) return Poly::constant(e.field().one());
  DivisionPolys dp(e, m);
  if (m % 2 == 1) return dp.psi(m);
  return (dp.psi(m) * e.rhs()).scaled(e.field().from_int(2).inv());
}

namespace {

bool is_small_prime(int n) { return n >= 2 && ff::is_prime(static_cast<u64>(n)); }

// Kernel polynomial of the subgroup generated by a point with x-coordinate x0
// lying in an extension, if it descends to the base field.
std::optional<Poly> subgroup_kernel(const DivisionPolys& dp, int ell, const Elem& x0, const Embedding& emb) {
  const Field big = emb.target();
  Poly prod = Poly::constant(big.one());
  for (int i = 1; i <= (ell - 1) / 2; ++i) {
    auto xi = dp.x_multiple(x0, i, emb);
    if (!xi) raise(Errc::InvalidArgument, "torsion point of unexpected order");
    prod = prod * Poly::linear(*xi);
  }
  std::vector<Elem> c;
  for (const auto& v : prod.coeffs()) {
    auto d = emb.descend(v);
    if (!d) return std::nullopt;
    c.push_back(*d);
  }
  return Poly(emb.source(), std::move(c));
}

}  // namespace

std::vector<Poly> ell_subgroups(const Curve& e, int ell) {
  const Field f = e.field();
  if (!is_small_prime(ell)) raise(Errc::InvalidArgument, std::to_string(ell) + " is not prime");
  if (static_cast<u64>(ell) == f.p()) raise(Errc::EqualCharacteristic, "ell equals the characteristic");
  std::vector<Poly> out;
  if (ell == 2) {
    for (const auto& r : ff::poly_roots(e.rhs())) out.push_back(Poly::linear(r));
  } else {
    const DivisionPolys dp(e, (ell + 1) / 2 + 1);
    const auto factors = ff::poly_factor(division_poly(e, ell));
    std::vector<char> done(factors.size(), 0);
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (done[i]) continue;
      done[i] = 1;
      const Poly& g = factors[i].poly;
      const Field big = ff::make_field(f.p(), f.degree() * g.degree());
      const Embedding emb(f, big);
      const Elem x0 = ff::poly_roots(g.mapped(emb)).front();
      auto kernel = subgroup_kernel(dp, ell, x0, emb);
      if (!kernel) continue;
      for (std::size_t k = i + 1; k < factors.size(); ++k) {
        if (!done[k] && ff::divides(factors[k].poly, *kernel)) done[k] = 1;
      }
      out.push_back(*kernel);
    }
  }
  std::sort(out.begin(), out.end(), ff::poly_less);
  return out;
}

Isogeny::Isogeny(Curve source, Poly kernel, int degree, Elem post)
    : source_(std::move(source)), kernel_(std::move(kernel)), degree_(degree), post_(std::move(post)) {
  const Elem a = source_.a(), b = source_.b();
  Elem v, w;
  if (degree_ == 2) {
    const Elem x0 = -kernel_.coeff(0);
    v = x0.square().scaled(3) + a;
    w = x0 * v;
  } else {
    const int n = kernel_.degree();
    const Elem s1 = -kernel_.coeff(n - 1);
    const Elem e2 = kernel_.coeff(n - 2);
    const Elem e3 = -kernel_.coeff(n - 3);
    const Elem p2 = s1.square() - e2.scaled(2);
    const Elem p3 = s1.pow(u64{3}) - (s1 * e2).scaled(3) + e3.scaled(3);
    const u64 nn = static_cast<u64>(n);
    v = p2.scaled(6) + a.scaled(2 * nn);
    w = p3.scaled(10) + (a * s1).scaled(6) + b.scaled(4 * nn);
  }
  quotient_ = Curve(a - v.scaled(5), b - w.scaled(7));
  target_ = quotient_.scaled(post_);
}

Isogeny Isogeny::post_composed(const Elem& u) const { return Isogeny(source_, kernel_, degree_, post_ * u); }

Isogeny velu(const Curve& e, const Poly& kernel_in, int ell) {
  if (kernel_in.is_zero()) raise(Errc::NotAKernel, "zero kernel polynomial");
  const Poly kernel = kernel_in.monic();
  if (ell == 2) {
    if (kernel.degree() != 1 || !ff::divides(kernel, e.rhs())) raise(Errc::NotAKernel, "not a 2-torsion kernel");
  } else {
    if (ell < 3 || ell % 2 == 0 || kernel.degree() != (ell - 1) / 2 || !ff::divides(kernel, division_poly(e, ell))) {
      raise(Errc::NotAKernel, "kernel polynomial does not divide the division polynomial");
    }
  }
  return Isogeny(e, kernel, ell, e.field().one());
}

IsogenyMap::IsogenyMap(const Isogeny& phi, const Field& big) : degree_(phi.degree()) {
  const Embedding emb(phi.source().field(), big);
  source_ = phi.source().base_change(emb);
  target_ = phi.target().base_change(emb);
  kernel_ = phi.kernel().mapped(emb);
  d1_ = kernel_.derivative();
  d2_ = d1_.derivative();
  d3_ = d2_.derivative();
  u_ = emb(phi.post());
  if (degree_ == 2) {
    x0_ = -kernel_.coeff(0);
    t0_ = x0_.square().scaled(3) + source_.a();
  } else {
    s1_ = -kernel_.coeff(kernel_.degree() - 1);
  }
}

std::optional<Elem> IsogenyMap::x_image(const Elem& x) const {
  const Elem u2 = u_.square();
  if (degree_ == 2) {
    const Elem dx = x - x0_;
    if (dx.is_zero()) return std::nullopt;
    return u2 * (x + t0_ / dx);
  }
  const Elem d = kernel_.eval(x);
  if (d.is_zero()) return std::nullopt;
  const Elem dinv = d.inv();
  const Elem r = d1_.eval(x) * dinv;
  const Elem r1 = d2_.eval(x) * dinv - r.square();
  const Elem fx = source_.rhs(x);
  const Elem fpx = x.square().scaled(3) + source_.a();
  const Elem xx = x.scaled(static_cast<u64>(degree_)) - s1_.scaled(2) - (fpx * r).scaled(2) - (fx * r1).scaled(4);
  return u2 * xx;
}

Point IsogenyMap::operator()(const Point& pt) const {
  if (pt.infinity) return pt;
  const Elem& x = pt.x;
  Elem xx, dxx;
  if (degree_ == 2) {
    const Elem dx = x - x0_;
    if (dx.is_zero()) return Point{};
    const Elem inv = dx.inv();
    xx = x + t0_ * inv;
    dxx = x.field().one() - t0_ * inv.square();
  } else {
    const Elem d = kernel_.eval(x);
    if (d.is_zero()) return Point{};
    const Elem dinv = d.inv();
    const Elem d1 = d1_.eval(x), d2 = d2_.eval(x), d3 = d3_.eval(x);
    const Elem r = d1 * dinv;
    const Elem r1 = d2 * dinv - r.square();
    const Elem r2 = d3 * dinv - (r * d2 * dinv).scaled(3) + r.pow(u64{3}).scaled(2);
    const Elem fx = source_.rhs(x);
    const Elem fpx = x.square().scaled(3) + source_.a();
    const u64 l = static_cast<u64>(degree_);
    xx = x.scaled(l) - s1_.scaled(2) - (fpx * r).scaled(2) - (fx * r1).scaled(4);
    dxx = x.field().from_int(static_cast<ff::i64>(l)) - (x * r).scaled(12) - (fpx * r1).scaled(6) - (fx * r2).scaled(4);
  }
  const Elem u2 = u_.square();
  return Point::at(u2 * xx, u2 * u_ * pt.y * dxx);
}

Poly dual_kernel(const Isogeny& phi) {
  const Curve& e = phi.source();
  const Field f = e.field();
  const int ell = phi.degree();
  const DivisionPolys target_dp(phi.target(), (ell + 1) / 2 + 1);
  Poly candidates = ell == 2 ? e.rhs() : division_poly(e, ell);
  candidates = candidates / ff::gcd(candidates, phi.kernel());
  const Poly g = ff::poly_factor(candidates).front().poly;
  const Field big = ff::make_field(f.p(), f.degree() * g.degree());
  const Embedding emb(f, big);
  const Elem x0 = ff::poly_roots(g.mapped(emb)).front();
  auto image = phi.over(big).x_image(x0);
  if (!image) raise(Errc::InvalidArgument, "dual kernel search hit the kernel");
  if (ell == 2) {
    auto d = emb.descend(*image);
    if (!d) raise(Errc::InvalidArgument, "dual kernel is not rational");
    return Poly::linear(*d);
  }
  auto k = subgroup_kernel(target_dp, ell, *image, emb);
  if (!k) raise(Errc::InvalidArgument, "dual kernel is not rational");
  return *k;
}

Isogeny dual(const Isogeny& phi) {
  const Curve& e = phi.source();
  const Field f = e.field();
  const int ell = phi.degree();
  const Isogeny back = velu(phi.target(), dual_kernel(phi), ell);
  std::vector<Isogeny> cands;
  for (const auto& w : isomorphisms(back.target(), e)) cands.push_back(back.post_composed(w));
  if (cands.empty()) raise(Errc::InvalidArgument, "dual quotient is not isomorphic to the source");
  std::mt19937_64 rng(ff::kDefaultSeed);
  for (int ext = 1; ext <= 4 && cands.size() > 1; ++ext) {
    const Field big = ff::make_field(f.p(), f.degree() * ext);
    const Curve eb = e.base_change(big);
    const IsogenyMap fwd = phi.over(big);
    for (int attempt = 0; attempt < 40 && cands.size() > 1; ++attempt) {
      const Point q = random_point(eb, rng);
      const Point lq = mul(eb, q, ell);
      if (lq.infinity || lq.x.is_zero() || lq.y.is_zero()) continue;
      const Point mid = fwd(q);
      std::vector<Isogeny> keep;
      for (const auto& c : cands) {
        if (c.over(big)(mid) == lq) keep.push_back(c);
      }
      cands = std::move(keep);
    }
  }
  if (cands.size() != 1) raise(Errc::InvalidArgument, "could not pin down the dual isogeny");
  return cands.front();
}

int torsion_field_degree(const Curve& canonical, long n) {
  const u64 p = canonical.field().p();
  if (n < 1 || static_cast<u64>(n) % p == 0) raise(Errc::BadTorsionOrder, "torsion order must be prime to p");
  if (n <= 2) return 2;
  return 2 * static_cast<int>(ff::mult_order(p % static_cast<u64>(n), static_cast<u64>(n)));
}

std::vector<Point> torsion_points(const Curve& e, long n) {
  const Field f = e.field();
  const u64 p = f.p();
  if (n < 1 || static_cast<u64>(n) % p == 0) raise(Errc::BadTorsionOrder, "torsion order must be prime to p");
  mpz_class root;  // p^{k}, with #E = (p^k - 1)^2
  mpz_ui_pow_ui(root.get_mpz_t(), p, static_cast<unsigned long>(f.degree() / 2));
  if (f.degree() % 2 != 0 || (root - 1) % n != 0) {
    raise(Errc::BadTorsionOrder, "E[" + std::to_string(n) + "] is not rational over " + f.describe());
  }
  const mpz_class cofactor = (root - 1) / n;
  std::set<Point> group{Point{}};
  std::mt19937_64 rng(ff::kDefaultSeed ^ static_cast<u64>(n));
  const std::size_t want = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (int attempt = 0; group.size() < want; ++attempt) {
    if (attempt > 10000) raise(Errc::BadTorsionOrder, "failed to generate the torsion group");
    const Point r = mul(e, random_point(e, rng), cofactor);
    if (group.contains(r)) continue;
    const std::set<Point> base = group;
    for (Point shift = r; !base.contains(shift); shift = add(e, shift, r)) {
      for (const auto& s : base) group.insert(add(e, s, shift));
    }
  }
  return {group.begin(), group.end()};
}

Point torsion_point(const Curve& canonical, long n) {
  if (n == 1) return Point{};
  const Field big = ff::make_field(canonical.field().p(), torsion_field_degree(canonical, n));
  const Curve e = canonical.base_change(big);
  for (const auto& pt : torsion_points(e, n)) {
    if (!pt.infinity && point_order(e, pt, n) == n) return pt;
  }
  raise(Errc::BadTorsionOrder, "no point of exact order " + std::to_string(n));
}

TorsionBasis torsion_basis(const Curve& canonical, long n) {
  TorsionBasis tb;
  const Field big = ff::make_field(canonical.field().p(), torsion_field_degree(canonical, n));
  tb.curve = canonical.base_change(big);
  tb.n = n;
  const auto pts = torsion_points(tb.curve, n);
  std::set<Point> span1;
  for (const auto& pt : pts) {
    if (!pt.infinity && point_order(tb.curve, pt, n) == n) {
      tb.p1 = pt;
      break;
    }
  }
  Point acc;
  for (long i = 0; i < n; ++i) {
    span1.insert(acc);
    acc = add(tb.curve, acc, tb.p1);
  }
  for (const auto& cand : pts) {
    if (span1.contains(cand) || point_order(tb.curve, cand, n) != n) continue;
    tb.log.clear();
    Point row;
    for (long j = 0; j < n; ++j) {
      Point cur = row;
      for (long i = 0; i < n; ++i) {
        tb.log.emplace(cur, std::make_pair(i, j));
        cur = add(tb.curve, cur, tb.p1);
      }
      row = add(tb.curve, row, cand);
    }
    if (tb.log.size() == static_cast<std::size_t>(n * n)) {
      tb.p2 = cand;
      break;
    }
  }
  if (tb.log.size() != static_cast<std::size_t>(n * n)) raise(Errc::BadTorsionOrder, "torsion basis is degenerate");
  return tb;
}

}  // namespace hecke::ec
