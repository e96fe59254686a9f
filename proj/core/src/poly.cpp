#include "hecke/poly.hpp"

#include <algorithm>
#include <random>

#include "hecke/error.hpp"

namespace hecke::ff {

Poly::Poly(Field f) : field_(f) {}

Poly::Poly(Field f, std::vector<Elem> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Elem& c) { return Poly(c.field(), {c}); }

Poly Poly::x(Field f) { return Poly(f, {f.zero(), f.one()}); }

Poly Poly::linear(const Elem& root) { return Poly(root.field(), {-root, root.field().one()}); }

Poly Poly::from_ints(Field f, const std::vector<i64>& coeffs) {
  std::vector<Elem> c;
  c.reserve(coeffs.size());
  for (i64 v : coeffs) c.push_back(f.from_int(v));
  return Poly(f, std::move(c));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Elem Poly::coeff(int i) const {
  if (i < 0 || i > degree()) return field_.zero();
  return c_[static_cast<std::size_t>(i)];
}

Elem Poly::lead() const {
  if (is_zero()) raise(Errc::ZeroPolynomial, "leading coefficient of zero polynomial");
  return c_.back();
}

bool Poly::is_monic() const { return !is_zero() && c_.back().is_one(); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Poly operator+(const Poly& a, const Poly& b) {
  const Field f = a.field_.valid() ? a.field_ : b.field_;
  std::vector<Elem> c(std::max(a.c_.size(), b.c_.size()), f.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return Poly(f, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  const Field f = a.field_.valid() ? a.field_ : b.field_;
  if (a.is_zero() || b.is_zero()) return Poly(f);
  std::vector<Elem> c(a.c_.size() + b.c_.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(f, std::move(c));
}

Poly Poly::scaled(const Elem& s) const {
  Poly r = *this;
  for (auto& c : r.c_) c *= s;
  r.trim();
  return r;
}

Elem Poly::eval(const Elem& x) const {
  Elem r = field_.zero();
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(field_);
  std::vector<Elem> c;
  c.reserve(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i].scaled(i % field_.p()));
  return Poly(field_, std::move(c));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(lead().inv());
}

Poly Poly::mapped(const Embedding& e) const {
  std::vector<Elem> c;
  c.reserve(c_.size());
  for (const auto& v : c_) c.push_back(e(v));
  return Poly(e.target(), std::move(c));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) raise(Errc::ZeroPolynomial, "division by zero polynomial");
  const Field f = b.field();
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<Elem> r = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  std::vector<Elem> q(r.size() - db, f.zero());
  const Elem inv_lead = bc.back().inv();
  for (std::size_t i = r.size(); i-- > db;) {
    if (r[i].is_zero()) continue;
    const Elem c = r[i] * inv_lead;
    q[i - db] = c;
    for (std::size_t j = 0; j <= db; ++j) r[i - db + j] -= c * bc[j];
  }
  r.resize(db);
  return {Poly(f, std::move(q)), Poly(f, std::move(r))};
}

Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

bool divides(const Poly& d, const Poly& a) { return (a % d).is_zero(); }

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = x % y;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& base, const mpz_class& e, const Poly& m) {
  Poly r = Poly::constant(m.field().one()) % m;
  Poly b = base % m;
  const std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return r;
  for (std::size_t i = bits; i-- > 0;) {
    r = mulmod(r, r, m);
    if (mpz_tstbit(e.get_mpz_t(), i)) r = mulmod(r, b, m);
  }
  return r;
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const auto cmp = a.coeffs()[static_cast<std::size_t>(i)] <=> b.coeffs()[static_cast<std::size_t>(i)];
    if (cmp != 0) return cmp < 0;
  }
  return false;
}

namespace {

// p-th root of a polynomial whose derivative vanishes.
Poly pth_root(const Poly& f) {
  const Field fld = f.field();
  const u64 p = fld.p();
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), p, static_cast<unsigned long>(fld.degree() - 1));
  std::vector<Elem> c;
  for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) c.push_back(f.coeff(i).pow(e));
  return Poly(fld, std::move(c));
}

void squarefree(const Poly& f, int mult, std::vector<Factor>& out) {
  if (f.degree() < 1) return;
  const Poly d = f.derivative();
  if (d.is_zero()) {
    squarefree(pth_root(f), mult * static_cast<int>(f.field().p()), out);
    return;
  }
  Poly c = gcd(f, d);
  Poly w = f / c;
  int i = 1;
  while (w.degree() > 0) {
    Poly y = gcd(w, c);
    Poly z = w / y;
    if (z.degree() > 0) out.push_back({z.monic(), i * mult});
    ++i;
    w = y;
    c = c / y;
  }
  if (c.degree() > 0) squarefree(pth_root(c), mult * static_cast<int>(f.field().p()), out);
}

// Splits a squarefree monic product of irreducibles of degree d.
void equal_degree(const Poly& f, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.degree() == d) {
    out.push_back(f.monic());
    return;
  }
  const Field fld = f.field();
  const int n = f.degree();
  mpz_class qd;
  mpz_pow_ui(qd.get_mpz_t(), fld.order().get_mpz_t(), static_cast<unsigned long>(d));
  while (true) {
    std::vector<Elem> rc;
    for (int i = 0; i < n; ++i) rc.push_back(fld.random(rng));
    Poly a(fld, rc);
    if (a.degree() < 1) continue;
    Poly h(fld);
    if (fld.p() == 2) {
      const long steps = static_cast<long>(fld.degree()) * d;
      Poly t = a % f;
      h = t;
      for (long i = 1; i < steps; ++i) {
        t = mulmod(t, t, f);
        h = h + t;
      }
    } else {
      h = powmod(a, mpz_class((qd - 1) / 2), f) - Poly::constant(fld.one());
    }
    Poly g = gcd(h, f);
    if (g.degree() > 0 && g.degree() < n) {
      equal_degree(g, d, rng, out);
      equal_degree(f / g, d, rng, out);
      return;
    }
  }
}

// Irreducible factors of a squarefree monic polynomial, grouped by degree.
std::vector<Poly> split_squarefree(const Poly& f, std::mt19937_64& rng, int max_degree) {
  std::vector<Poly> out;
  const Field fld = f.field();
  Poly rest = f.monic();
  const Poly x = Poly::x(fld);
  Poly h = x % rest;
  for (int d = 1; rest.degree() >= 2 * d && d <= max_degree; ++d) {
    h = powmod(h, fld.order(), rest);
    Poly g = gcd(h - x, rest);
    if (g.degree() > 0) {
      equal_degree(g, d, rng, out);
      rest = rest / g;
      h = h % rest;
    }
  }
  if (rest.degree() > 0 && rest.degree() <= max_degree) out.push_back(rest.monic());
  return out;
}

}  // namespace

std::vector<Factor> poly_factor(const Poly& f, std::uint64_t seed) {
  if (f.is_zero()) raise(Errc::ZeroPolynomial, "cannot factor the zero polynomial");
  std::mt19937_64 rng(seed);
  std::vector<Factor> sf;
  squarefree(f.monic(), 1, sf);
  std::vector<Factor> out;
  for (const auto& s : sf) {
    for (auto& g : split_squarefree(s.poly, rng, s.poly.degree())) out.push_back({std::move(g), s.multiplicity});
  }
  std::sort(out.begin(), out.end(), [](const Factor& a, const Factor& b) {
    if (poly_less(a.poly, b.poly)) return true;
    if (poly_less(b.poly, a.poly)) return false;
    return a.multiplicity < b.multiplicity;
  });
  return out;
}

std::vector<Elem> poly_roots(const Poly& f, std::uint64_t seed) {
  if (f.is_zero()) raise(Errc::ZeroPolynomial, "roots of the zero polynomial");
  if (f.degree() < 1) return {};
  const Field fld = f.field();
  const Poly x = Poly::x(fld);
  Poly g = gcd(powmod(x, fld.order(), f) - x, f);
  std::vector<Elem> roots;
  if (g.degree() < 1) return roots;
  std::mt19937_64 rng(seed);
  std::vector<Poly> lin;
  equal_degree(g, 1, rng, lin);
  for (const auto& l : lin) roots.push_back(-l.coeff(0));
  std::sort(roots.begin(), roots.end());
  return roots;
}

bool is_irreducible(const Poly& f) {
  if (f.degree() < 1) return false;
  auto fs = poly_factor(f);
  return fs.size() == 1 && fs[0].multiplicity == 1 && fs[0].poly.degree() == f.degree();
}

}  // namespace hecke::ff
