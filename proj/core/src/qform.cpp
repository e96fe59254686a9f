#include "hecke/qform.hpp"

#include <algorithm>

#include "hecke/error.hpp"

namespace hecke::qform {

namespace {

mpz_class fdiv(const mpz_class& n, const mpz_class& d) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

mpz_class fmod(const mpz_class& n, const mpz_class& d) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return r;
}

struct Bezout {
  mpz_class g, s, t;  // g = s*a + t*b
};

Bezout xgcd(const mpz_class& a, const mpz_class& b) {
  Bezout r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

void check_negative(const mpz_class& disc) {
  if (disc >= 0) raise(Errc::PositiveDiscriminant, "discriminant must be negative, got " + disc.get_str());
}

// Moves b into (-a, a] keeping the discriminant.
void normalize(QuadForm& f, const mpz_class& disc) {
  const mpz_class two_a = 2 * f.a;
  const mpz_class shift = fdiv(f.a - f.b, two_a);
  f.b += two_a * shift;
  f.c = (f.b * f.b - disc) / (4 * f.a);
}

}  // namespace

bool QuadForm::is_reduced() const {
  if (a <= 0) return false;
  if (abs(b) > a || a > c) return false;
  if ((abs(b) == a || a == c) && b < 0) return false;
  return true;
}

bool QuadForm::is_primitive() const {
  mpz_class g = gcd(a, b);
  g = gcd(g, c);
  return g == 1;
}

std::string QuadForm::str() const {
  return "(" + a.get_str() + ", " + b.get_str() + ", " + c.get_str() + ")";
}

std::strong_ordering operator<=>(const QuadForm& l, const QuadForm& r) {
  for (const auto& [x, y] : {std::pair{&l.a, &r.a}, std::pair{&l.b, &r.b}, std::pair{&l.c, &r.c}}) {
    const int c = cmp(*x, *y);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

bool is_discriminant(const mpz_class& disc) {
  const mpz_class r = fmod(disc, 4);
  return r == 0 || r == 1;
}

QuadForm reduce(const QuadForm& f) {
  const mpz_class disc = f.disc();
  check_negative(disc);
  if (f.a <= 0) raise(Errc::InvalidArgument, "form must be positive definite");
  QuadForm g = f;
  normalize(g, disc);
  while (g.a > g.c) {
    std::swap(g.a, g.c);
    g.b = -g.b;
    normalize(g, disc);
  }
  if (g.a == g.c && g.b < 0) g.b = -g.b;
  return g;
}

QuadForm compose(const QuadForm& f, const QuadForm& g) {
  if (f.disc() != g.disc()) raise(Errc::InvalidArgument, "composition of forms with different discriminants");
  const QuadForm* f1 = &f;
  const QuadForm* f2 = &g;
  if (f1->a > f2->a) std::swap(f1, f2);
  const mpz_class s = (f1->b + f2->b) / 2;
  const mpz_class n = f2->b - s;
  mpz_class y1, d;
  if (fmod(f2->a, f1->a) == 0) {
    y1 = 0;
    d = f1->a;
  } else {
    const Bezout e = xgcd(f2->a, f1->a);
    y1 = e.s;
    d = e.g;
  }
  mpz_class x2, y2, d1;
  if (fmod(s, d) == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    const Bezout e = xgcd(s, d);
    x2 = e.s;
    y2 = -e.t;
    d1 = e.g;
  }
  const mpz_class v1 = f1->a / d1;
  const mpz_class v2 = f2->a / d1;
  const mpz_class r = fmod(y1 * y2 * n - x2 * f2->c, v1);
  QuadForm out;
  out.b = f2->b + 2 * v2 * r;
  out.a = v1 * v2;
  out.c = (f2->c * d1 + r * (f2->b + v2 * r)) / v1;
  return reduce(out);
}

QuadForm principal_form(const mpz_class& disc) {
  check_negative(disc);
  if (!is_discriminant(disc)) raise(Errc::BadDiscriminant, "not a discriminant: " + disc.get_str());
  const mpz_class b = fmod(disc, 2);
  return QuadForm{1, b, (b * b - disc) / 4};
}

ClassGroup::ClassGroup(const mpz_class& disc) : disc_(disc) {
  check_negative(disc);
  if (!is_discriminant(disc)) raise(Errc::BadDiscriminant, "not a discriminant: " + disc.get_str());
  const mpz_class absd = -disc;
  for (mpz_class a = 1; 3 * a * a <= absd; ++a) {
    for (mpz_class b = -a + 1; b <= a; ++b) {
      if (fmod(b - disc, 2) != 0) continue;
      const mpz_class num = b * b - disc;
      if (fmod(num, 4 * a) != 0) continue;
      QuadForm f{a, b, num / (4 * a)};
      if (f.is_reduced() && f.is_primitive()) forms_.push_back(std::move(f));
    }
  }
  std::sort(forms_.begin(), forms_.end());
  const std::size_t h = forms_.size();
  table_.assign(h, std::vector<std::size_t>(h, 0));
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = i; j < h; ++j) {
      table_[i][j] = table_[j][i] = index_of(compose(forms_[i], forms_[j]));
    }
  }
}

std::size_t ClassGroup::index_of(const QuadForm& f) const {
  const QuadForm g = reduce(f);
  const auto it = std::lower_bound(forms_.begin(), forms_.end(), g);
  if (it == forms_.end() || *it != g) raise(Errc::InvalidArgument, "form " + f.str() + " not in class group");
  return static_cast<std::size_t>(it - forms_.begin());
}

std::size_t ClassGroup::inverse(std::size_t i) const {
  const QuadForm& f = forms_[i];
  return index_of(QuadForm{f.a, -f.b, f.c});
}

std::size_t ClassGroup::order(std::size_t i) const {
  std::size_t k = 1;
  for (std::size_t cur = i; cur != identity(); cur = mul(cur, i)) ++k;
  return k;
}

ClassGroup class_group(const mpz_class& disc) { return ClassGroup(disc); }

std::size_t class_number(const mpz_class& disc) { return ClassGroup(disc).size(); }

int kronecker(const mpz_class& disc, std::uint64_t ell) {
  return mpz_kronecker_ui(disc.get_mpz_t(), static_cast<unsigned long>(ell));
}

mpq_class hurwitz_H(std::uint64_t n) {
  if (n == 0 || (n % 4 != 0 && n % 4 != 3)) raise(Errc::BadDiscriminant, "H(n) needs n = 0 or 3 mod 4, got " + std::to_string(n));
  mpq_class total = 0;
  for (std::uint64_t f = 1; f * f <= n; ++f) {
    if (n % (f * f) != 0) continue;
    const std::uint64_t m = n / (f * f);
    if (m % 4 != 0 && m % 4 != 3) continue;
    const mpz_class disc = -mpz_class(static_cast<unsigned long>(m));
    mpq_class h(static_cast<unsigned long>(class_number(disc)));
    if (m == 3) h /= 3;
    if (m == 4) h /= 2;
    total += h;
  }
  total.canonicalize();
  return total;
}

QuadForm prime_form(const mpz_class& disc, std::uint64_t ell) {
  check_negative(disc);
  if (!is_discriminant(disc)) raise(Errc::BadDiscriminant, "not a discriminant: " + disc.get_str());
  if (kronecker(disc, ell) == -1) raise(Errc::InertPrime, std::to_string(ell) + " is inert in discriminant " + disc.get_str());
  const mpz_class l(static_cast<unsigned long>(ell));
  for (mpz_class b = 0; b < 2 * l; ++b) {
    const mpz_class num = b * b - disc;
    if (fmod(num, 4 * l) != 0) continue;
    QuadForm f{l, b, num / (4 * l)};
    if (!f.is_primitive()) {
      raise(Errc::BadDiscriminant, std::to_string(ell) + " divides the conductor of " + disc.get_str());
    }
    return f;
  }
  raise(Errc::BadDiscriminant, "no prime form above " + std::to_string(ell));
}

PrimeClassOrder prime_class_order(const mpz_class& disc, std::uint64_t ell) {
  const QuadForm lf = prime_form(disc, ell);
  const ClassGroup cl(disc);
  PrimeClassOrder out;
  out.order = cl.order(cl.index_of(lf));

  const mpz_class b0 = fmod(disc, 2);
  const mpz_class c0 = (b0 * b0 - disc) / 4;
  mpz_class target;
  mpz_ui_pow_ui(target.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(out.order));
  const mpz_class l(static_cast<unsigned long>(ell));
  auto make = [&](const mpz_class& x, const mpz_class& y) {
    QuadInt q{x, y, 2 * x + b0 * y, x * x + b0 * x * y + c0 * y * y};
    return q;
  };
  // Solve x^2 + b0 x y + c0 y^2 = ell^a for y >= 1, preferring elements not divisible by ell.
  for (mpz_class y = 1; -disc * y * y <= 4 * target; ++y) {
    const mpz_class d = disc * y * y + 4 * target;
    if (d < 0) continue;
    if (!mpz_perfect_square_p(d.get_mpz_t())) continue;
    const mpz_class s = sqrt(d);
    for (const mpz_class& num : {mpz_class(-b0 * y + s), mpz_class(-b0 * y - s)}) {
      if (fmod(num, 2) != 0) continue;
      const mpz_class x = num / 2;
      if (fmod(x, l) == 0 && fmod(y, l) == 0) continue;
      out.witness = make(x, y);
      return out;
    }
  }
  // Ramified prime whose square is (ell): the generator is ell^(a/2).
  if (out.order % 2 == 0) {
    mpz_class x;
    mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(ell), static_cast<unsigned long>(out.order / 2));
    out.witness = make(x, 0);
    return out;
  }
  raise(Errc::SearchExhausted, "no generator of norm " + target.get_str() + " found");
}

}  // namespace hecke::qform
