#include "hecke/padic.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "hecke/error.hpp"
#include "hecke/ff.hpp"

namespace hecke::padic {

mpz_class pow_p(u64 p, int k) {
  thread_local std::map<std::pair<u64, int>, mpz_class> cache;
  const auto key = std::pair{p, k};
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  cache.emplace(key, r);
  return r;
}

int valuation(const mpz_class& n, u64 p) {
  if (n == 0) raise(Errc::PrecisionExhausted, "valuation of zero");
  mpz_class m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

namespace {

mpz_class mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) raise(Errc::NotAUnit, "not invertible modulo " + m.get_str());
  return r;
}

void check_compatible(const Zp& a, const Zp& b) {
  if (a.p() != b.p()) raise(Errc::InvalidArgument, "p-adic numbers over different primes");
}

// Largest k with p^k <= n, for n >= 1.
int floor_log(u64 n, u64 p) {
  int k = 0;
  for (u64 m = n; m >= p; m /= p) ++k;
  return k;
}

int min_valuation_for_series(u64 p) { return p == 2 ? 2 : 1; }

void check_domain(const Zp& t, const char* what) {
  if (t.is_zero()) return;
  if (t.valuation() < min_valuation_for_series(t.p())) {
    raise(Errc::ConvergenceDomain, std::string(what) + " needs ord(t) >= " + std::to_string(min_valuation_for_series(t.p())));
  }
}

}  // namespace

Zp::Zp(u64 p, int precision, const mpz_class& value) : p_(p), prec_(precision) {
  if (p < 2) raise(Errc::NonPrime, "p-adic prime must be at least 2");
  if (precision < 1) raise(Errc::InvalidArgument, "precision must be positive");
  v_ = mod(value, pow_p(p, precision));
}

Zp Zp::from_rational(u64 p, int precision, const mpq_class& q) {
  const mpz_class m = pow_p(p, precision);
  return Zp(p, precision, q.get_num() * inverse_mod(q.get_den(), m));
}

Zp Zp::random(u64 p, int precision, std::mt19937_64& rng) {
  mpz_class v = 0;
  for (int i = precision; i-- > 0;) v = v * static_cast<unsigned long>(p) + static_cast<unsigned long>(rng() % p);
  return Zp(p, precision, v);
}

mpz_class Zp::modulus() const { return pow_p(p_, prec_); }

mpz_class Zp::centered() const {
  const mpz_class m = modulus();
  return 2 * v_ > m ? mpz_class(v_ - m) : v_;
}

bool Zp::is_unit() const { return !mpz_divisible_ui_p(v_.get_mpz_t(), static_cast<unsigned long>(p_)); }

int Zp::valuation() const {
  if (v_ == 0) raise(Errc::PrecisionExhausted, "valuation of 0 mod " + std::to_string(p_) + "^" + std::to_string(prec_));
  return padic::valuation(v_, p_);
}

int Zp::valuation_capped() const { return v_ == 0 ? prec_ : valuation(); }

Zp Zp::unit_part() const { return shifted_down(valuation()); }

Zp Zp::operator-() const { return Zp(p_, prec_, -v_); }

Zp& Zp::operator+=(const Zp& o) {
  check_compatible(*this, o);
  prec_ = std::min(prec_, o.prec_);
  v_ = mod(v_ + o.v_, modulus());
  return *this;
}

Zp& Zp::operator-=(const Zp& o) {
  check_compatible(*this, o);
  prec_ = std::min(prec_, o.prec_);
  v_ = mod(v_ - o.v_, modulus());
  return *this;
}

Zp& Zp::operator*=(const Zp& o) {
  check_compatible(*this, o);
  prec_ = std::min(prec_, o.prec_);
  v_ = mod(v_ * o.v_, modulus());
  return *this;
}

Zp Zp::inv() const {
  if (!is_unit()) raise(Errc::NotAUnit, str() + " is not a unit");
  return Zp(p_, prec_, inverse_mod(v_, modulus()));
}

Zp Zp::pow(const mpz_class& e) const {
  mpz_class r;
  if (e < 0) return inv().pow(mpz_class(-e));
  const mpz_class m = modulus();
  mpz_powm(r.get_mpz_t(), v_.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return Zp(p_, prec_, r);
}

Zp Zp::shifted_down(int k) const {
  if (k == 0) return *this;
  if (k >= prec_) raise(Errc::PrecisionExhausted, "division by p^" + std::to_string(k) + " exhausts precision");
  const mpz_class pk = pow_p(p_, k);
  if (!mpz_divisible_p(v_.get_mpz_t(), pk.get_mpz_t())) raise(Errc::NotAUnit, str() + " is not divisible by p^" + std::to_string(k));
  return Zp(p_, prec_ - k, v_ / pk);
}

Zp Zp::with_precision(int precision) const { return Zp(p_, precision, v_); }

std::vector<u64> Zp::digits() const {
  std::vector<u64> out;
  mpz_class v = v_;
  for (int i = 0; i < prec_; ++i) {
    out.push_back(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p_)));
    mpz_fdiv_q_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(p_));
  }
  return out;
}

std::string Zp::str() const {
  const std::string ps = std::to_string(p_);
  const std::string tail = " mod " + ps + "^" + std::to_string(prec_);
  if (v_ == 0) return "0" + tail;
  const int v = valuation();
  return ps + "^" + std::to_string(v) + " * " + mpz_class(v_ / pow_p(p_, v)).get_str() + tail;
}

bool operator==(const Zp& a, const Zp& b) {
  if (a.p_ != b.p_) return false;
  const int prec = std::min(a.prec_, b.prec_);
  const mpz_class m = pow_p(a.p_, prec);
  return mod(a.v_, m) == mod(b.v_, m);
}

Zp log1p(const Zp& t) {
  check_domain(t, "log1p");
  const u64 p = t.p();
  const int prec = t.precision();
  if (t.is_zero()) return t;
  const int v = t.valuation();
  // Terms t^n/n with n*v - v_p(n) >= prec vanish; the bound is nondecreasing in n.
  u64 last = 1;
  while (static_cast<long>(last) * v - floor_log(last, p) < prec) ++last;
  const int guard = floor_log(last, p);
  const mpz_class work = pow_p(p, prec + guard);
  const mpz_class target = pow_p(p, prec);
  mpz_class power = 1, sum = 0;
  for (u64 n = 1; n < last; ++n) {
    power = mod(power * t.value(), work);
    u64 unit = n;
    int k = 0;
    while (unit % p == 0) {
      unit /= p;
      ++k;
    }
    mpz_class term = power / pow_p(p, k);
    term = mod(term * inverse_mod(mpz_class(static_cast<unsigned long>(unit)), target), target);
    if (n % 2 == 1) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return Zp(p, prec, sum);
}

Zp exp(const Zp& t) {
  check_domain(t, "exp");
  const u64 p = t.p();
  const int prec = t.precision();
  if (t.is_zero()) return Zp(p, prec, 1);
  const int v = t.valuation();
  // v_p(n!) <= (n-1)/(p-1), so terms with n*v - (n-1)/(p-1) >= prec vanish.
  u64 last = 1;
  while (static_cast<long>(last) * v - static_cast<long>((last - 1) / (p - 1)) < prec) ++last;
  int guard = 0;
  for (u64 n = 1; n < last; ++n) {
    for (u64 m = n; m % p == 0; m /= p) ++guard;
  }
  const mpz_class work = pow_p(p, prec + guard);
  const mpz_class target = pow_p(p, prec);
  mpz_class power = 1, fact_unit = 1, sum = 1;
  int fact_val = 0;
  for (u64 n = 1; n < last; ++n) {
    power = mod(power * t.value(), work);
    u64 unit = n;
    while (unit % p == 0) {
      unit /= p;
      ++fact_val;
    }
    fact_unit = mod(fact_unit * static_cast<unsigned long>(unit), target);
    const mpz_class term = power / pow_p(p, fact_val);
    sum += mod(term * inverse_mod(fact_unit, target), target);
  }
  return Zp(p, prec, sum);
}

Zp teichmuller(const Zp& x) {
  if (!x.is_unit()) raise(Errc::NotAUnit, "Teichmuller lift of a non-unit");
  return x.pow(pow_p(x.p(), x.precision() - 1));
}

Zp binom_pow(const Zp& t, const Zp& lambda) {
  check_compatible(t, lambda);
  return exp(lambda * log1p(t)) - 1;
}

bool is_square_unit(const Zp& u) {
  if (!u.is_unit()) raise(Errc::NotAUnit, "square test needs a unit");
  const u64 p = u.p();
  if (p == 2) {
    if (u.precision() < 3) raise(Errc::PrecisionExhausted, "2-adic square test needs precision >= 3");
    return mpz_fdiv_ui(u.value().get_mpz_t(), 8) == 1;
  }
  const u64 r = mpz_fdiv_ui(u.value().get_mpz_t(), static_cast<unsigned long>(p));
  return ff::powmod(r, (p - 1) / 2, p) == 1;
}

Zp sqrt(const Zp& u) {
  if (!is_square_unit(u)) raise(Errc::NotSplit, u.str() + " is not a square unit");
  const u64 p = u.p();
  const int prec = u.precision();
  if (p == 2) {
    mpz_class s = 1;
    for (int k = 3; k < prec; ++k) {
      const mpz_class m = pow_p(2, k + 1);
      if (mod(s * s - u.value(), m) != 0) s += pow_p(2, k - 1);
    }
    return Zp(2, prec, s);
  }
  const u64 r = mpz_fdiv_ui(u.value().get_mpz_t(), static_cast<unsigned long>(p));
  const auto root = ff::make_field(p, 1).from_int(static_cast<ff::i64>(r)).sqrt();
  Zp s(p, prec, mpz_class(static_cast<unsigned long>(root->coeff(0))));
  const Zp half = Zp::from_int(p, prec, 2).inv();
  for (int correct = 1; correct < prec; correct *= 2) s = s - (s * s - u) * half * s.inv();
  return s;
}

namespace {

// Residues of Z/p^M [s] / Phi_{p^a}(s).
class CycloRing {
 public:
  CycloRing(u64 p, int a, int precision)
      : p_(p), step_(static_cast<std::size_t>(pow_p(p, a - 1).get_ui())), mod_(pow_p(p, precision)) {
    dim_ = step_ * (p - 1);
  }

  std::vector<mpz_class> one() const {
    std::vector<mpz_class> v(dim_, 0);
    v[0] = 1;
    return v;
  }
  std::vector<mpz_class> gen() const {
    std::vector<mpz_class> v(dim_, 0);
    if (dim_ == 1) {
      v[0] = mod(mpz_class(-1), mod_);  // Phi_2(s) = s + 1
    } else {
      v[1] = 1;
    }
    return v;
  }

  std::vector<mpz_class> mul(const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) const {
    std::vector<mpz_class> prod(2 * dim_ - 1, 0);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < dim_; ++j) prod[i + j] += x[i] * y[j];
    }
    // s^dim = -(1 + s^step + ... + s^{(p-2) step}).
    for (std::size_t k = prod.size(); k-- > dim_;) {
      if (prod[k] == 0) continue;
      const mpz_class c = prod[k];
      prod[k] = 0;
      const std::size_t base = k - dim_;
      for (u64 i = 0; i + 1 < p_; ++i) prod[base + i * step_] -= c;
    }
    prod.resize(dim_);
    for (auto& c : prod) c = mod(c, mod_);
    return prod;
  }

  std::vector<mpz_class> pow(std::vector<mpz_class> base, mpz_class e) const {
    std::vector<mpz_class> r = one();
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
      base = mul(base, base);
      e /= 2;
    }
    return r;
  }

 private:
  u64 p_;
  std::size_t step_;
  std::size_t dim_ = 0;
  mpz_class mod_;
};

}  // namespace

bool cyclo_ring_fixed(u64 p, int a, const Zp& lambda, int precision) {
  if (a < 1) raise(Errc::InvalidArgument, "cyclotomic level must be >= 1");
  if (a > lambda.precision()) raise(Errc::PrecisionExhausted, "lambda is not known modulo p^a");
  const CycloRing ring(p, a, precision);
  const mpz_class e = mod(lambda.value(), pow_p(p, a));
  return ring.pow(ring.gen(), e) == ring.gen();
}

bool cyclo_binom_fixed(u64 p, int a, const Zp& lambda, int precision) {
  if (!lambda.is_unit()) raise(Errc::NotAUnit, "exponent must be a unit");
  const bool in_ring = cyclo_ring_fixed(p, a, lambda, precision);
  const bool divides = mod(lambda.value() - 1, pow_p(p, a)) == 0;
  if (in_ring != divides) raise(Errc::InvalidArgument, "cyclotomic ring check disagrees with divisibility");
  return in_ring;
}

ClosureDescriptor orbit_closure(const Zp& lambda) {
  if (!lambda.is_unit()) raise(Errc::NotAUnit, "orbit closure needs a unit");
  const u64 p = lambda.p();
  const int prec = lambda.precision();
  ClosureDescriptor d;
  if (p == 2) {
    if (prec < 3) raise(Errc::PrecisionExhausted, "2-adic closure needs precision >= 3");
    d.teich_order = mpz_fdiv_ui(lambda.value().get_mpz_t(), 4) == 1 ? 1 : 2;
  } else {
    d.teich_order = ff::mult_order(mpz_fdiv_ui(lambda.value().get_mpz_t(), static_cast<unsigned long>(p)), p);
  }
  d.component_count = d.teich_order;
  const Zp wild = lambda.pow(static_cast<long>(d.teich_order)) - 1;
  if (wild.is_zero()) {
    if (p == 2) {
      const mpz_class m = lambda.modulus();
      if (lambda.value() != 1 && lambda.value() != m - 1) {
        raise(Errc::PrecisionExhausted, "lambda^2 = 1 at this precision but lambda is not +-1");
      }
    }
    d.finite = true;
    d.orbit_size = d.teich_order;
    d.wild_valuation = prec;
    d.radius_exponent = -prec;
    return d;
  }
  d.wild_valuation = wild.valuation();
  d.radius_exponent = -d.wild_valuation;
  return d;
}

u64 Wq::nonresidue(u64 p) {
  if (p == 2) raise(Errc::UnsupportedCharacteristic, "W(F_4) is not modelled");
  for (u64 d = 2;; ++d) {
    if (ff::powmod(d % p, (p - 1) / 2, p) == p - 1) return d;
  }
}

Wq::Wq(Zp a0, Zp a1) : a0_(std::move(a0)), a1_(std::move(a1)) {
  if (a0_.p() != a1_.p()) raise(Errc::InvalidArgument, "mixed primes in W(F_q) element");
  if (a0_.p() == 2) raise(Errc::UnsupportedCharacteristic, "W(F_4) is not modelled");
  const int prec = std::min(a0_.precision(), a1_.precision());
  a0_ = a0_.with_precision(prec);
  a1_ = a1_.with_precision(prec);
}

Wq Wq::from_zp(const Zp& a) { return Wq(a, Zp(a.p(), a.precision(), 0)); }

Wq Wq::from_ints(u64 p, int precision, long a0, long a1) {
  return Wq(Zp::from_int(p, precision, a0), Zp::from_int(p, precision, a1));
}

Wq Wq::random(u64 p, int precision, std::mt19937_64& rng) {
  Zp x = Zp::random(p, precision, rng);
  Zp y = Zp::random(p, precision, rng);
  return Wq(std::move(x), std::move(y));
}

Wq Wq::sigma() const { return Wq(a0_, -a1_); }

Zp Wq::norm() const {
  const long d = static_cast<long>(nonresidue(p()));
  return a0_ * a0_ - a1_ * a1_ * d;
}

Zp Wq::trace() const { return a0_ * 2; }

bool Wq::is_unit() const { return a0_.is_unit() || a1_.is_unit(); }

int Wq::valuation_capped() const { return std::min(a0_.valuation_capped(), a1_.valuation_capped()); }

Wq Wq::operator-() const { return Wq(-a0_, -a1_); }

Wq& Wq::operator+=(const Wq& o) {
  a0_ += o.a0_;
  a1_ += o.a1_;
  return *this;
}

Wq& Wq::operator-=(const Wq& o) {
  a0_ -= o.a0_;
  a1_ -= o.a1_;
  return *this;
}

Wq& Wq::operator*=(const Wq& o) {
  const long d = static_cast<long>(nonresidue(p()));
  Zp r0 = a0_ * o.a0_ + a1_ * o.a1_ * d;
  Zp r1 = a0_ * o.a1_ + a1_ * o.a0_;
  a0_ = std::move(r0);
  a1_ = std::move(r1);
  return *this;
}

Wq Wq::scaled(const Zp& s) const { return Wq(a0_ * s, a1_ * s); }

Wq Wq::inv() const {
  if (!is_unit()) raise(Errc::NotAUnit, str() + " is not a unit");
  return sigma().scaled(norm().inv());
}

Wq Wq::pow(const mpz_class& e) const {
  if (e < 0) return inv().pow(mpz_class(-e));
  Wq r = from_ints(p(), precision(), 1, 0);
  Wq b = *this;
  for (std::size_t i = mpz_sizeinbase(e.get_mpz_t(), 2); i-- > 0;) {
    r *= r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r *= b;
  }
  return r;
}

Wq Wq::shifted_down(int k) const { return Wq(a0_.shifted_down(k), a1_.shifted_down(k)); }

std::string Wq::str() const { return "(" + a0_.str() + ") + (" + a1_.str() + ")*delta"; }

Wq teichmuller(const Wq& x) {
  if (!x.is_unit()) raise(Errc::NotAUnit, "Teichmuller lift of a non-unit");
  const mpz_class q = pow_p(x.p(), 2);
  mpz_class e;
  mpz_pow_ui(e.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(x.precision() - 1));
  return x.pow(e);
}

std::vector<Wq> teichmuller_units(u64 p, int precision) {
  std::vector<Wq> out;
  for (u64 idx = 1; idx < p * p; ++idx) {
    out.push_back(teichmuller(Wq::from_ints(p, precision, static_cast<long>(idx % p), static_cast<long>(idx / p))));
  }
  return out;
}

}  // namespace hecke::padic
