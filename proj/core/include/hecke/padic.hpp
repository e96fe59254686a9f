#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hecke::padic {

using u64 = std::uint64_t;

inline constexpr int kDefaultPrecision = 24;

// Element of Z_p known modulo p^M, stored as a residue in [0, p^M).
class Zp {
 public:
  Zp() = default;
  Zp(u64 p, int precision, const mpz_class& value);
  static Zp from_int(u64 p, int precision, long v) { return Zp(p, precision, mpz_class(v)); }
  // Rational with denominator prime to p.
  static Zp from_rational(u64 p, int precision, const mpq_class& q);
  static Zp random(u64 p, int precision, std::mt19937_64& rng);

  u64 p() const { return p_; }
  int precision() const { return prec_; }
  const mpz_class& value() const { return v_; }
  mpz_class modulus() const;
  // Value in (-p^M/2, p^M/2].
  mpz_class centered() const;

  bool is_zero() const { return v_ == 0; }
  bool is_unit() const;
  // Raises PrecisionExhausted on zero.
  int valuation() const;
  // Valuation, or the precision for zero.
  int valuation_capped() const;
  Zp unit_part() const;

  Zp operator-() const;
  Zp& operator+=(const Zp& o);
  Zp& operator-=(const Zp& o);
  Zp& operator*=(const Zp& o);
  Zp& operator/=(const Zp& o) { return *this *= o.inv(); }
  friend Zp operator+(Zp a, const Zp& b) { return a += b; }
  friend Zp operator-(Zp a, const Zp& b) { return a -= b; }
  friend Zp operator*(Zp a, const Zp& b) { return a *= b; }
  friend Zp operator/(Zp a, const Zp& b) { return a /= b; }
  Zp operator+(long k) const { return *this + Zp::from_int(p_, prec_, k); }
  Zp operator-(long k) const { return *this - Zp::from_int(p_, prec_, k); }
  Zp operator*(long k) const { return *this * Zp::from_int(p_, prec_, k); }

  // Raises NotAUnit for non-units.
  Zp inv() const;
  // Negative exponents require a unit.
  Zp pow(const mpz_class& e) const;
  Zp pow(long e) const { return pow(mpz_class(e)); }
  // Exact division by p^k; the result is known to precision M - k.
  Zp shifted_down(int k) const;
  Zp with_precision(int precision) const;

  std::vector<u64> digits() const;
  // "p^v * u mod p^M".
  std::string str() const;

  friend bool operator==(const Zp& a, const Zp& b);

 private:
  u64 p_ = 0;
  int prec_ = 0;
  mpz_class v_;
};

mpz_class pow_p(u64 p, int k);
int valuation(const mpz_class& n, u64 p);

Zp log1p(const Zp& t);
Zp exp(const Zp& t);
Zp teichmuller(const Zp& x);
// (1 + t)^lambda - 1.
Zp binom_pow(const Zp& t, const Zp& lambda);
// Square root of a square unit; for p odd the root reducing to the smaller residue mod p.
Zp sqrt(const Zp& u);
bool is_square_unit(const Zp& u);

// True iff (1+t)^lambda = 1+t in Z/p^M [t] / Phi_{p^a}(1+t).
bool cyclo_binom_fixed(u64 p, int a, const Zp& lambda, int precision);
// The ring identity alone, without the divisibility cross-check.
bool cyclo_ring_fixed(u64 p, int a, const Zp& lambda, int precision);

struct ClosureDescriptor {
  u64 teich_order = 1;
  int wild_valuation = 0;
  u64 component_count = 1;
  int radius_exponent = 0;
  bool finite = false;
  u64 orbit_size = 0;  // only for finite orbits
};

// Closure of {lambda^n} in Z_p^x: lambda^i (1 + p^v Z_p) for 0 <= i < r.
ClosureDescriptor orbit_closure(const Zp& lambda);

// Unramified quadratic extension W(F_{p^2}) = Z_p[delta], delta^2 = d with d the
// smallest positive non-residue mod p (p odd).
class Wq {
 public:
  Wq() = default;
  Wq(Zp a0, Zp a1);
  static Wq from_zp(const Zp& a);
  static Wq from_ints(u64 p, int precision, long a0, long a1);
  static Wq random(u64 p, int precision, std::mt19937_64& rng);
  static u64 nonresidue(u64 p);

  const Zp& a0() const { return a0_; }
  const Zp& a1() const { return a1_; }
  u64 p() const { return a0_.p(); }
  int precision() const { return a0_.precision(); }

  Wq sigma() const;
  Zp norm() const;
  Zp trace() const;
  bool is_zero() const { return a0_.is_zero() && a1_.is_zero(); }
  bool is_unit() const;
  int valuation_capped() const;

  Wq operator-() const;
  Wq& operator+=(const Wq& o);
  Wq& operator-=(const Wq& o);
  Wq& operator*=(const Wq& o);
  Wq& operator/=(const Wq& o) { return *this *= o.inv(); }
  friend Wq operator+(Wq a, const Wq& b) { return a += b; }
  friend Wq operator-(Wq a, const Wq& b) { return a -= b; }
  friend Wq operator*(Wq a, const Wq& b) { return a *= b; }
  friend Wq operator/(Wq a, const Wq& b) { return a /= b; }
  Wq scaled(const Zp& s) const;
  Wq inv() const;
  Wq pow(const mpz_class& e) const;
  Wq shifted_down(int k) const;

  std::string str() const;
  friend bool operator==(const Wq& a, const Wq& b) { return a.a0_ == b.a0_ && a.a1_ == b.a1_; }

 private:
  Zp a0_, a1_;
};

// Teichmuller representative of the residue of x (a unit) in F_{p^2}.
Wq teichmuller(const Wq& x);
// Teichmuller representatives of F_{p^2}^x, ordered by residue index r0 + p*r1.
std::vector<Wq> teichmuller_units(u64 p, int precision);

}  // namespace hecke::padic
