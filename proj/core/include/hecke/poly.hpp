#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hecke/ff.hpp"

namespace hecke::ff {

// Dense univariate polynomial over a finite field, stored without trailing
// zero coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(Field f);
  Poly(Field f, std::vector<Elem> coeffs);

  static Poly constant(const Elem& c);
  static Poly x(Field f);
  // x - r
  static Poly linear(const Elem& root);
  // Coefficients given as small integers, lowest degree first.
  static Poly from_ints(Field f, const std::vector<i64>& coeffs);

  const Field& field() const { return field_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Elem>& coeffs() const { return c_; }
  Elem coeff(int i) const;
  Elem lead() const;
  bool is_monic() const;

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Elem& s) const;
  friend bool operator==(const Poly& a, const Poly& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

  Elem eval(const Elem& x) const;
  Poly derivative() const;
  Poly monic() const;
  // Image of each coefficient under an embedding.
  Poly mapped(const Embedding& e) const;

 private:
  void trim();
  Field field_;
  std::vector<Elem> c_;
};

// Quotient and remainder; divisor must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
Poly operator%(const Poly& a, const Poly& b);
Poly operator/(const Poly& a, const Poly& b);
bool divides(const Poly& d, const Poly& a);
// Monic gcd (zero when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& base, const mpz_class& e, const Poly& m);
// Lexicographic order on (degree, coefficient encodings from the top).
bool poly_less(const Poly& a, const Poly& b);

struct Factor {
  Poly poly;
  int multiplicity;
};

inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ULL;

// Distinct roots in the coefficient field, ascending.
std::vector<Elem> poly_roots(const Poly& f, std::uint64_t seed = kDefaultSeed);
// Complete factorization into monic irreducibles, sorted by degree then lex.
std::vector<Factor> poly_factor(const Poly& f, std::uint64_t seed = kDefaultSeed);
bool is_irreducible(const Poly& f);

}  // namespace hecke::ff
