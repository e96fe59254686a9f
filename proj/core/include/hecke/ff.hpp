#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hecke::ff {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
// Inverse of a modulo m; a must be a unit.
u64 invmod(u64 a, u64 m);
// Reduce a signed integer into [0, m).
u64 reduce(i64 a, u64 m);
// Multiplicative order of a modulo m (gcd(a, m) = 1).
u64 mult_order(u64 a, u64 m);

struct FieldData;
class Elem;

// Handle to an interned finite field F_{p^k}. Copies are cheap; equal fields
// share the same descriptor.
class Field {
 public:
  Field() = default;

  u64 p() const;
  int degree() const;
  // Monic modulus over F_p, coefficients from degree 0 to k.
  const std::vector<u64>& modulus() const;
  const mpz_class& order() const;

  Elem zero() const;
  Elem one() const;
  Elem from_int(i64 v) const;
  Elem from_coeffs(std::vector<u64> coeffs) const;
  Elem gen() const;
  // Element whose coefficient vector is the base-p expansion of index.
  Elem decode(const mpz_class& index) const;
  Elem random(std::mt19937_64& rng) const;
  // Fixed quadratic non-residue (p odd).
  const Elem& nonresidue() const;

  bool valid() const { return data_ != nullptr; }
  const FieldData* data() const { return data_; }
  friend bool operator==(const Field& a, const Field& b) { return a.data_ == b.data_; }

  std::string describe() const;

 private:
  friend Field make_field(u64 p, int k);
  explicit Field(const FieldData* d) : data_(d) {}
  const FieldData* data_ = nullptr;
};

// Field of order p^k with the smallest irreducible monic modulus, ordering
// candidates by the base-p encoding of their lower coefficients.
Field make_field(u64 p, int k);

class Elem {
 public:
  Elem() = default;
  Elem(Field f, std::vector<u64> coeffs);

  const Field& field() const { return field_; }
  const std::vector<u64>& coeffs() const { return c_; }
  u64 coeff(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const;
  bool is_one() const;
  // True when the element lies in the prime field.
  bool in_prime_field() const;

  Elem operator-() const;
  Elem& operator+=(const Elem& o);
  Elem& operator-=(const Elem& o);
  Elem& operator*=(const Elem& o);
  Elem& operator/=(const Elem& o) { return *this *= o.inv(); }
  friend Elem operator+(Elem a, const Elem& b) { return a += b; }
  friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
  friend Elem operator*(Elem a, const Elem& b) { return a *= b; }
  friend Elem operator/(Elem a, const Elem& b) { return a /= b; }
  Elem scaled(u64 s) const;

  Elem inv() const;
  Elem pow(const mpz_class& e) const;
  Elem pow(u64 e) const;
  Elem square() const { return *this * *this; }
  Elem frobenius() const { return pow(field_.p()); }

  bool is_square() const;
  // The smaller of the two square roots, or nullopt for non-squares.
  std::optional<Elem> sqrt() const;

  mpz_class encode() const;
  std::string str() const;

  friend bool operator==(const Elem& a, const Elem& b) { return a.field_ == b.field_ && a.c_ == b.c_; }
  friend std::strong_ordering operator<=>(const Elem& a, const Elem& b);

 private:
  Field field_;
  std::vector<u64> c_;
};

// Canonical embedding F_{p^a} -> F_{p^b} (a | b), sending the generator of the
// smaller field to the smallest root of its modulus in the larger one.
// Construction is cached per field pair and safe to call concurrently.
class Embedding {
 public:
  Embedding(Field small, Field big);

  const Field& source() const { return small_; }
  const Field& target() const { return big_; }
  Elem operator()(const Elem& x) const;
  // Preimage of y, if y lies in the image.
  std::optional<Elem> descend(const Elem& y) const;

  struct Data;

 private:
  Field small_;
  Field big_;
  const Data* data_ = nullptr;
};

}  // namespace hecke::ff
