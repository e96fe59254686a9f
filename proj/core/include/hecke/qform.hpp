#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace hecke::qform {

// Positive definite binary quadratic form a x^2 + b x y + c y^2.
struct QuadForm {
  mpz_class a, b, c;

  mpz_class disc() const { return b * b - 4 * a * c; }
  bool is_reduced() const;
  bool is_primitive() const;
  std::string str() const;

  friend bool operator==(const QuadForm& l, const QuadForm& r) { return l.a == r.a && l.b == r.b && l.c == r.c; }
  friend std::strong_ordering operator<=>(const QuadForm& l, const QuadForm& r);
};

bool is_discriminant(const mpz_class& disc);

QuadForm reduce(const QuadForm& f);
// Gauss composition followed by reduction.
QuadForm compose(const QuadForm& f, const QuadForm& g);
QuadForm principal_form(const mpz_class& disc);

class ClassGroup {
 public:
  explicit ClassGroup(const mpz_class& disc);

  const mpz_class& disc() const { return disc_; }
  std::size_t size() const { return forms_.size(); }
  const std::vector<QuadForm>& forms() const { return forms_; }
  std::size_t identity() const { return 0; }
  std::size_t mul(std::size_t i, std::size_t j) const { return table_[i][j]; }
  std::size_t inverse(std::size_t i) const;
  std::size_t index_of(const QuadForm& f) const;
  std::size_t order(std::size_t i) const;

 private:
  mpz_class disc_;
  std::vector<QuadForm> forms_;
  std::vector<std::vector<std::size_t>> table_;
};

ClassGroup class_group(const mpz_class& disc);
// Number of reduced primitive forms.
std::size_t class_number(const mpz_class& disc);

// Kronecker symbol (disc / ell) for a prime ell.
int kronecker(const mpz_class& disc, std::uint64_t ell);

// Hurwitz class number of n, classes of discriminant -3 and -4 weighted 1/3, 1/2.
mpq_class hurwitz_H(std::uint64_t n);

// Form (ell, b, c) of a prime ideal above ell, with the smallest b >= 0.
QuadForm prime_form(const mpz_class& disc, std::uint64_t ell);

// A quadratic integer x + y*tau with tau = (b0 + sqrt(disc)) / 2, b0 = disc mod 2.
struct QuadInt {
  mpz_class x, y;
  mpz_class trace;
  mpz_class norm;
};

struct PrimeClassOrder {
  std::uint64_t order = 0;
  QuadInt witness;  // generator of L^order, norm ell^order
};

PrimeClassOrder prime_class_order(const mpz_class& disc, std::uint64_t ell);

}  // namespace hecke::qform
