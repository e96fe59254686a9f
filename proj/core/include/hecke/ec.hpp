#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hecke/ff.hpp"
#include "hecke/poly.hpp"

namespace hecke::ec {

using ff::Elem;
using ff::Embedding;
using ff::Field;
using ff::Poly;
using ff::u64;

// Short Weierstrass curve y^2 = x^3 + a x + b in characteristic >= 5.
class Curve {
 public:
  Curve() = default;
  Curve(Elem a, Elem b);

  const Elem& a() const { return a_; }
  const Elem& b() const { return b_; }
  const Field& field() const { return a_.field(); }
  Elem j() const;
  Elem discriminant() const;
  // x^3 + a x + b as a polynomial, and its value at x (x in the curve's field).
  Poly rhs() const;
  Elem rhs(const Elem& x) const;

  Curve base_change(const Embedding& e) const;
  Curve base_change(const Field& big) const { return base_change(Embedding(field(), big)); }
  // Image under (x, y) -> (u^2 x, u^3 y).
  Curve scaled(const Elem& u) const;

  std::string str() const;
  friend bool operator==(const Curve& l, const Curve& r) { return l.a_ == r.a_ && l.b_ == r.b_; }

 private:
  Elem a_;
  Elem b_;
};

struct Point {
  Elem x;
  Elem y;
  bool infinity = true;

  static Point at(Elem x, Elem y) { return Point{std::move(x), std::move(y), false}; }
  friend bool operator==(const Point& l, const Point& r) {
    if (l.infinity || r.infinity) return l.infinity == r.infinity;
    return l.x == r.x && l.y == r.y;
  }
  friend std::strong_ordering operator<=>(const Point& l, const Point& r);
  std::string str() const;
};

bool on_curve(const Curve& e, const Point& pt);
Point negate(const Point& pt);
Point add(const Curve& e, const Point& l, const Point& r);
Point mul(const Curve& e, const Point& pt, const mpz_class& k);
Point mul(const Curve& e, const Point& pt, long k);
// Exact order of a point whose order divides bound.
long point_order(const Curve& e, const Point& pt, long bound);
// (x, y) -> (u^2 x, u^3 y); u must live in the point's field.
Point scale_point(const Elem& u, const Point& pt);
Point random_point(const Curve& e, std::mt19937_64& rng);

// #E(F_q) by enumeration; q must be small enough to tabulate squares.
mpz_class count_points(const Curve& e);

Elem j_invariant(const Curve& e);
// Some curve with the given j-invariant over j's field.
Curve model_from_j(const Elem& j);
bool is_supersingular_j(const Elem& j);
bool is_supersingular(const Curve& e);
// Model over F_{p^2} with Frobenius acting as the scalar p, i.e. #E(F_{p^2}) = (p-1)^2,
// lexicographically smallest (a, b) among all such models.
Curve canonical_ss_model(const Elem& j);

// All u in the base field with target == source.scaled(u), ascending.
std::vector<Elem> isomorphisms(const Curve& source, const Curve& target);
std::vector<Elem> automorphisms(const Curve& e);

// Division polynomials with y^2 absorbed: psi(m) equals the classical
// m-division polynomial for odd m and that polynomial divided by y for even m.
class DivisionPolys {
 public:
  DivisionPolys(const Curve& e, int upto);
  const Poly& psi(int m) const;
  int upto() const { return static_cast<int>(psi_.size()) - 1; }
  // x-coordinate of [m]Q from x(Q), x in an extension reached through emb.
  // Returns nullopt when [m]Q is the point at infinity.
  std::optional<Elem> x_multiple(const Elem& x, int m, const Embedding& emb) const;

 private:
  Curve curve_;
  std::vector<Poly> psi_;
};

// Polynomial whose roots are the x-coordinates of the nonzero m-torsion.
Poly division_poly(const Curve& e, int m);

// Kernel polynomials of the cyclic subgroups of order ell rational over the
// curve's field, ascending by coefficients.
std::vector<Poly> ell_subgroups(const Curve& e, int ell);

class Isogeny;

// Evaluates an isogeny on points over a fixed extension of its base field.
class IsogenyMap {
 public:
  IsogenyMap(const Isogeny& phi, const Field& big);
  Point operator()(const Point& pt) const;
  std::optional<Elem> x_image(const Elem& x) const;
  const Curve& source() const { return source_; }
  const Curve& target() const { return target_; }

 private:
  int degree_;
  Curve source_;
  Curve target_;
  Poly kernel_;
  Poly d1_, d2_, d3_;
  Elem s1_;
  Elem x0_, t0_;  // two-isogeny data
  Elem u_;
};

// Separable isogeny of prime degree: (x, y) -> (u^2 X, u^3 Y) where (X, Y) is
// the normalized quotient map with the given kernel polynomial.
class Isogeny {
 public:
  Isogeny(Curve source, Poly kernel, int degree, Elem post);

  const Curve& source() const { return source_; }
  const Curve& target() const { return target_; }
  int degree() const { return degree_; }
  const Poly& kernel() const { return kernel_; }
  const Elem& post() const { return post_; }
  // Normalized quotient curve before the post scaling.
  const Curve& quotient() const { return quotient_; }

  Isogeny post_composed(const Elem& u) const;
  IsogenyMap over(const Field& big) const { return IsogenyMap(*this, big); }
  Point operator()(const Point& pt) const { return pt.infinity ? pt : over(pt.x.field())(pt); }

 private:
  Curve source_;
  Poly kernel_;
  int degree_;
  Elem post_;
  Curve quotient_;
  Curve target_;
};

Isogeny velu(const Curve& e, const Poly& kernel, int ell);
// Kernel polynomial of the dual of phi on phi's target.
Poly dual_kernel(const Isogeny& phi);
// The isogeny psi with psi o phi = [deg phi].
Isogeny dual(const Isogeny& phi);

// Degree over F_p of the smallest field containing E[n] for a canonical model.
int torsion_field_degree(const Curve& canonical, long n);
// All points of E[n] over big (which must contain them), sorted.
std::vector<Point> torsion_points(const Curve& canonical_over_big, long n);
// Smallest point of exact order n in the minimal torsion field.
Point torsion_point(const Curve& canonical, long n);

struct TorsionBasis {
  Curve curve;  // base change to the torsion field
  long n = 0;
  Point p1, p2;
  std::map<Point, std::pair<long, long>> log;  // i*p1 + j*p2 -> (i, j)
};
TorsionBasis torsion_basis(const Curve& canonical, long n);

}  // namespace hecke::ec
