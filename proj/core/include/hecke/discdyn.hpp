#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "hecke/padic.hpp"
#include "hecke/ssgraph.hpp"

namespace hecke::discdyn {

using padic::Wq;
using padic::Zp;
using u64 = std::uint64_t;

// t -> (1 + t)^lambda - 1 on the open unit disc.
struct DiscAutomorphism {
  Zp lambda;
  bool is_identity() const { return lambda == Zp::from_int(lambda.p(), lambda.precision(), 1); }
};

Zp apply(const DiscAutomorphism& f, const Zp& t);

using ZpMatrix = std::vector<std::vector<Zp>>;

// Entrywise prod_{r,s} (1 + t_rs)^(f_inv[r][i] * g_dag[s][j]) - 1.
ZpMatrix serre_tate_multivar(const ZpMatrix& f_inv, const ZpMatrix& g_dag, const ZpMatrix& t);

// Whether every point of the p^a-torsion circle is fixed by the m-th iterate.
bool classify_periodic(const Zp& lambda, int m, int a);

// Number of quasi-canonical lifts of level s.
mpz_class qc_count(u64 p, int s, bool ramified);

// The matrix (a, p b^sigma; b, a^sigma).
struct QuatUnit {
  Wq a;
  Wq b;

  static QuatUnit identity(u64 p, int precision);
  Zp det() const;
  // Inverse up to the scalar det, which acts trivially.
  QuatUnit inverse() const { return {a.sigma(), -b}; }
  friend QuatUnit operator*(const QuatUnit& l, const QuatUnit& r);
  friend bool operator==(const QuatUnit& l, const QuatUnit& r) { return l.a == r.a && l.b == r.b; }
};

// w -> (a w + p b^sigma) / (b w + a^sigma) on U = {ord(w) >= 1}.
Wq mobius_apply(const QuatUnit& g, const Wq& w);

struct TransitivityWitness {
  QuatUnit gamma;
  Zp det;
  bool det_is_square = false;  // otherwise det / ell is a square
};

// A unit gamma with gamma(0) = x and det in (Z_p^x)^2 <ell>.
TransitivityWitness transitivity_witness(const Wq& x, u64 ell);

// Embeds an endomorphism with the given trace and norm (norm a unit) into the
// matrix model; the a-entry has trace equal to the given trace.
QuatUnit lift_endo(const ssgraph::WalkEndo& e, u64 p, int precision);

// Lifts of the non-scalar closed walks at the first vertex of length <= max_length,
// one per distinct (trace, norm).
std::vector<QuatUnit> hecke_generators(const ssgraph::SSGraph& g, std::size_t max_length, int precision);

struct TvCheckpoint {
  u64 steps = 0;
  double tv = 0;  // TV distance between the measures after steps and 2 * steps
};

// Visit counts of w mod p^k over U, indexed by the digits of w / p mod p^(k-1).
struct EmpiricalMeasure {
  u64 p = 0;
  int k = 2;
  std::vector<u64> counts;
  u64 total = 0;
  std::vector<TvCheckpoint> checkpoints;

  std::size_t classes() const { return counts.size(); }
  std::size_t support() const;
};

std::size_t residue_class(const Wq& w, int k);
std::size_t residue_class_count(u64 p, int k);

EmpiricalMeasure random_walk(const std::vector<QuatUnit>& generators, const Wq& x0, u64 steps, u64 seed, int k = 2);

}  // namespace hecke::discdyn
