#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "hecke/ff.hpp"
#include "hecke/padic.hpp"
#include "hecke/qform.hpp"

namespace hecke::volcano {

using u64 = std::uint64_t;

enum class RimType { InertPoint, RamifiedEdge, RamifiedLoop, SplitCycle };
std::string_view rim_type_name(RimType t);

struct SyntheticVolcano {
  mpz_class disc;  // discriminant of the rim order
  u64 ell = 0;
  int depth = 0;
  int kronecker = 0;
  u64 rim_size = 0;
  std::vector<mpz_class> level_sizes;  // levels 0..depth of one component
  RimType rim_type = RimType::InertPoint;
  std::optional<qform::QuadInt> f_rim;  // generator of L^rim_size; absent when inert
};

SyntheticVolcano build_synthetic(const mpz_class& disc, u64 ell, int depth);

struct VolcanoArrow {
  std::size_t src = 0;
  std::size_t dst = 0;
  std::size_t dual = 0;
  int rim_sign = 0;  // +1 / -1 along the rim orientation, 0 off the rim
};

// Explicit volcano truncated at the synthetic depth. Rim vertices come first.
struct VolcanoGraph {
  u64 rim_size = 0;
  std::vector<int> level;
  std::vector<std::size_t> up;  // arrow towards the parent; unused on the rim
  std::vector<VolcanoArrow> arrows;
  std::vector<std::vector<std::size_t>> out;
  std::size_t size() const { return level.size(); }
};

VolcanoGraph materialize(const SyntheticVolcano& v, std::size_t max_vertices = 1'000'000);

struct ReducedWalk {
  std::vector<std::size_t> to_rim;   // path from the start up to the rim; empty when winding is 0
  long winding = 0;                  // signed number of full turns around the rim
  std::vector<std::size_t> reduced;  // walk after cancelling adjacent dual pairs
};

ReducedWalk reduce_walk(const VolcanoGraph& g, std::size_t start, const std::vector<std::size_t>& walk);
// The walk to_rim, then winding turns around the rim, then back down.
std::vector<std::size_t> normal_form_walk(const VolcanoGraph& g, const ReducedWalk& r);

struct TraceNorm {
  mpz_class trace;
  mpz_class norm;
};
// Endomorphism ell^k f_rim^n of a closed walk of the given length with winding n.
TraceNorm walk_endo(const SyntheticVolcano& v, std::size_t length, long winding);

struct EmpiricalVolcano {
  u64 p = 0;
  u64 ell = 0;
  int depth = 0;
  ff::Elem j0;
  mpz_class trace;       // Frobenius trace of the chosen model of j0
  mpz_class frob_disc;   // trace^2 - 4p
  int height = 0;        // from the degree pattern of the component
  int height_from_trace = 0;
  mpz_class rim_disc;    // frob_disc / ell^(2 height)
  int kronecker = 0;     // (rim_disc / ell)
  std::vector<ff::Elem> vertices;  // within distance depth of j0, BFS order
  std::vector<int> level;
  std::vector<int> distance;
  std::vector<u64> degree;
  std::vector<std::pair<std::size_t, std::size_t>> arrows;
  std::size_t component_size = 0;
  std::vector<u64> level_sizes;  // whole component
  u64 rim_size = 0;
  u64 rim_degree = 0;
  bool rim_degree_uniform = true;
  // The component reaches j = 0 or 1728, where extra automorphisms distort degrees.
  bool touches_extra_automorphisms = false;
};

EmpiricalVolcano build_empirical(u64 p, u64 j0, u64 ell, int depth);

// {r1/r2, r2/r1} for the roots of x^2 - trace x + norm in Z_p.
std::pair<padic::Zp, padic::Zp> lambda_of_endo(const mpz_class& trace, const mpz_class& norm, u64 p, int precision);

}  // namespace hecke::volcano
