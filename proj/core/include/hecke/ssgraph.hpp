#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "hecke/ec.hpp"
#include "hecke/ff.hpp"
#include "hecke/padic.hpp"

namespace hecke::ssgraph {

using u64 = std::uint64_t;

inline constexpr std::size_t kMaxVertexBudget = 100'000;

struct SSVertex {
  std::size_t id = 0;
  ff::Elem j;
  ec::Curve curve;         // canonical model over F_{p^2}
  ec::Point point;         // smallest point of its Aut-orbit; infinity when N = 1
  std::size_t aut_order = 1;  // size of Aut(E, P)
};

// One arrow per cyclic subgroup. labels lists the isomorphisms u (ascending)
// for which u o (normalized quotient map) sends the source point to the target
// point; labels.front() is the recorded representative.
struct SSArrow {
  std::size_t src = 0;
  std::size_t dst = 0;
  ff::Poly kernel;
  std::vector<ff::Elem> labels;
  std::size_t mult() const { return labels.size(); }
};

struct WalkStep {
  std::size_t arrow = 0;
  std::size_t label = 0;
};
using Walk = std::vector<WalkStep>;

struct WalkEndo {
  mpz_class trace;
  mpz_class norm;
  friend bool operator==(const WalkEndo&, const WalkEndo&) = default;
};

class SSGraph {
 public:
  SSGraph(u64 p, u64 ell, u64 level, std::vector<SSVertex> vertices, std::vector<SSArrow> arrows);

  u64 p() const { return p_; }
  u64 ell() const { return ell_; }
  u64 level() const { return level_; }
  const ff::Field& base_field() const { return base_; }
  // Field carrying the marked points.
  const ff::Field& point_field() const { return point_field_; }
  const std::vector<SSVertex>& vertices() const { return vertices_; }
  const std::vector<SSArrow>& arrows() const { return arrows_; }
  const std::vector<std::size_t>& out(std::size_t v) const { return out_[v]; }
  // Counts of subgroups from row to column.
  const std::vector<std::vector<long>>& adjacency() const { return adjacency_; }
  bool rigid() const;
  bool solid() const;

  ec::Isogeny isogeny(const WalkStep& step) const;
  std::size_t end_of(std::size_t start, const Walk& w) const;

  // Torsion basis of the vertex curve for an auxiliary modulus, cached.
  const ec::TorsionBasis& torsion(std::size_t vertex, long m) const;

  friend bool operator==(const SSGraph& a, const SSGraph& b);

 private:
  u64 p_, ell_, level_;
  ff::Field base_;
  ff::Field point_field_;
  std::vector<SSVertex> vertices_;
  std::vector<SSArrow> arrows_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<long>> adjacency_;
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, long>, std::unique_ptr<ec::TorsionBasis>> torsion;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

// Supersingular j-invariants in F_{p^2}, ascending, found by isogeny search.
std::vector<ff::Elem> supersingular_js(u64 p);

SSGraph build_ssgraph(u64 p, u64 ell, u64 level);

struct GraphReport {
  bool connected = false;
  bool bipartite = true;
  std::optional<std::size_t> girth;  // shortest directed cycle
  std::vector<long> out_degrees;
  std::vector<long> in_degrees;
  std::size_t loops = 0;
  std::size_t multi_edges = 0;  // ordered pairs joined by more than one arrow
  bool simple = false;
  bool rigid = false;
  bool solid = false;
  // Level 1 only.
  std::optional<std::size_t> self_dual_loops;
  std::optional<long> cycle_rank_ud;
  std::optional<mpq_class> rank_formula;
};

GraphReport graph_report(const SSGraph& g);

// 1 + gamma/2 + (ell - 1)(p - 1)/24 with gamma = H(4 ell)/2.
mpq_class rank_formula(u64 p, u64 ell);

// Auxiliary torsion moduli for trace recovery, cheapest torsion field first.
std::vector<long> auxiliary_moduli(const SSGraph& g);

WalkEndo walk_char_poly(const SSGraph& g, std::size_t start, const Walk& w);
// Return walk made of the duals of the steps of w, in reverse (level 1 only).
Walk dual_return(const SSGraph& g, std::size_t start, const Walk& w);

// All closed walks of length 1..max_length at start using recorded labels.
std::vector<Walk> closed_walks(const SSGraph& g, std::size_t start, std::size_t max_length, std::size_t cap = 100'000);

struct MonoidCertificates {
  std::optional<Walk> odd_walk;
  std::size_t odd_walk_start = 0;
  std::optional<std::pair<WalkEndo, WalkEndo>> noncommuting_pair;
  bool alpha_check = true;
  std::size_t walks_checked = 0;
  std::vector<std::size_t> alpha_violation_lengths;
  bool budget_exhausted = false;
};

MonoidCertificates monoid_certificates(const SSGraph& g, std::size_t budget);

// u in (Z_p^x)^2 <ell>.
bool sat_membership(const padic::Zp& u, u64 ell);

// Multiplicative order of ell modulo N.
u64 alpha(u64 ell, u64 level);

}  // namespace hecke::ssgraph
