#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "hecke/ssgraph.hpp"
#include "hecke/volcano.hpp"

namespace hecke::markov {

using u64 = std::uint64_t;
using RationalMatrix = std::vector<std::vector<mpq_class>>;
using Distribution = std::vector<mpq_class>;

// Row-stochastic matrix with exact rational entries.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(RationalMatrix entries);

  std::size_t size() const { return p_.size(); }
  const RationalMatrix& entries() const { return p_; }
  const mpq_class& operator()(std::size_t i, std::size_t j) const { return p_[i][j]; }
  bool doubly_stochastic() const;
  bool irreducible() const;
  bool bipartite() const;

 private:
  RationalMatrix p_;
};

// Adjacency divided by the common out-degree.
TransitionMatrix normalize(const std::vector<std::vector<long>>& adjacency);
TransitionMatrix normalize(const ssgraph::SSGraph& g);
// Over the explored part of the component; regular only for loop-free interiors.
TransitionMatrix normalize(const volcano::EmpiricalVolcano& v);

Distribution stationary(const TransitionMatrix& t);
Distribution step(const Distribution& d, const TransitionMatrix& t);
mpq_class total_variation(const Distribution& a, const Distribution& b);

struct MixingReport {
  double second_eigenvalue_modulus = 0;
  u64 steps_to_eps = 0;
  std::vector<double> tv_series;  // max over starts of TV(delta_v T^n, pi), n = 0..steps_to_eps
  Distribution stationary;
};

MixingReport mixing_report(const TransitionMatrix& t, double eps, u64 max_steps = 10'000);

// Distribution of the level of a uniform walk on the infinite volcano.
struct EscapeTable {
  int start_level = 0;
  std::vector<std::vector<mpq_class>> mass;  // mass[n][level]

  // Mass at levels <= max_level after n steps.
  mpq_class mass_within(std::size_t n, int max_level) const;
};

EscapeTable volcano_escape(const volcano::SyntheticVolcano& v, int start_level, std::size_t steps);

}  // namespace hecke::markov
