#include "hecke/markov.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <deque>

#include <Eigen/Eigenvalues>

#include "hecke/error.hpp"

namespace hecke::markov {

namespace {

std::vector<std::vector<std::size_t>> support_graph(const RationalMatrix& p) {
  std::vector<std::vector<std::size_t>> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[i][j] != 0) g[i].push_back(j);
    }
  }
  return g;
}

// Rank of a rational matrix by fraction-exact elimination.
std::size_t rank(RationalMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const mpq_class f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

}  // namespace

TransitionMatrix::TransitionMatrix(RationalMatrix entries) : p_(std::move(entries)) {
  for (const auto& row : p_) {
    if (row.size() != p_.size()) raise(Errc::InvalidArgument, "transition matrix must be square");
    mpq_class s = 0;
    for (const auto& x : row) {
      if (x < 0) raise(Errc::InvalidArgument, "negative transition probability");
      s += x;
    }
    if (s != 1) raise(Errc::InvalidArgument, "row does not sum to 1");
  }
}

bool TransitionMatrix::doubly_stochastic() const {
  for (std::size_t j = 0; j < size(); ++j) {
    mpq_class s = 0;
    for (std::size_t i = 0; i < size(); ++i) s += p_[i][j];
    if (s != 1) return false;
  }
  return true;
}

bool TransitionMatrix::irreducible() const {
  const std::size_t n = size();
  if (n == 0) return false;
  const auto g = support_graph(p_);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> q{0};
    seen[0] = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w = 0; w < n; ++w) {
        const bool edge = pass == 0 ? p_[v][w] != 0 : p_[w][v] != 0;
        if (edge && !seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
      }
    }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(n)) return false;
  }
  return true;
}

bool TransitionMatrix::bipartite() const {
  const std::size_t n = size();
  if (n == 0) return false;
  const auto g = support_graph(p_);
  std::vector<std::array<char, 2>> seen(n, {0, 0});
  std::deque<std::pair<std::size_t, int>> q{{0, 0}};
  seen[0][0] = 1;
  while (!q.empty()) {
    const auto [v, s] = q.front();
    q.pop_front();
    for (std::size_t w : g[v]) {
      if (!seen[w][1 - s]) {
        seen[w][1 - s] = 1;
        q.push_back({w, 1 - s});
      }
    }
  }
  return std::none_of(seen.begin(), seen.end(), [](const auto& b) { return b[0] && b[1]; });
}

TransitionMatrix normalize(const std::vector<std::vector<long>>& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) raise(Errc::InvalidArgument, "empty graph");
  long degree = -1;
  for (const auto& row : adjacency) {
    if (row.size() != n) raise(Errc::InvalidArgument, "adjacency must be square");
    long d = 0;
    for (long x : row) {
      if (x < 0) raise(Errc::InvalidArgument, "negative arrow count");
      d += x;
    }
    if (degree < 0) degree = d;
    if (d != degree || d == 0) raise(Errc::NotOutRegular, "out-degrees differ");
  }
  RationalMatrix p(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      p[i][j] = mpq_class(adjacency[i][j], degree);
      p[i][j].canonicalize();
    }
  }
  return TransitionMatrix(std::move(p));
}

TransitionMatrix normalize(const ssgraph::SSGraph& g) {
  for (const auto& row : g.adjacency()) {
    long d = 0;
    for (long x : row) d += x;
    if (d != static_cast<long>(g.ell() + 1)) raise(Errc::NotOutRegular, "out-degree differs from ell + 1");
  }
  return normalize(g.adjacency());
}

TransitionMatrix normalize(const volcano::EmpiricalVolcano& v) {
  const std::size_t n = v.vertices.size();
  std::vector<std::vector<long>> adj(n, std::vector<long>(n, 0));
  for (const auto& [a, b] : v.arrows) ++adj[a][b];
  for (const auto& row : adj) {
    long d = 0;
    for (long x : row) d += x;
    if (d != static_cast<long>(v.ell + 1)) raise(Errc::NotOutRegular, "explored volcano is not (ell + 1)-out-regular");
  }
  return normalize(adj);
}

Distribution stationary(const TransitionMatrix& t) {
  if (!t.irreducible()) raise(Errc::Reducible, "transition matrix is reducible");
  const std::size_t n = t.size();
  // Solve pi (T - I) = 0 with sum(pi) = 1: rows of the system are columns of T - I.
  RationalMatrix a(n + 1, std::vector<mpq_class>(n + 1, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) a[j][i] = t(i, j) - (i == j ? 1 : 0);
  }
  for (std::size_t i = 0; i < n; ++i) a[n][i] = 1;
  a[n][n] = 1;
  RationalMatrix shifted(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) shifted[i][j] = t(i, j) - (i == j ? 1 : 0);
  }
  if (rank(shifted) != n - 1) raise(Errc::Reducible, "fixed space is not one-dimensional");

  // Gauss-Jordan on the (n + 1) x n system with right-hand side in the last column.
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < n && r <= n; ++c) {
    std::size_t piv = r;
    while (piv <= n && a[piv][c] == 0) ++piv;
    if (piv > n) continue;
    std::swap(a[piv], a[r]);
    const mpq_class lead = a[r][c];
    for (std::size_t k = c; k <= n; ++k) a[r][k] /= lead;
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (std::size_t k = c; k <= n; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (r != n) raise(Errc::Reducible, "stationary system is singular");
  Distribution pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[pivot_col[i]] = a[i][n];
  return pi;
}

Distribution step(const Distribution& d, const TransitionMatrix& t) {
  if (d.size() != t.size()) raise(Errc::InvalidArgument, "distribution size mismatch");
  Distribution out(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0) continue;
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (t(i, j) != 0) out[j] += d[i] * t(i, j);
    }
  }
  return out;
}

mpq_class total_variation(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) raise(Errc::InvalidArgument, "distribution size mismatch");
  mpq_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += abs(a[i] - b[i]);
  return s / 2;
}

MixingReport mixing_report(const TransitionMatrix& t, double eps, u64 max_steps) {
  if (!(eps > 0)) raise(Errc::InvalidArgument, "tolerance must be positive");
  if (!t.irreducible()) raise(Errc::Reducible, "transition matrix is reducible");
  if (t.bipartite()) raise(Errc::Bipartite, "bipartite chain does not mix");
  MixingReport r;
  r.stationary = stationary(t);
  const std::size_t n = t.size();

  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = t(i, j).get_d();
  }
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(m, false).eigenvalues();
  std::vector<std::complex<double>> vals(ev.data(), ev.data() + ev.size());
  const auto top = std::min_element(vals.begin(), vals.end(),
                                    [](const auto& a, const auto& b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  vals.erase(top);
  for (const auto& v : vals) r.second_eigenvalue_modulus = std::max(r.second_eigenvalue_modulus, std::abs(v));

  const mpq_class threshold(eps);
  std::vector<Distribution> rows(n, Distribution(n, 0));
  for (std::size_t v = 0; v < n; ++v) rows[v][v] = 1;
  for (u64 k = 0;; ++k) {
    mpq_class worst = 0;
    for (const auto& row : rows) worst = std::max(worst, total_variation(row, r.stationary));
    r.tv_series.push_back(worst.get_d());
    if (worst < threshold) {
      r.steps_to_eps = k;
      break;
    }
    if (k == max_steps) raise(Errc::BudgetExhausted, "no convergence within the step budget");
    for (auto& row : rows) row = step(row, t);
  }
  return r;
}

mpq_class EscapeTable::mass_within(std::size_t n, int max_level) const {
  mpq_class s = 0;
  const auto& row = mass.at(n);
  for (int l = 0; l <= max_level && l < static_cast<int>(row.size()); ++l) s += row[static_cast<std::size_t>(l)];
  return s;
}

EscapeTable volcano_escape(const volcano::SyntheticVolcano& v, int start_level, std::size_t steps) {
  if (start_level < 0 || start_level > v.depth) raise(Errc::InvalidArgument, "start level outside the volcano");
  if (static_cast<std::size_t>(v.depth) <= static_cast<std::size_t>(start_level) + steps) {
    raise(Errc::DepthTooSmall, "walk of " + std::to_string(steps) + " steps can reach the truncated floor");
  }
  const mpq_class out_degree(static_cast<unsigned long>(v.ell + 1));
  // From the rim, 1 + kronecker arrows stay on the rim; below it one arrow goes up.
  const mpq_class rim_stay = mpq_class(1 + v.kronecker) / out_degree;
  const mpq_class rim_down = 1 - rim_stay;
  const mpq_class up = 1 / out_degree;
  const mpq_class down = 1 - up;
  const std::size_t width = static_cast<std::size_t>(start_level) + steps + 1;
  EscapeTable tab;
  tab.start_level = start_level;
  std::vector<mpq_class> cur(width, 0);
  cur[static_cast<std::size_t>(start_level)] = 1;
  tab.mass.push_back(cur);
  for (std::size_t n = 0; n < steps; ++n) {
    std::vector<mpq_class> next(width, 0);
    for (std::size_t l = 0; l < width; ++l) {
      if (cur[l] == 0) continue;
      if (l == 0) {
        next[0] += cur[0] * rim_stay;
        next[1] += cur[0] * rim_down;
      } else {
        next[l - 1] += cur[l] * up;
        next[l + 1] += cur[l] * down;
      }
    }
    cur = std::move(next);
    tab.mass.push_back(cur);
  }
  return tab;
}

}  // namespace hecke::markov
