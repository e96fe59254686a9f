#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hecke/discdyn.hpp"
#include "hecke/error.hpp"
#include "hecke/io.hpp"
#include "hecke/markov.hpp"
#include "hecke/padic.hpp"
#include "hecke/qform.hpp"
#include "hecke/ssgraph.hpp"
#include "hecke/volcano.hpp"

namespace {

using hecke::Errc;
using hecke::Error;
using Json = nlohmann::ordered_json;
using u64 = std::uint64_t;

constexpr int kExitUser = 1;
constexpr int kExitInvariant = 2;

// Thrown for violated library guarantees.
struct InvariantBreach : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_user_error(Errc c) {
  switch (c) {
    case Errc::ChartEscape:
    case Errc::SearchExhausted:
    case Errc::TraceAmbiguous:
    case Errc::NotClosed:
    case Errc::NotAKernel:
    case Errc::BadTorsionOrder:
      return false;
    default:
      return true;
  }
}

int default_precision() {
  if (const char* env = std::getenv("HECKE_PRECISION")) {
    try {
      const int m = std::stoi(env);
      if (m >= 1) return m;
    } catch (const std::exception&) {
    }
    throw Error(Errc::InvalidArgument, "HECKE_PRECISION must be a positive integer");
  }
  return hecke::padic::kDefaultPrecision;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    hecke::io::write_atomic(path, text);
  }
}

// Discriminants whose fundamental part is -3 or -4.
bool excluded_discriminant(const mpz_class& disc) {
  mpz_class d = disc;
  for (mpz_class f = 2; f * f <= abs(d); ++f) {
    const mpz_class f2 = f * f;
    while (mpz_divisible_p(d.get_mpz_t(), f2.get_mpz_t()) && hecke::qform::is_discriminant(d / f2)) d /= f2;
  }
  return d == -3 || d == -4;
}

struct SsgraphArgs {
  u64 p = 0, ell = 0, level = 1;
  std::string out, dot, report_out;
  bool report = false;
};

int run_ssgraph(const SsgraphArgs& a) {
  const auto g = hecke::ssgraph::build_ssgraph(a.p, a.ell, a.level);
  for (const auto& row : g.adjacency()) {
    long d = 0;
    for (long x : row) d += x;
    if (d != static_cast<long>(a.ell + 1)) throw InvariantBreach("out-degree " + std::to_string(d) + " differs from ell + 1");
  }
  if (!a.out.empty()) emit(a.out, hecke::io::ssgraph_to_json(g));
  if (!a.dot.empty()) emit(a.dot, hecke::io::ssgraph_to_dot(g));
  if (a.report || !a.report_out.empty()) {
    const auto r = hecke::ssgraph::graph_report(g);
    if (!r.connected) throw InvariantBreach("graph is not connected");
    emit(a.report_out, hecke::io::report_to_json(r));
  }
  if (a.out.empty() && a.dot.empty() && !a.report && a.report_out.empty()) std::cout << hecke::io::ssgraph_to_json(g);
  return 0;
}

struct VolcanoArgs {
  std::optional<long> disc;
  std::optional<u64> p;
  std::optional<u64> j0;
  u64 ell = 0;
  int depth = 0;
  std::string out, dot;
};

int run_volcano(const VolcanoArgs& a) {
  if (a.disc) {
    if (a.p || a.j0) throw Error(Errc::InvalidArgument, "--disc excludes -p and --j");
    const mpz_class disc(*a.disc);
    if (disc < 0 && excluded_discriminant(disc)) throw Error(Errc::BadDiscriminant, "excluded discriminant");
    const auto v = hecke::volcano::build_synthetic(disc, a.ell, a.depth);
    emit(a.out, hecke::io::synthetic_to_json(v));
    if (!a.dot.empty()) emit(a.dot, hecke::io::volcano_to_dot(hecke::volcano::materialize(v)));
    return 0;
  }
  if (!a.p || !a.j0) throw Error(Errc::InvalidArgument, "give either --disc or both -p and --j");
  const auto v = hecke::volcano::build_empirical(*a.p, *a.j0, a.ell, a.depth);
  if (excluded_discriminant(v.rim_disc)) throw Error(Errc::BadDiscriminant, "excluded discriminant");
  emit(a.out, hecke::io::empirical_to_json(v));
  return 0;
}

struct DynArgs {
  u64 p = 0;
  long lambda = 1;
  long t = 0;
  int iterations = 1;
  int precision = 0;
  int a = 1;
  int m = 1;
  u64 ell = 0;
  u64 level = 1;
  u64 steps = 100'000;
  u64 seed = 7;
  int k = 2;
  std::size_t max_length = 2;
  std::string out, csv;
};

hecke::padic::Zp zp(const DynArgs& a, long v) { return hecke::padic::Zp::from_int(a.p, a.precision, v); }

int run_orbit(const DynArgs& a) {
  const hecke::discdyn::DiscAutomorphism f{zp(a, a.lambda)};
  auto t = zp(a, a.t);
  Json out;
  out["p"] = a.p;
  out["lambda"] = a.lambda;
  out["precision"] = a.precision;
  Json it = Json::array();
  for (int n = 1; n <= a.iterations; ++n) {
    t = hecke::discdyn::apply(f, t);
    it.push_back(Json{{"n", n}, {"value", t.value().get_str()}, {"valuation", t.valuation_capped()}});
  }
  out["iterates"] = std::move(it);
  emit(a.out, out.dump(2) + "\n");
  return 0;
}

int run_closure(const DynArgs& a) {
  const auto d = hecke::padic::orbit_closure(zp(a, a.lambda));
  Json out;
  out["p"] = a.p;
  out["lambda"] = a.lambda;
  out["teich_order"] = d.teich_order;
  out["wild_valuation"] = d.wild_valuation;
  out["component_count"] = d.component_count;
  out["radius_exponent"] = d.radius_exponent;
  out["finite"] = d.finite;
  if (d.finite) out["orbit_size"] = d.orbit_size;
  emit(a.out, out.dump(2) + "\n");
  return 0;
}

int run_periodic(const DynArgs& a) {
  const bool fixed = hecke::discdyn::classify_periodic(zp(a, a.lambda), a.m, a.a);
  emit(a.out, fixed ? "true\n" : "false\n");
  return 0;
}

int run_walk_measure(const DynArgs& a) {
  const auto g = hecke::ssgraph::build_ssgraph(a.p, a.ell, a.level);
  const auto gens = hecke::discdyn::hecke_generators(g, a.max_length, a.precision);
  if (gens.empty()) throw Error(Errc::SearchExhausted, "no non-scalar closed walks to lift");
  const auto x0 = hecke::padic::Wq::from_ints(a.p, a.precision, 0, 0);
  const auto m = hecke::discdyn::random_walk(gens, x0, a.steps, a.seed, a.k);
  emit(a.out, hecke::io::measure_to_json(m));
  if (!a.csv.empty()) emit(a.csv, hecke::io::tv_to_csv(m));
  return 0;
}

struct MarkovArgs {
  std::string graph;
  bool stationary = false;
  std::optional<double> eps;
  std::string out, csv;
};

int run_markov(const MarkovArgs& a) {
  const auto g = hecke::io::ssgraph_from_json(hecke::io::read_file(a.graph));
  const auto t = hecke::markov::normalize(g);
  Json out;
  out["vertices"] = t.size();
  out["bipartite"] = t.bipartite();
  out["doubly_stochastic"] = t.doubly_stochastic();
  const auto pi = hecke::markov::stationary(t);
  if (a.stationary || !a.eps) std::cout << "stationary " << hecke::io::distribution_str(pi) << "\n";
  Json pij = Json::array();
  for (const auto& x : pi) pij.push_back(x.get_str());
  out["stationary"] = std::move(pij);
  if (a.eps) {
    if (t.bipartite()) {
      std::cout << "bipartite: no mixing\n";
      out["mixing"] = nullptr;
    } else {
      const auto r = hecke::markov::mixing_report(t, *a.eps);
      std::cout << "second eigenvalue modulus " << r.second_eigenvalue_modulus << ", steps to eps " << r.steps_to_eps << "\n";
      out["mixing"] = Json::parse(hecke::io::mixing_to_json(r));
      if (!a.csv.empty()) emit(a.csv, hecke::io::mixing_to_csv(r));
    }
  }
  if (!a.out.empty()) emit(a.out, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogeny graphs, volcanoes and Hecke dynamics"};
  app.require_subcommand(1);

  SsgraphArgs sg;
  auto* cmd_sg = app.add_subcommand("ssgraph", "supersingular graph of level N");
  cmd_sg->add_option("-p", sg.p, "characteristic")->required();
  cmd_sg->add_option("-l,--ell", sg.ell, "isogeny degree")->required();
  cmd_sg->add_option("-N,--level", sg.level, "level");
  cmd_sg->add_option("--out", sg.out, "graph JSON");
  cmd_sg->add_option("--dot", sg.dot, "graph DOT");
  cmd_sg->add_flag("--report", sg.report, "print the structural report");
  cmd_sg->add_option("--report-out", sg.report_out, "structural report JSON");

  VolcanoArgs vo;
  auto* cmd_vo = app.add_subcommand("volcano", "ordinary isogeny volcano, synthetic or from a curve");
  cmd_vo->add_option("--disc", vo.disc, "discriminant of the rim order");
  cmd_vo->add_option("-p", vo.p, "characteristic");
  cmd_vo->add_option("--j", vo.j0, "starting j-invariant");
  cmd_vo->add_option("-l,--ell", vo.ell, "isogeny degree")->required();
  cmd_vo->add_option("--depth", vo.depth, "depth")->required();
  cmd_vo->add_option("--out", vo.out, "JSON output");
  cmd_vo->add_option("--dot", vo.dot, "DOT output (synthetic only)");

  DynArgs dy;
  auto* cmd_dy = app.add_subcommand("dyn", "p-adic disc dynamics");
  cmd_dy->require_subcommand(1);
  auto precision_opt = [&](CLI::App* c) { c->add_option("-M,--precision", dy.precision, "p-adic precision"); };
  auto* orbit = cmd_dy->add_subcommand("orbit", "iterate t -> (1 + t)^lambda - 1");
  orbit->add_option("-p", dy.p, "odd prime")->required();
  orbit->add_option("--lambda", dy.lambda, "p-adic unit")->required();
  orbit->add_option("--t", dy.t, "starting point in pZ_p")->required();
  orbit->add_option("-n", dy.iterations, "iterations")->check(CLI::PositiveNumber);
  precision_opt(orbit);
  orbit->add_option("--out", dy.out, "JSON output");
  auto* closure = cmd_dy->add_subcommand("closure", "closure of the powers of lambda");
  closure->add_option("-p", dy.p, "odd prime")->required();
  closure->add_option("--lambda", dy.lambda, "p-adic unit")->required();
  precision_opt(closure);
  closure->add_option("--out", dy.out, "JSON output");
  auto* periodic = cmd_dy->add_subcommand("periodic", "is the p^a circle fixed by the m-th iterate");
  periodic->add_option("-p", dy.p, "odd prime")->required();
  periodic->add_option("--lambda", dy.lambda, "p-adic unit")->required();
  periodic->add_option("-a", dy.a, "circle index")->required();
  periodic->add_option("-m", dy.m, "iterate")->check(CLI::PositiveNumber);
  precision_opt(periodic);
  periodic->add_option("--out", dy.out, "JSON output");
  auto* walk = cmd_dy->add_subcommand("walk-measure", "empirical measure of the Hecke random walk on U");
  walk->add_option("-p", dy.p, "odd prime")->required();
  walk->add_option("-l,--ell", dy.ell, "isogeny degree")->required();
  walk->add_option("-N,--level", dy.level, "level");
  walk->add_option("--steps", dy.steps, "walk length");
  walk->add_option("--seed", dy.seed, "RNG seed");
  walk->add_option("-k", dy.k, "classes are taken mod p^k")->check(CLI::PositiveNumber);
  walk->add_option("--max-length", dy.max_length, "longest closed walk used as a generator");
  precision_opt(walk);
  walk->add_option("--out", dy.out, "JSON output");
  walk->add_option("--csv", dy.csv, "TV checkpoints CSV");

  MarkovArgs mk;
  auto* cmd_mk = app.add_subcommand("markov", "Markov chain of T_ell on a graph file");
  cmd_mk->add_option("--graph", mk.graph, "graph JSON")->required();
  cmd_mk->add_flag("--stationary", mk.stationary, "print the stationary distribution");
  cmd_mk->add_option("--mixing", mk.eps, "TV tolerance");
  cmd_mk->add_option("--out", mk.out, "JSON report");
  cmd_mk->add_option("--csv", mk.csv, "TV series CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUser;
  }

  try {
    if (dy.precision == 0) dy.precision = default_precision();
    if (dy.precision < 1) throw Error(Errc::InvalidArgument, "precision must be positive");
    if (*cmd_sg) return run_ssgraph(sg);
    if (*cmd_vo) return run_volcano(vo);
    if (*cmd_mk) return run_markov(mk);
    if (*orbit) return run_orbit(dy);
    if (*closure) return run_closure(dy);
    if (*periodic) return run_periodic(dy);
    if (*walk) return run_walk_measure(dy);
  } catch (const InvariantBreach& e) {
    std::cerr << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_user_error(e.code()) ? kExitUser : kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUser;
}
