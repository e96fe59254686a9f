#include "hecke/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "hecke/error.hpp"

namespace hecke::io {

namespace {

using Json = nlohmann::ordered_json;
using u64 = std::uint64_t;

Json elem_json(const ff::Elem& e) { return Json(e.coeffs()); }

ff::Elem elem_from(const ff::Field& f, const Json& j) {
  auto coeffs = j.get<std::vector<u64>>();
  if (coeffs.size() != static_cast<std::size_t>(f.degree())) raise(Errc::InvalidArgument, "field element has the wrong length");
  for (u64 c : coeffs) {
    if (c >= f.p()) raise(Errc::InvalidArgument, "coefficient out of range");
  }
  return f.from_coeffs(std::move(coeffs));
}

Json poly_json(const ff::Poly& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(elem_json(c));
  return out;
}

Json point_json(const ec::Point& pt) {
  if (pt.infinity) return nullptr;
  return Json{{"x", elem_json(pt.x)}, {"y", elem_json(pt.y)}};
}

Json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::string ssgraph_to_json(const ssgraph::SSGraph& g) {
  Json out;
  out["p"] = g.p();
  out["ell"] = g.ell();
  out["N"] = g.level();
  Json verts = Json::array();
  for (const auto& v : g.vertices()) {
    verts.push_back(Json{{"id", v.id},
                         {"j", elem_json(v.j)},
                         {"curve", {{"a", elem_json(v.curve.a())}, {"b", elem_json(v.curve.b())}}},
                         {"point", point_json(v.point)},
                         {"aut", v.aut_order}});
  }
  out["vertices"] = std::move(verts);
  Json arrows = Json::array();
  for (const auto& a : g.arrows()) {
    Json labels = Json::array();
    for (const auto& u : a.labels) labels.push_back(elem_json(u));
    arrows.push_back(Json{{"src", a.src}, {"dst", a.dst}, {"kernel", poly_json(a.kernel)}, {"mult", a.mult()}, {"labels", labels}});
  }
  out["arrows"] = std::move(arrows);
  return out.dump(2) + "\n";
}

ssgraph::SSGraph ssgraph_from_json(const std::string& text) {
  try {
    const Json in = Json::parse(text);
    const u64 p = in.at("p").get<u64>();
    const u64 ell = in.at("ell").get<u64>();
    const u64 level = in.at("N").get<u64>();
    if (!ff::is_prime(p) || p < 5) raise(Errc::NonPrime, "graph file has an invalid characteristic");
    const ff::Field f2 = ff::make_field(p, 2);
    std::vector<ssgraph::SSVertex> verts;
    for (const auto& jv : in.at("vertices")) {
      ssgraph::SSVertex v;
      v.id = jv.at("id").get<std::size_t>();
      if (v.id != verts.size()) raise(Errc::InvalidArgument, "vertex ids must be consecutive");
      v.j = elem_from(f2, jv.at("j"));
      if (jv.contains("curve")) {
        v.curve = ec::Curve(elem_from(f2, jv.at("curve").at("a")), elem_from(f2, jv.at("curve").at("b")));
      } else {
        v.curve = ec::canonical_ss_model(v.j);
      }
      if (!(v.curve.j() == v.j)) raise(Errc::InvalidArgument, "curve does not match its j-invariant");
      const Json& pt = jv.at("point");
      if (!pt.is_null()) {
        const ff::Field big = ff::make_field(p, static_cast<int>(pt.at("x").size()));
        v.point = ec::Point::at(elem_from(big, pt.at("x")), elem_from(big, pt.at("y")));
        if (!ec::on_curve(v.curve.base_change(big), v.point)) raise(Errc::InvalidArgument, "marked point is not on the curve");
      }
      v.aut_order = jv.at("aut").get<std::size_t>();
      verts.push_back(std::move(v));
    }
    std::vector<ssgraph::SSArrow> arrows;
    for (const auto& ja : in.at("arrows")) {
      ssgraph::SSArrow a;
      a.src = ja.at("src").get<std::size_t>();
      a.dst = ja.at("dst").get<std::size_t>();
      std::vector<ff::Elem> coeffs;
      for (const auto& c : ja.at("kernel")) coeffs.push_back(elem_from(f2, c));
      a.kernel = ff::Poly(f2, std::move(coeffs));
      if (ja.contains("labels")) {
        for (const auto& u : ja.at("labels")) a.labels.push_back(elem_from(f2, u));
      } else {
        a.labels.push_back(f2.one());
      }
      if (ja.contains("mult") && ja.at("mult").get<std::size_t>() != a.labels.size()) {
        raise(Errc::InvalidArgument, "arrow multiplicity does not match its labels");
      }
      arrows.push_back(std::move(a));
    }
    return ssgraph::SSGraph(p, ell, level, std::move(verts), std::move(arrows));
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::InvalidArgument, std::string("malformed graph file: ") + e.what());
  }
}

std::string ssgraph_to_dot(const ssgraph::SSGraph& g) {
  std::ostringstream os;
  os << "digraph ssgraph {\n";
  os << "  label=\"p=" << g.p() << " ell=" << g.ell() << " N=" << g.level() << "\";\n";
  for (const auto& v : g.vertices()) {
    os << "  v" << v.id << " [label=\"" << v.id << ": j=" << v.j.str() << "\"];\n";
  }
  const auto& adj = g.adjacency();
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (std::size_t j = 0; j < adj.size(); ++j) {
      if (adj[i][j] > 0) os << "  v" << i << " -> v" << j << " [label=\"" << adj[i][j] << "\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string report_to_json(const ssgraph::GraphReport& r) {
  Json out;
  out["connected"] = r.connected;
  out["bipartite"] = r.bipartite;
  out["girth"] = r.girth ? Json(*r.girth) : Json(nullptr);
  out["out_degrees"] = r.out_degrees;
  out["in_degrees"] = r.in_degrees;
  out["loops"] = r.loops;
  out["multi_edges"] = r.multi_edges;
  out["simple"] = r.simple;
  out["rigid"] = r.rigid;
  out["solid"] = r.solid;
  out["self_dual_loops"] = r.self_dual_loops ? Json(*r.self_dual_loops) : Json(nullptr);
  out["cycle_rank_ud"] = r.cycle_rank_ud ? Json(*r.cycle_rank_ud) : Json(nullptr);
  out["rank_formula"] = r.rank_formula ? Json(r.rank_formula->get_str()) : Json(nullptr);
  return out.dump(2) + "\n";
}

std::string synthetic_to_json(const volcano::SyntheticVolcano& v) {
  Json out;
  out["disc"] = integer_json(v.disc);
  out["ell"] = v.ell;
  out["depth"] = v.depth;
  out["kronecker"] = v.kronecker;
  out["rim_type"] = std::string(volcano::rim_type_name(v.rim_type));
  out["rim_size"] = v.rim_size;
  Json sizes = Json::array();
  for (const auto& s : v.level_sizes) sizes.push_back(integer_json(s));
  out["level_sizes"] = std::move(sizes);
  if (v.f_rim) {
    out["rim_generator"] = {{"trace", integer_json(v.f_rim->trace)}, {"norm", integer_json(v.f_rim->norm)}};
  }
  return out.dump(2) + "\n";
}

std::string empirical_to_json(const volcano::EmpiricalVolcano& v) {
  Json out;
  out["p"] = v.p;
  out["ell"] = v.ell;
  out["depth"] = v.depth;
  out["j0"] = v.j0.coeff(0);
  out["trace"] = integer_json(v.trace);
  out["frob_disc"] = integer_json(v.frob_disc);
  out["height"] = v.height;
  out["height_from_trace"] = v.height_from_trace;
  out["rim_disc"] = integer_json(v.rim_disc);
  out["kronecker"] = v.kronecker;
  out["component_size"] = v.component_size;
  out["level_sizes"] = v.level_sizes;
  out["rim_size"] = v.rim_size;
  out["rim_degree"] = v.rim_degree;
  out["rim_degree_uniform"] = v.rim_degree_uniform;
  out["touches_extra_automorphisms"] = v.touches_extra_automorphisms;
  Json verts = Json::array();
  for (std::size_t i = 0; i < v.vertices.size(); ++i) {
    verts.push_back(Json{{"j", v.vertices[i].coeff(0)}, {"level", v.level[i]}, {"distance", v.distance[i]}, {"degree", v.degree[i]}});
  }
  out["vertices"] = std::move(verts);
  Json arrows = Json::array();
  for (const auto& [a, b] : v.arrows) arrows.push_back(Json::array({a, b}));
  out["arrows"] = std::move(arrows);
  return out.dump(2) + "\n";
}

std::string volcano_to_dot(const volcano::VolcanoGraph& g) {
  std::ostringstream os;
  os << "graph volcano {\n";
  for (std::size_t v = 0; v < g.size(); ++v) os << "  v" << v << " [label=\"" << v << "\", level=" << g.level[v] << "];\n";
  for (std::size_t a = 0; a < g.arrows.size(); ++a) {
    const auto& arr = g.arrows[a];
    if (arr.dual < a) continue;
    os << "  v" << arr.src << " -- v" << arr.dst << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string measure_to_json(const discdyn::EmpiricalMeasure& m) {
  Json out;
  out["p"] = m.p;
  out["k"] = m.k;
  out["total"] = m.total;
  out["classes"] = m.classes();
  out["support"] = m.support();
  Json hist = Json::object();
  for (std::size_t c = 0; c < m.counts.size(); ++c) hist[std::to_string(c)] = m.counts[c];
  out["counts"] = std::move(hist);
  Json tv = Json::array();
  for (const auto& c : m.checkpoints) tv.push_back(Json{{"steps", c.steps}, {"tv", c.tv}});
  out["tv_checkpoints"] = std::move(tv);
  return out.dump(2) + "\n";
}

std::string tv_to_csv(const discdyn::EmpiricalMeasure& m) {
  std::string out = "steps,tv\n";
  for (const auto& c : m.checkpoints) out += std::to_string(c.steps) + "," + format_double(c.tv) + "\n";
  return out;
}

std::string distribution_str(const markov::Distribution& d) {
  std::string out = "(";
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) out += ", ";
    out += d[i].get_str();
  }
  return out + ")";
}

std::string mixing_to_json(const markov::MixingReport& r) {
  Json out;
  out["second_eigenvalue_modulus"] = r.second_eigenvalue_modulus;
  out["steps_to_eps"] = r.steps_to_eps;
  out["tv_series"] = r.tv_series;
  Json pi = Json::array();
  for (const auto& x : r.stationary) pi.push_back(x.get_str());
  out["stationary"] = std::move(pi);
  return out.dump(2) + "\n";
}

std::string mixing_to_csv(const markov::MixingReport& r) {
  std::string out = "n,tv\n";
  for (std::size_t n = 0; n < r.tv_series.size(); ++n) out += std::to_string(n) + "," + format_double(r.tv_series[n]) + "\n";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::InvalidArgument, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::InvalidArgument, "cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) raise(Errc::InvalidArgument, "write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    raise(Errc::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

}  // namespace hecke::io
