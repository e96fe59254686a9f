#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hecke/discdyn.hpp"
#include "hecke/markov.hpp"
#include "hecke/ssgraph.hpp"
#include "hecke/volcano.hpp"

namespace hecke::io {

// Graph interchange format: p, ell, N, vertices (id, j, curve, point, aut) and
// arrows (src, dst, kernel, labels, mult). Field elements are coefficient arrays.
std::string ssgraph_to_json(const ssgraph::SSGraph& g);
ssgraph::SSGraph ssgraph_from_json(const std::string& text);
std::string ssgraph_to_dot(const ssgraph::SSGraph& g);

std::string report_to_json(const ssgraph::GraphReport& r);
std::string synthetic_to_json(const volcano::SyntheticVolcano& v);
std::string empirical_to_json(const volcano::EmpiricalVolcano& v);
std::string volcano_to_dot(const volcano::VolcanoGraph& g);

std::string measure_to_json(const discdyn::EmpiricalMeasure& m);
// steps,tv rows with a header.
std::string tv_to_csv(const discdyn::EmpiricalMeasure& m);

// "(a, b, ...)" with exact rationals.
std::string distribution_str(const markov::Distribution& d);
std::string mixing_to_json(const markov::MixingReport& r);
std::string mixing_to_csv(const markov::MixingReport& r);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace hecke::io
