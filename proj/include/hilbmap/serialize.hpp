#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "hilbmap/constraints.hpp"
#include "hilbmap/hermitian.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/monge_ampere.hpp"
#include "hilbmap/sphere.hpp"

// JSON interchange. Complex numbers are [re, im] pairs; points are
// {"z": [re, im]} or {"inf": true}; hermitian forms are row-major arrays of
// rows of [re, im]; sections are arrays of coefficients (z^a at index a).
namespace hilbmap::io {

using nlohmann::json;

json to_json(cplx c);
cplx complex_from_json(const json& j);

json to_json(const Point& p);
Point point_from_json(const json& j);

json to_json(const SectionPoly& s);
SectionPoly section_from_json(const json& j);

// {"label": ..., "members": [...]}; a bare array of sections is also accepted.
json to_json(const SectionFamily& f);
SectionFamily family_from_json(const json& j);

json to_json(const HermitianForm& h);
HermitianForm form_from_json(const json& j);

// {"radial_coefficients": [...], "harmonics": [{degree, order, cos, sin}]}.
// Reading also accepts {"samples": [...]} (values at the Gauss–Legendre nodes
// of that size) and {"constant": c}.
json to_json(const MetricPotential& phi);
MetricPotential potential_from_json(const json& j);

// {"samples": [...]} at Gauss–Legendre nodes.
json to_json(const RadialFunction& f);
RadialFunction radial_function_from_json(const json& j);

json to_json(const HalfSpaceConstraint& c);
HalfSpaceConstraint constraint_from_json(const json& j);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

// Plain CSV, numbers printed with 17 significant digits.
struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string str() const;
};

std::string num(double v);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

}  // namespace hilbmap::io
