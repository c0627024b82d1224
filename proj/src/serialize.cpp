#include "hilbmap/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hilbmap::io {

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Point& p) {
  if (p.is_infinity()) return {{"inf", true}};
  return {{"z", to_json(p.z())}};
}

Point point_from_json(const json& j) {
  if (j.is_string() && (j == "inf" || j == "infinity")) return Point::infinity();
  if (j.contains("inf") && j["inf"].get<bool>()) return Point::infinity();
  if (j.contains("z")) return Point::at(complex_from_json(j["z"]));
  throw std::invalid_argument("point must be {\"z\": [re, im]} or {\"inf\": true}");
}

json to_json(const SectionPoly& s) {
  json out = json::array();
  for (const cplx& c : s.coeffs()) out.push_back(to_json(c));
  return out;
}

SectionPoly section_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("section must be an array of coefficients");
  std::vector<cplx> c;
  for (const auto& e : j) c.push_back(complex_from_json(e));
  return SectionPoly(std::move(c));
}

json to_json(const SectionFamily& f) {
  json members = json::array();
  for (const auto& s : f.members()) members.push_back(to_json(s));
  return {{"label", f.label()}, {"members", members}};
}

SectionFamily family_from_json(const json& j) {
  const json& members = j.is_array() ? j : j.at("members");
  std::vector<SectionPoly> out;
  for (const auto& s : members) out.push_back(section_from_json(s));
  const std::string label = (j.is_object() && j.contains("label")) ? j["label"].get<std::string>() : "";
  return SectionFamily(std::move(out), label);
}

json to_json(const HermitianForm& h) {
  json rows = json::array();
  for (int a = 0; a < h.dim(); ++a) {
    json row = json::array();
    for (int b = 0; b < h.dim(); ++b) row.push_back(to_json(h(a, b)));
    rows.push_back(row);
  }
  return rows;
}

HermitianForm form_from_json(const json& j) {
  const json& rows = j.is_object() ? j.at("entries") : j;
  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXcd m(n, n);
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(rows[a].size()) != n) throw std::invalid_argument("hermitian form must be square");
    for (int b = 0; b < n; ++b) m(a, b) = complex_from_json(rows[a][b]);
  }
  return HermitianForm(m);
}

json to_json(const MetricPotential& phi) {
  const SphereFunction& f = phi.function();
  json harmonics = json::array();
  for (const auto& h : f.harmonics())
    harmonics.push_back({{"degree", h.degree}, {"order", h.order}, {"cos", h.cos_coef}, {"sin", h.sin_coef}});
  return {{"kind", phi.is_radial() ? "radial" : "general"},
          {"radial_coefficients", f.radial_coefficients()},
          {"harmonics", harmonics}};
}

MetricPotential potential_from_json(const json& j) {
  if (j.contains("constant")) return MetricPotential(SphereFunction::constant(j["constant"].get<double>()));
  SphereFunction f;
  if (j.contains("samples")) {
    f = SphereFunction::from_radial_samples(j["samples"].get<std::vector<double>>());
  } else if (j.contains("radial_coefficients")) {
    f = SphereFunction::from_radial_coefficients(j["radial_coefficients"].get<std::vector<double>>());
  } else {
    f = SphereFunction::constant(0.0);
  }
  if (j.contains("harmonics"))
    for (const auto& h : j["harmonics"])
      f += SphereFunction::harmonic(h.at("degree").get<int>(), h.at("order").get<int>(), h.value("cos", 0.0),
                                    h.value("sin", 0.0));
  return MetricPotential(f);
}

json to_json(const RadialFunction& f) { return {{"samples", f.samples}}; }

RadialFunction radial_function_from_json(const json& j) {
  RadialFunction f;
  f.samples = j.at("samples").get<std::vector<double>>();
  if (f.samples.empty()) throw std::invalid_argument("radial function needs samples");
  return f;
}

json to_json(const HalfSpaceConstraint& c) {
  json out = {{"M", c.bound}, {"maximizer", to_json(c.maximizer)}, {"q_num", to_json(c.q_num)},
              {"q_den", to_json(c.q_den)}};
  if (c.num) out["num"] = to_json(*c.num);
  if (c.den) out["den"] = to_json(*c.den);
  return out;
}

HalfSpaceConstraint constraint_from_json(const json& j) {
  if (!j.contains("q_num") && j.contains("num") && j.contains("den"))
    return make_constraint(family_from_json(j["num"]), family_from_json(j["den"]));
  HalfSpaceConstraint c;
  c.q_num = form_from_json(j.at("q_num"));
  c.q_den = form_from_json(j.at("q_den"));
  c.bound = j.at("M").get<double>();
  if (j.contains("maximizer")) c.maximizer = point_from_json(j["maximizer"]);
  if (j.contains("num")) c.num = family_from_json(j["num"]);
  if (j.contains("den")) c.den = family_from_json(j["den"]);
  return c;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string CsvTable::str() const {
  std::ostringstream s;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) s << (i ? "," : "") << cells[i];
    s << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s.str();
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << table.str();
}

}  // namespace hilbmap::io
