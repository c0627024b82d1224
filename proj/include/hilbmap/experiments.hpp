#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/serialize.hpp"
#include "hilbmap/sphere.hpp"

namespace hilbmap {

inline constexpr const char* kVersion = "0.1.0";

// One experiment's settings. INI layout:
//   [experiment] name, seed, k
//   [grid]       radial, angular        (0 = defaults: 256, 4k + 8)
//   [tolerance]  check, solver
//   [sweep]      t, eps, radii, family (monomial exponents), cases, points, max_iterations
struct ExperimentConfig {
  std::string name;
  int k = 1;
  std::uint64_t seed = 1;
  int radial_nodes = 0;
  int angular_nodes = 0;
  double tol = 1e-7;
  double solver_tol = 1e-10;
  std::vector<double> t_values;
  std::vector<double> eps_values;
  std::vector<double> radii;
  std::vector<int> family;
  int cases = 1;
  int points = 64;
  int max_iterations = 15;

  static ExperimentConfig defaults(const std::string& name);
  // Starts from defaults(name) (name from the file when empty) and applies the file.
  static ExperimentConfig from_ini(const std::filesystem::path& path, const std::string& name = {});
  static ExperimentConfig from_ini_string(const std::string& text, const std::string& name = {});

  void validate() const;
  QuadratureRule rule() const;
  QuadratureRule rule(int k) const;
  nlohmann::json to_json() const;
};

struct CaseRecord {
  std::string id;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json values = nlohmann::json::object();
  bool pass = true;
  bool diagnostic = false;  // recorded but not part of the verdict
};

enum class Verdict { pass, fail, hypothesis_fails };

struct ExperimentReport {
  std::string experiment;
  ExperimentConfig config;
  std::vector<CaseRecord> cases = {};
  bool hypothesis_met = true;
  std::vector<io::CsvTable> tables = {};

  CaseRecord& add(CaseRecord c) { return cases.emplace_back(std::move(c)); }
  Verdict verdict() const;
  int exit_code() const;  // 0 pass, 3 failed case, 4 hypothesis not met
  nlohmann::json to_json() const;
  // report.json plus one CSV per table.
  void write(const std::filesystem::path& dir) const;
};

std::string to_string(Verdict v);

// Seeded radial potential sum_j c_j b_{j,5}(x) in the degree-5 Bernstein basis,
// c_j uniform in [-amplitude, amplitude], rejected until MA >= 0.1 on a fine grid.
MetricPotential random_radial_potential(const PolarizedModel& model, std::mt19937_64& rng, double amplitude = 0.5);

ExperimentReport run_convexity(const ExperimentConfig& config);
// Throws std::invalid_argument when the family is not minimal generating.
ExperimentReport run_delta_limit(const ExperimentConfig& config);
ExperimentReport run_nonsurjectivity(const ExperimentConfig& config);
ExperimentReport run_cone_closure(const ExperimentConfig& config);
ExperimentReport run_openness(const ExperimentConfig& config);

// Dispatch by name: convexity, delta-limit, nonsurjectivity, cone-closure, openness.
ExperimentReport run_experiment(const ExperimentConfig& config);
const std::vector<std::string>& experiment_names();

}  // namespace hilbmap
