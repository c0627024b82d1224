#include "hilbmap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hilbmap/constraints.hpp"
#include "hilbmap/errors.hpp"
#include "hilbmap/evaluation_cone.hpp"
#include "hilbmap/linearization.hpp"
#include "hilbmap/monge_ampere.hpp"
#include "hilbmap/nnls.hpp"

namespace hilbmap {

using nlohmann::json;

namespace {

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    std::istringstream cell(item.substr(b, e - b + 1));
    T v{};
    if (!(cell >> v) || !cell.eof()) throw std::invalid_argument("bad list entry '" + item + "'");
    out.push_back(v);
  }
  return out;
}

ExperimentConfig from_tree(const boost::property_tree::ptree& tree, const std::string& name) {
  static const std::set<std::string> known = {
      "experiment.name", "experiment.seed", "experiment.k",    "grid.radial",         "grid.angular",
      "tolerance.check", "tolerance.solver", "sweep.t",        "sweep.eps",           "sweep.radii",
      "sweep.family",    "sweep.cases",     "sweep.points",    "sweep.max_iterations"};
  for (const auto& [section, body] : tree)
    for (const auto& [key, value] : body)
      if (!known.count(section + "." + key)) throw std::invalid_argument("unknown config key " + section + "." + key);

  const std::string file_name = tree.get<std::string>("experiment.name", "");
  if (!name.empty() && !file_name.empty() && name != file_name)
    throw std::invalid_argument("config is for experiment '" + file_name + "', not '" + name + "'");
  const std::string chosen = name.empty() ? file_name : name;
  if (chosen.empty()) throw std::invalid_argument("config does not name an experiment");

  ExperimentConfig c = ExperimentConfig::defaults(chosen);
  c.seed = tree.get("experiment.seed", c.seed);
  c.k = tree.get("experiment.k", c.k);
  c.radial_nodes = tree.get("grid.radial", c.radial_nodes);
  c.angular_nodes = tree.get("grid.angular", c.angular_nodes);
  c.tol = tree.get("tolerance.check", c.tol);
  c.solver_tol = tree.get("tolerance.solver", c.solver_tol);
  if (auto v = tree.get_optional<std::string>("sweep.t")) c.t_values = parse_list<double>(*v);
  if (auto v = tree.get_optional<std::string>("sweep.eps")) c.eps_values = parse_list<double>(*v);
  if (auto v = tree.get_optional<std::string>("sweep.radii")) c.radii = parse_list<double>(*v);
  if (auto v = tree.get_optional<std::string>("sweep.family")) c.family = parse_list<int>(*v);
  c.cases = tree.get("sweep.cases", c.cases);
  c.points = tree.get("sweep.points", c.points);
  c.max_iterations = tree.get("sweep.max_iterations", c.max_iterations);
  c.validate();
  return c;
}

SectionFamily monomial_family(int k, const std::vector<int>& exponents) {
  std::vector<SectionPoly> members;
  for (int a : exponents) {
    if (a < 0 || a > k) throw std::invalid_argument("family exponent " + std::to_string(a) + " outside [0, k]");
    members.push_back(SectionPoly::monomial(k, a));
  }
  return SectionFamily(std::move(members));
}

json form_json(const HermitianForm& h) { return io::to_json(h); }

HermitianForm random_hermitian(int dim, double frobenius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd e(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) e(a, b) = {normal(rng), normal(rng)};
  HermitianForm h(e);
  h *= frobenius / h.frobenius();
  return h;
}

json potential_json(const MetricPotential& phi) { return io::to_json(phi); }

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::defaults(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "convexity") {
    c.tol = 1e-7;
    c.t_values = {0.0, 0.25, 0.5, 0.75, 1.0};
    c.cases = 3;
  } else if (name == "delta-limit") {
    c.tol = 0.02;
    c.solver_tol = 1e-8;
    c.eps_values = {0.2, 0.1, 0.05, 0.025};
    c.family = {0, 1};
  } else if (name == "nonsurjectivity") {
    c.k = 2;
    c.tol = 1e-9;
    c.cases = 20;
  } else if (name == "cone-closure") {
    c.k = 2;
    c.tol = 1e-8;
    c.cases = 10;
    c.points = 64;
  } else if (name == "openness") {
    c.tol = 1e-8;
    c.cases = 16;
    c.radii = {0.05};
  } else {
    throw std::invalid_argument("unknown experiment '" + name + "'");
  }
  return c;
}

ExperimentConfig ExperimentConfig::from_ini(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  boost::property_tree::ptree tree;
  boost::property_tree::read_ini(in, tree);
  return from_tree(tree, name);
}

ExperimentConfig ExperimentConfig::from_ini_string(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  boost::property_tree::ptree tree;
  boost::property_tree::read_ini(in, tree);
  return from_tree(tree, name);
}

void ExperimentConfig::validate() const {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(tol > 0.0) || !(solver_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (radial_nodes < 0 || angular_nodes < 0) throw std::invalid_argument("grid sizes must be nonnegative");
  if (cases < 0 || points < 1 || max_iterations < 1) throw std::invalid_argument("counts must be positive");
  for (double t : t_values)
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("t values must lie in [0, 1]");
  for (double e : eps_values)
    if (!(e > 0.0 && e <= 0.5)) throw std::invalid_argument("eps values must lie in (0, 1/2]");
  for (double r : radii)
    if (!(r > 0.0)) throw std::invalid_argument("radii must be positive");
}

QuadratureRule ExperimentConfig::rule() const { return rule(k); }

QuadratureRule ExperimentConfig::rule(int degree) const {
  return {radial_nodes > 0 ? radial_nodes : 256, angular_nodes > 0 ? angular_nodes : 4 * degree + 8};
}

json ExperimentConfig::to_json() const {
  return {{"name", name},
          {"k", k},
          {"seed", seed},
          {"grid", {{"radial", rule().radial_count()}, {"angular", rule().angular_count()}}},
          {"tolerance", {{"check", tol}, {"solver", solver_tol}}},
          {"sweep",
           {{"t", t_values},
            {"eps", eps_values},
            {"radii", radii},
            {"family", family},
            {"cases", cases},
            {"points", points},
            {"max_iterations", max_iterations}}}};
}

// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::hypothesis_fails: return "hypothesis_fails";
  }
  return "?";
}

Verdict ExperimentReport::verdict() const {
  if (!hypothesis_met) return Verdict::hypothesis_fails;
  for (const auto& c : cases)
    if (!c.diagnostic && !c.pass) return Verdict::fail;
  return Verdict::pass;
}

int ExperimentReport::exit_code() const {
  switch (verdict()) {
    case Verdict::pass: return 0;
    case Verdict::fail: return 3;
    case Verdict::hypothesis_fails: return 4;
  }
  return 3;
}

json ExperimentReport::to_json() const {
  json list = json::array();
  int passed = 0, failed = 0, diagnostics = 0;
  for (const auto& c : cases) {
    list.push_back({{"id", c.id}, {"inputs", c.inputs}, {"values", c.values}, {"pass", c.pass},
                    {"diagnostic", c.diagnostic}});
    if (c.diagnostic) ++diagnostics;
    else if (c.pass) ++passed;
    else ++failed;
  }
  json tables_json = json::array();
  for (const auto& t : tables) tables_json.push_back(t.name + ".csv");
  return {{"experiment", experiment},
          {"version", kVersion},
          {"config", config.to_json()},
          {"defaults",
           {{"quadrature", {{"radial", 256}, {"angular", "4k+8"}, {"refine_rel_tol", 1e-10}}},
            {"monge_ampere", {{"tol", 1e-10}, {"max_iterations", 200}, {"stagnation_limit", 10}}},
            {"membership_rel_tol", 1e-9},
            {"nnls_dual_tol", 1e-12},
            {"ratio_scan", {{"x", 128}, {"theta", 64}}},
            {"gauss_newton", {{"tikhonov", 1e-12}, {"line_search", "halving"}}},
            {"random_potential", {{"basis", "bernstein-5"}, {"amplitude", 0.5}, {"min_ma", 0.1}}}}},
          {"cases", list},
          {"tables", tables_json},
          {"summary",
           {{"passed", passed},
            {"failed", failed},
            {"diagnostics", diagnostics},
            {"hypothesis_met", hypothesis_met},
            {"verdict", to_string(verdict())}}}};
}

void ExperimentReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  io::write_json(dir / "report.json", to_json());
  for (const auto& t : tables) io::write_csv(dir / (t.name + ".csv"), t);
}

// ---------------------------------------------------------------------------

MetricPotential random_radial_potential(const PolarizedModel& model, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  static const double binom[6] = {1, 5, 10, 10, 5, 1};
  std::vector<double> probe = gauss_legendre_unit(256).nodes;
  probe.push_back(0.0);
  probe.push_back(1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    double c[6];
    for (double& v : c) v = coef(rng);
    const SphereFunction f = SphereFunction::from_radial(
        [&](double x) {
          double s = 0.0;
          for (int j = 0; j <= 5; ++j) s += c[j] * binom[j] * std::pow(x, j) * std::pow(1.0 - x, 5 - j);
          return s;
        },
        8);
    const RadialSamples s = f.radial_on(probe);
    const double min_ma = 1.0 + *std::min_element(s.op.begin(), s.op.end()) / model.k;
    if (min_ma >= 0.1) return MetricPotential(f);
  }
  throw std::runtime_error("no admissible random potential in 1000 draws");
}

ExperimentReport run_convexity(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report{"convexity", config};
  const PolarizedModel model(config.k);
  const QuadratureRule rule = config.rule();
  const int n = rule.radial_count();
  std::mt19937_64 rng(config.seed);
  io::CsvTable table{"convexity", {"pair", "t", "max_entry_error", "ma_residual", "iterations"}, {}};

  for (int pair = 0; pair < config.cases; ++pair) {
    const MetricPotential phi0 = pair == 0 ? MetricPotential::zero() : random_radial_potential(model, rng);
    const MetricPotential phi1 = random_radial_potential(model, rng);
    const HermitianForm h0 = hilb(phi0, model, rule);
    const HermitianForm h1 = hilb(phi1, model, rule);
    for (double t : config.t_values) {
      CaseRecord rec;
      rec.id = "pair" + std::to_string(pair) + "/t=" + io::num(t);
      rec.inputs = {{"phi0", potential_json(phi0)}, {"phi1", potential_json(phi1)}, {"t", t}};
      MaOptions options;
      options.tol = config.solver_tol;
      try {
        const MaSolution sol = solve_ma(convex_combination_f(phi0, phi1, t, model, n), model, options);
        const HermitianForm expected = t * h1 + (1.0 - t) * h0;
        const double err = max_entry_diff(hilb(sol.phi, model, rule), expected);
        rec.values = {{"max_entry_error", err}, {"ma_residual", sol.residual}, {"iterations", sol.iterations}};
        rec.pass = err <= config.tol;
        table.add({std::to_string(pair), io::num(t), io::num(err), io::num(sol.residual),
                   std::to_string(sol.iterations)});
      } catch (const SolverFailure& e) {
        rec.values = {{"error", std::string("pair ") + std::to_string(pair) + ", t = " + io::num(t) + ": " + e.what()},
                      {"history", e.history}};
        rec.pass = false;
        table.add({std::to_string(pair), io::num(t), "nan", "nan", "nan"});
      }
      report.add(std::move(rec));
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport run_delta_limit(const ExperimentConfig& config) {
  config.validate();
  const PolarizedModel model(config.k);
  const SectionFamily family = monomial_family(config.k, config.family);
  if (!family.is_independent()) throw std::invalid_argument("delta limit: family is linearly dependent");
  const MinimalityReport minimal = is_minimal_generating(family);
  if (!minimal.minimal) throw std::invalid_argument("delta limit needs a minimal generating family: " + minimal.reason);

  ExperimentReport report{"delta-limit", config};
  io::CsvTable table{"delta_limit", {"target", "eps", "grid", "diag", "a", "off_target", "ma_residual"}, {}};
  const int d = family.size();
  const Point poles[2] = {Point::at(0.0), Point::infinity()};

  for (int i = 0; i < d; ++i) {
    // A pole where member i alone survives.
    const Point* target = nullptr;
    for (const Point& p : poles) {
      bool ok = family[i].order_at(p) == 0;
      for (int j = 0; j < d && ok; ++j)
        if (j != i && family[j].order_at(p) == 0) ok = false;
      if (ok) target = &p;
    }
    CaseRecord summary;
    summary.id = "member" + std::to_string(i);
    if (!target) {
      summary.pass = false;
      summary.values = {{"error", "no pole at which only this member is nonzero; radial bumps live at 0 and infinity"}};
      report.add(std::move(summary));
      continue;
    }
    const double a =
        point_gram(MetricPotential::zero(), model, *target).transported(family.coefficient_matrix())(i, i).real();
    std::vector<double> offs, diags;
    bool solved = true;
    for (double eps : config.eps_values) {
      const int n = std::max(bump_grid_size(eps), config.radial_nodes);
      const BumpDensity bump = bump_density(model, *target, eps, n);
      MaOptions options;
      options.tol = config.solver_tol;
      CaseRecord rec;
      rec.id = "member" + std::to_string(i) + "/eps=" + io::num(eps);
      rec.inputs = {{"point", io::to_json(*target)}, {"eps", eps}, {"grid", n}};
      try {
        const MaSolution sol = solve_ma(bump.log_density, model, options);
        const QuadratureRule rule(n, config.rule().angular_count());
        const HermitianForm g = hilb(sol.phi, model, rule, &family);
        double off = 0.0;
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c)
            if (r != i || c != i) off = std::max(off, std::abs(g(r, c)));
        const double diag = g(i, i).real();
        offs.push_back(off);
        diags.push_back(diag);
        rec.values = {{"diag", diag}, {"a", a}, {"off_target", off}, {"mass", bump.mass},
                      {"concentration", bump.concentration}, {"ma_residual", sol.residual}, {"gram", form_json(g)}};
        rec.pass = bump.concentration >= 1.0 - eps && std::abs(bump.mass - 1.0) <= 1e-10;
        table.add({std::to_string(i), io::num(eps), std::to_string(n), io::num(diag), io::num(a), io::num(off),
                   io::num(sol.residual)});
      } catch (const SolverFailure& e) {
        rec.values = {{"error", e.what()}, {"history", e.history}};
        rec.pass = false;
        solved = false;
      }
      report.add(std::move(rec));
    }
    bool monotone = true;
    for (std::size_t j = 1; j < offs.size(); ++j) monotone = monotone && offs[j] <= offs[j - 1] + 1e-12;
    const double final_eps = config.eps_values.empty() ? 0.0 : config.eps_values.back();
    const double final_off = offs.empty() ? std::numeric_limits<double>::quiet_NaN() : offs.back();
    const double rel = diags.empty() ? std::numeric_limits<double>::quiet_NaN() : std::abs(diags.back() - a) / a;
    summary.inputs = {{"point", io::to_json(*target)}, {"a", a}};
    summary.values = {{"off_target_monotone", monotone}, {"final_off_target", final_off},
                      {"final_diag_rel_error", rel}};
    summary.pass = solved && monotone && rel <= config.tol && final_off <= final_eps;
    report.add(std::move(summary));
  }
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport run_nonsurjectivity(const ExperimentConfig& config) {
  config.validate();
  if (config.k != 2) throw std::invalid_argument("the non-surjectivity witness is built for k = 2");
  ExperimentReport report{"nonsurjectivity", config};
  const PolarizedModel model(2);
  const QuadratureRule rule = config.rule();
  const SectionFamily num({SectionPoly::monomial(2, 1)}, "{z}");
  const SectionFamily den({SectionPoly::monomial(2, 0), SectionPoly::monomial(2, 2)}, "{1, z^2}");
  const HalfSpaceConstraint c = make_constraint(num, den);
  io::CsvTable table{"nonsurjectivity", {"case", "lhs", "rhs", "margin", "verdict"}, {}};
  auto classify = [&](const std::string& id, const HermitianForm& h, Membership expected, json inputs) {
    const MembershipResult r = check_membership(h, c, config.tol);
    CaseRecord rec{id, std::move(inputs),
                   {{"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}, {"verdict", to_string(r.verdict)},
                    {"expected", to_string(expected)}},
                   r.verdict == expected};
    table.add({id, io::num(r.lhs), io::num(r.rhs), io::num(r.margin), to_string(r.verdict)});
    report.add(std::move(rec));
  };

  report.add({"bound",
              {{"num", io::to_json(num)}, {"den", io::to_json(den)}},
              {{"M", c.bound}, {"maximizer", io::to_json(c.maximizer)}, {"expected", 0.5}},
              std::abs(c.bound - 0.5) <= config.tol});
  classify("identity", HermitianForm::identity(3), Membership::boundary, json::object());
  Eigen::MatrixXcd bumped = Eigen::MatrixXcd::Identity(3, 3);
  bumped(1, 1) += 0.1;
  const HermitianForm outside(bumped);
  classify("identity+0.1E22", outside, Membership::outside, json::object());

  std::mt19937_64 rng(config.seed);
  for (int i = 0; i < config.cases; ++i) {
    const MetricPotential phi = random_radial_potential(model, rng);
    classify("metric" + std::to_string(i), hilb(phi, model, rule), Membership::strict_inside,
             {{"phi", potential_json(phi)}});
  }

  // Corroboration only: Gauss–Newton cannot reach a target outside the half-space.
  CaseRecord diag{"invert-outside", {{"target", form_json(outside)}}, json::object(), true, true};
  InversionOptions options;
  options.max_iterations = config.max_iterations;
  options.tol = 1e-8;
  try {
    const Inversion inv =
        invert_hilbert(outside, SectionFamily::monomials(2), MetricPotential::zero(), model, rule, options);
    diag.values = {{"status", "converged"}, {"residual", inv.residual}, {"history", inv.residual_history}};
  } catch (const SolverFailure& e) {
    const double best = e.history.empty() ? 0.0 : *std::min_element(e.history.begin(), e.history.end());
    diag.values = {{"status", "stalled"}, {"reason", e.what()}, {"best_residual", best}, {"history", e.history}};
  } catch (const NotAdmissible& e) {
    diag.values = {{"status", "not admissible"}, {"reason", e.what()}};
  }
  report.add(std::move(diag));
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport run_cone_closure(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report{"cone-closure", config};
  std::mt19937_64 rng(config.seed);
  io::CsvTable table{"cone_closure", {"case", "k", "residual", "recomputed", "support"}, {}};
  auto support = [](const ConeFit& f) {
    return static_cast<int>(std::count_if(f.weights.begin(), f.weights.end(), [](double w) { return w > 0.0; }));
  };

  // Forward direction: Gram matrices of metrics lie in the cone.
  for (int i = 0; i < config.cases; ++i) {
    const PolarizedModel model(1 + i % 3);
    const MetricPotential phi = random_radial_potential(model, rng);
    const HermitianForm g = hilb(phi, model, config.rule(model.k));
    const auto points = default_cone_points(model);
    const ConeFit fit = cone_fit(g, points, MetricPotential::zero(), model);
    const double again = recompute_residual(fit, g, model);
    const std::string id = "forward" + std::to_string(i);
    report.add({id,
                {{"k", model.k}, {"phi", potential_json(phi)}, {"points", "default"}},
                {{"residual", fit.residual}, {"recomputed", again}, {"support", support(fit)}},
                fit.residual <= config.tol && std::abs(again - fit.residual) <= 1e-12});
    table.add({id, std::to_string(model.k), io::num(fit.residual), io::num(again), std::to_string(support(fit))});
  }

  // Boundary: the identity is a circle measure, yet sits on a constraint boundary.
  const PolarizedModel model(config.k);
  const auto circle = circle_points(config.points);
  const HermitianForm identity = HermitianForm::identity(model.m());
  {
    const ConeFit fit = cone_fit(identity, circle, MetricPotential::zero(), model);
    CaseRecord rec{"identity-circle", {{"k", model.k}, {"points", config.points}},
                   {{"residual", fit.residual}, {"support", support(fit)}}, fit.residual <= config.tol};
    if (model.k == 2) {
      const HalfSpaceConstraint c = make_constraint(SectionFamily({SectionPoly::monomial(2, 1)}),
                                                    SectionFamily({SectionPoly::monomial(2, 0), SectionPoly::monomial(2, 2)}));
      const MembershipResult m = check_membership(identity, c);
      rec.values["constraint_verdict"] = to_string(m.verdict);
      rec.pass = rec.pass && m.verdict == Membership::boundary;
    }
    table.add({rec.id, std::to_string(model.k), io::num(fit.residual), io::num(recompute_residual(fit, identity, model)),
               std::to_string(support(fit))});
    report.add(std::move(rec));
  }

  // Independence of the reference metric.
  const double h_tol = 1e-7;
  auto h_case = [&](const std::string& id, const HermitianForm& g, const MetricPotential& first,
                    const MetricPotential& second) {
    const HIndependenceReport r = h_independence_check(g, circle, first, second, model, h_tol);
    const bool weights_ok = r.common_support == 0 || r.weight_transform_error <= 1e-6;
    const bool both_in = r.under_first.residual <= h_tol && r.under_second.residual <= h_tol;
    report.add({id,
                {{"first", potential_json(first)}, {"second", potential_json(second)}, {"tol", h_tol}},
                {{"residual_first", r.under_first.residual},
                 {"residual_second", r.under_second.residual},
                 {"classification_agrees", r.classification_agrees},
                 {"weight_transform_error", r.weight_transform_error},
                 {"common_support", r.common_support}},
                r.classification_agrees && weights_ok && both_in});
  };
  const MetricPotential ref = random_radial_potential(model, rng);
  h_case("h-rank1", point_gram(MetricPotential::zero(), model, circle[3]), MetricPotential::zero(), ref);
  for (int i = 0; i < 2; ++i) {
    const MetricPotential first = random_radial_potential(model, rng);
    const MetricPotential second = random_radial_potential(model, rng);
    h_case("h-identity" + std::to_string(i), identity, first, second);
  }
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport run_openness(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report{"openness", config};
  const PolarizedModel model(config.k);
  const QuadratureRule rule = config.rule();
  const MetricPotential phi0 = MetricPotential::zero();
  const int m = model.m();

  // Rows U = H0^{-1/2}, so that hilb(phi0) over the rescaled basis is I.
  const HermitianForm h0 = hilb(phi0, model, rule);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h0.entries());
  const Eigen::MatrixXcd u =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
  const SectionFamily family = SectionFamily::from_matrix(u, "hilb(phi0)^{-1/2}");
  const double normalization = (hilb(phi0, model, rule, &family) - HermitianForm::identity(m)).frobenius();

  const Spectrum spectrum = laplacian_spectrum(phi0, model, 2 * model.k + 4, 2 * model.k);
  report.hypothesis_met = spectrum.distance_to_one > 1e-8;
  json low = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(6, spectrum.entries.size()); ++i)
    low.push_back({{"mode", spectrum.entries[i].mode}, {"eigenvalue", spectrum.entries[i].eigenvalue}});
  report.add({"spectral-margin", {{"phi0", potential_json(phi0)}},
              {{"distance_to_one", spectrum.distance_to_one}, {"lowest", low},
               {"refinement_shift", spectrum.refinement_shift}},
              report.hypothesis_met});
  report.add({"normalization", json::object(), {{"hilb_minus_identity", normalization}}, normalization <= 1e-12});

  const FunctionBasis basis = FunctionBasis::defaults(model);
  const TangentRank rank = tangent_rank(phi0, basis, model, rule, &family);
  report.add({"tangent-rank", {{"basis_size", basis.size()}},
              {{"rank", rank.rank}, {"expected", m * m}, {"singular_values", rank.singular_values}},
              rank.rank == m * m});

  io::CsvTable table{"openness", {"radius", "case", "iterations", "residual", "status"}, {}};
  std::mt19937_64 rng(config.seed);
  double largest = 0.0;
  InversionOptions options;
  options.max_iterations = config.max_iterations;
  options.tol = config.tol;
  options.basis = basis;
  for (double r : config.radii) {
    bool all = true;
    for (int i = 0; i < config.cases; ++i) {
      const HermitianForm target = HermitianForm::identity(m) + random_hermitian(m, r, rng);
      CaseRecord rec;
      rec.id = "r=" + io::num(r) + "/" + std::to_string(i);
      rec.inputs = {{"radius", r}, {"target", form_json(target)}};
      if (!target.is_positive_definite()) {
        rec.diagnostic = true;
        rec.values = {{"status", "invalid target (not positive definite)"}};
        table.add({io::num(r), std::to_string(i), "0", "nan", "invalid"});
        report.add(std::move(rec));
        all = false;
        continue;
      }
      try {
        const Inversion inv = invert_hilbert(target, family, phi0, model, rule, options);
        const double round_trip = (hilb(inv.phi, model, rule, &family) - target).frobenius();
        rec.values = {{"status", "converged"}, {"iterations", inv.iterations}, {"residual", inv.residual},
                      {"round_trip", round_trip}, {"history", inv.residual_history}};
        rec.pass = inv.residual <= config.tol && round_trip <= config.tol;
        table.add({io::num(r), std::to_string(i), std::to_string(inv.iterations), io::num(inv.residual), "converged"});
      } catch (const SolverFailure& e) {
        rec.values = {{"status", "failed"}, {"reason", e.what()}, {"history", e.history}};
        rec.pass = false;
        table.add({io::num(r), std::to_string(i), std::to_string(e.history.size() - 1),
                   io::num(e.history.empty() ? 0.0 : e.history.back()), "failed"});
      }
      all = all && rec.pass;
      report.add(std::move(rec));
    }
    if (all) largest = std::max(largest, r);
  }
  report.add({"radius-sweep", {{"radii", config.radii}}, {{"largest_full_success_radius", largest}}, true, true});
  report.tables.push_back(std::move(table));
  return report;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"convexity", "delta-limit", "nonsurjectivity", "cone-closure",
                                                 "openness"};
  return names;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.name == "convexity") return run_convexity(config);
  if (config.name == "delta-limit") return run_delta_limit(config);
  if (config.name == "nonsurjectivity") return run_nonsurjectivity(config);
  if (config.name == "cone-closure") return run_cone_closure(config);
  if (config.name == "openness") return run_openness(config);
  throw std::invalid_argument("unknown experiment '" + config.name + "'");
}

}  // namespace hilbmap
