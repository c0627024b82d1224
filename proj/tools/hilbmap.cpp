// hilbmap: command-line front end for the Hilbert-map laboratory.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hilbmap/constraints.hpp"
#include "hilbmap/errors.hpp"
#include "hilbmap/evaluation_cone.hpp"
#include "hilbmap/experiments.hpp"
#include "hilbmap/hilbert_map.hpp"
#include "hilbmap/kernels.hpp"
#include "hilbmap/linearization.hpp"
#include "hilbmap/monge_ampere.hpp"
#include "hilbmap/serialize.hpp"

namespace fs = std::filesystem;
using namespace hilbmap;
using nlohmann::json;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitFailed = 3;

MetricPotential load_potential(const std::string& path) {
  return path.empty() ? MetricPotential::zero() : io::potential_from_json(io::read_json(path));
}

// Writes name under dir, or prints to stdout when no directory was given.
void emit(const std::string& dir, const std::string& name, const json& j) {
  if (dir.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  io::write_json(fs::path(dir) / name, j);
}

void emit_csv(const std::string& dir, const io::CsvTable& t) {
  if (dir.empty()) {
    std::cout << t.str();
    return;
  }
  io::write_csv(fs::path(dir) / (t.name + ".csv"), t);
}

io::CsvTable history_table(const std::vector<double>& history) {
  io::CsvTable t{"residual_history", {"iteration", "residual"}, {}};
  for (std::size_t i = 0; i < history.size(); ++i) t.add({std::to_string(i), io::num(history[i])});
  return t;
}

QuadratureRule make_rule(int k, int radial, int angular) {
  return {radial > 0 ? radial : 256, angular > 0 ? angular : 4 * k + 8};
}

std::vector<Point> parse_points(const std::string& spec, const PolarizedModel& model) {
  if (spec == "default") return default_cone_points(model);
  if (spec.rfind("circle:", 0) == 0) {
    const std::string rest = spec.substr(7);
    const auto colon = rest.find(':');
    const int count = std::stoi(rest.substr(0, colon));
    const double radius = colon == std::string::npos ? 1.0 : std::stod(rest.substr(colon + 1));
    return circle_points(count, radius);
  }
  json j = io::read_json(spec);
  std::vector<Point> out;
  for (const auto& p : j) out.push_back(io::point_from_json(p));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert map laboratory on CP^1 with O(k)"};
  app.require_subcommand(1);
  std::string simd;
  app.add_option("--simd", simd, "Force a kernel variant (scalar, avx2)");

  int k = 1, radial = 0, angular = 0;
  std::string out, phi_path, family_path;

  // gram
  auto* gram = app.add_subcommand("gram", "Gram matrix of sections under h_FS e^{-phi}");
  int doublings = 4;
  double refine_tol = 1e-10;
  gram->add_option("--phi", phi_path, "Potential JSON (default: 0)");
  gram->add_option("--family", family_path, "Section family JSON (default: monomials)");
  gram->add_option("--k", k, "Degree of O(k)")->check(CLI::PositiveNumber);
  gram->add_option("--radial", radial, "Radial nodes (default 256)");
  gram->add_option("--angular", angular, "Angular nodes (default 4k+8)");
  gram->add_option("--max-doublings", doublings, "Refinement cap");
  gram->add_option("--refine-tol", refine_tol, "Relative change that stops refinement");
  gram->add_option("--out", out, "Output directory");

  // ma-solve
  auto* ma = app.add_subcommand("ma-solve", "Solve log MA(phi) - phi = f for radial phi");
  std::string f_path, phi0_path, phi1_path, bump;
  double t = 0.5, tol = 1e-10;
  int nodes = 0;
  auto* f_opt = ma->add_option("--f", f_path, "Right-hand side JSON {\"samples\": [...]}");
  auto* t_opt = ma->add_option("--t", t, "Convex combination parameter (with --phi0, --phi1)");
  ma->add_option("--phi0", phi0_path);
  ma->add_option("--phi1", phi1_path);
  auto* bump_opt = ma->add_option("--bump", bump, "Bump right-hand side 'p,eps' with p = 0 or inf");
  f_opt->excludes(t_opt)->excludes(bump_opt);
  t_opt->excludes(bump_opt);
  ma->add_option("--k", k)->check(CLI::PositiveNumber);
  ma->add_option("--tol", tol);
  ma->add_option("--nodes", nodes, "Radial nodes (default 256, or enough to resolve the bump)");
  ma->add_option("--out", out);

  // constraint
  auto* con = app.add_subcommand("constraint", "Half-space constraints");
  con->require_subcommand(1);
  std::string num_path, den_path, h_path, constraint_path;
  double rel_tol = 1e-9;
  int count = 10;
  std::uint64_t seed = 1;
  auto* bound = con->add_subcommand("bound", "sup of the ratio and its maximizer");
  bound->add_option("--num", num_path)->required();
  bound->add_option("--den", den_path)->required();
  bound->add_option("--out", out);
  auto* check = con->add_subcommand("check", "Classify a hermitian form against a constraint");
  check->add_option("--form", h_path, "Hermitian form JSON")->required();
  check->add_option("--constraint", constraint_path)->required();
  check->add_option("--rel-tol", rel_tol);
  check->add_option("--out", out);
  auto* sample = con->add_subcommand("sample-acal", "Seeded sample of reduced constraints");
  sample->add_option("--k", k)->check(CLI::PositiveNumber);
  sample->add_option("--count", count);
  sample->add_option("--seed", seed);
  sample->add_option("--out", out);

  // cone-fit
  auto* cone = app.add_subcommand("cone-fit", "Nonnegative fit by point-evaluation Grams");
  std::string target_path, from_phi, points_spec = "default", reference_path;
  auto* target_opt = cone->add_option("--target", target_path, "Hermitian form JSON");
  auto* from_opt = cone->add_option("--from-phi", from_phi, "Fit hilb(phi) for this potential");
  target_opt->excludes(from_opt);
  cone->add_option("--points", points_spec, "default | circle:N[:r] | points JSON");
  cone->add_option("--reference", reference_path, "Reference potential (default 0)");
  cone->add_option("--k", k)->check(CLI::PositiveNumber);
  cone->add_option("--out", out);

  // tangent-rank
  auto* rank = app.add_subcommand("tangent-rank", "Rank of the tangent map on a function basis");
  int basis_size = 0;
  rank->add_option("--phi", phi_path);
  rank->add_option("--k", k)->check(CLI::PositiveNumber);
  rank->add_option("--basis-size", basis_size, "Truncate the harmonic basis (default: full default basis)");
  rank->add_option("--out", out);

  // spectrum
  auto* spec = app.add_subcommand("spectrum", "Spectrum of the Laplacian of omega_phi");
  int l_max = 8, mu_max = -1;
  spec->add_option("--phi", phi_path);
  spec->add_option("--k", k)->check(CLI::PositiveNumber);
  spec->add_option("--lmax", l_max);
  spec->add_option("--mumax", mu_max, "Largest Fourier order (default 2k)");
  spec->add_option("--out", out);

  // invert
  auto* inv = app.add_subcommand("invert", "Gauss–Newton inversion of the Hilbert map");
  int max_iter = 30;
  double inv_tol = 1e-8;
  inv->add_option("--target", target_path)->required();
  inv->add_option("--family", family_path);
  inv->add_option("--phi0", phi0_path);
  inv->add_option("--k", k)->check(CLI::PositiveNumber);
  inv->add_option("--max-iter", max_iter);
  inv->add_option("--tol", inv_tol);
  inv->add_option("--out", out);

  // experiments
  std::string config_path;
  std::vector<CLI::App*> experiments;
  for (const auto& name : experiment_names()) {
    auto* e = app.add_subcommand(name, "Run the " + name + " experiment");
    e->add_option("--config", config_path, "INI config (default: built-in)");
    e->add_option("--out", out, "Report directory")->required();
    experiments.push_back(e);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (simd == "scalar") simd::force(simd::Isa::scalar);
    else if (simd == "avx2") simd::force(simd::Isa::avx2);
    else if (!simd.empty()) throw std::invalid_argument("unknown kernel variant " + simd);

    if (gram->parsed()) {
      const PolarizedModel model(k);
      const MetricPotential phi = load_potential(phi_path);
      std::optional<SectionFamily> family;
      if (!family_path.empty()) family = io::family_from_json(io::read_json(family_path));
      const QuadratureRule rule = make_rule(k, radial, angular);
      const RefinedGram g = hilb_refined(phi, model, rule, family ? &*family : nullptr, refine_tol, doublings);
      io::CsvTable table{"convergence", {"N_x", "N_theta", "max_entry_delta"}, {}};
      for (const auto& row : g.history)
        table.add({std::to_string(row.radial_count), std::to_string(row.angular_count), io::num(row.max_entry_delta)});
      emit(out, "gram.json", {{"gram", io::to_json(g.gram)}, {"k", k}});
      emit_csv(out, table);
      return 0;
    }

    if (ma->parsed()) {
      const PolarizedModel model(k);
      RadialFunction f;
      json meta = json::object();
      if (!f_path.empty()) {
        f = io::radial_function_from_json(io::read_json(f_path));
      } else if (!bump.empty()) {
        const auto comma = bump.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("--bump expects 'p,eps'");
        const std::string where = bump.substr(0, comma);
        const double eps = std::stod(bump.substr(comma + 1));
        const Point p = where == "inf" ? Point::infinity() : Point::at(std::stod(where));
        const BumpDensity b = bump_density(model, p, eps, nodes > 0 ? nodes : bump_grid_size(eps));
        f = b.log_density;
        meta = {{"mass", b.mass}, {"concentration", b.concentration}};
      } else {
        f = convex_combination_f(load_potential(phi0_path), load_potential(phi1_path), t, model,
                                 nodes > 0 ? nodes : 256);
        meta = {{"t", t}};
      }
      MaOptions options;
      options.tol = tol;
      try {
        const MaSolution sol = solve_ma(f, model, options);
        json j = io::to_json(sol.phi);
        j["samples"] = sol.samples;
        j["residual"] = sol.residual;
        j["iterations"] = sol.iterations;
        j["rhs"] = meta;
        emit(out, "potential.json", j);
        emit_csv(out, history_table(sol.residual_history));
        return 0;
      } catch (const SolverFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        emit_csv(out, history_table(e.history));
        return kExitFailed;
      }
    }

    if (bound->parsed()) {
      const SectionFamily num = io::family_from_json(io::read_json(num_path));
      const SectionFamily den = io::family_from_json(io::read_json(den_path));
      emit(out, "constraint.json", io::to_json(make_constraint(num, den)));
      return 0;
    }

    if (check->parsed()) {
      const HermitianForm h = io::form_from_json(io::read_json(h_path));
      const HalfSpaceConstraint c = io::constraint_from_json(io::read_json(constraint_path));
      const MembershipResult r = check_membership(h, c, rel_tol);
      emit(out, "membership.json",
           {{"verdict", to_string(r.verdict)}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"margin", r.margin}});
      return 0;
    }

    if (sample->parsed()) {
      json list = json::array();
      for (const auto& c : sample_outer_polytope(PolarizedModel(k), count, seed)) list.push_back(io::to_json(c));
      emit(out, "constraints.json", {{"k", k}, {"seed", seed}, {"constraints", list}});
      return 0;
    }

    if (cone->parsed()) {
      const PolarizedModel model(k);
      const MetricPotential reference = load_potential(reference_path);
      HermitianForm target;
      if (!target_path.empty()) target = io::form_from_json(io::read_json(target_path));
      else if (!from_phi.empty()) target = hilb(load_potential(from_phi), model, QuadratureRule::defaults(k));
      else throw std::invalid_argument("cone-fit needs --target or --from-phi");
      if (target.dim() != model.m()) throw std::invalid_argument("target dimension does not match k + 1");
      const auto points = parse_points(points_spec, model);
      const ConeFit fit = cone_fit(target, points, reference, model);
      io::CsvTable table{"weights", {"x", "theta_or_inf", "weight"}, {}};
      for (std::size_t i = 0; i < fit.points.size(); ++i) {
        const Point& p = fit.points[i];
        table.add({p.is_infinity() ? "1" : io::num(p.x()), p.is_infinity() ? "inf" : io::num(p.theta()),
                   io::num(fit.weights[i])});
      }
      emit(out, "residual.json",
           {{"residual", fit.residual}, {"recomputed", recompute_residual(fit, target, model)},
            {"reconstruction", io::to_json(fit.reconstruction)}});
      emit_csv(out, table);
      return 0;
    }

    if (rank->parsed()) {
      const PolarizedModel model(k);
      const FunctionBasis basis = basis_size > 0 ? FunctionBasis::real_harmonics(basis_size, 2 * k, basis_size)
                                                 : FunctionBasis::defaults(model);
      const TangentRank r = tangent_rank(load_potential(phi_path), basis, model, QuadratureRule::defaults(k));
      emit(out, "tangent_rank.json",
           {{"rank", r.rank}, {"expected", model.m() * model.m()}, {"basis_size", basis.size()},
            {"singular_values", r.singular_values}});
      return 0;
    }

    if (spec->parsed()) {
      const PolarizedModel model(k);
      const Spectrum s = laplacian_spectrum(load_potential(phi_path), model, l_max, mu_max >= 0 ? mu_max : 2 * k);
      io::CsvTable table{"spectrum", {"mu", "index", "eigenvalue"}, {}};
      for (const auto& e : s.entries) table.add({std::to_string(e.mode), std::to_string(e.index), io::num(e.eigenvalue)});
      emit(out, "spectrum.json",
           {{"distance_to_one", s.distance_to_one}, {"refinement_shift", s.refinement_shift},
            {"basis_size", s.basis_size}});
      emit_csv(out, table);
      return 0;
    }

    if (inv->parsed()) {
      const PolarizedModel model(k);
      const HermitianForm target = io::form_from_json(io::read_json(target_path));
      const SectionFamily family =
          family_path.empty() ? SectionFamily::monomials(k) : io::family_from_json(io::read_json(family_path));
      InversionOptions options;
      options.max_iterations = max_iter;
      options.tol = inv_tol;
      try {
        const Inversion r = invert_hilbert(target, family, load_potential(phi0_path), model,
                                           QuadratureRule::defaults(k), options);
        json j = io::to_json(r.phi);
        j["residual"] = r.residual;
        j["iterations"] = r.iterations;
        emit(out, "potential.json", j);
        emit_csv(out, history_table(r.residual_history));
        return 0;
      } catch (const SolverFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        emit_csv(out, history_table(e.history));
        return kExitFailed;
      }
    }

    for (auto* e : experiments) {
      if (!e->parsed()) continue;
      const std::string name = e->get_name();
      const ExperimentConfig config =
          config_path.empty() ? ExperimentConfig::defaults(name) : ExperimentConfig::from_ini(config_path, name);
      const ExperimentReport report = run_experiment(config);
      report.write(out);
      std::cout << name << ": " << to_string(report.verdict()) << " (" << out << "/report.json)\n";
      return report.exit_code();
    }
  } catch (const NotAdmissible& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
