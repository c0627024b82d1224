#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "hilbmap/experiments.hpp"
#include "hilbmap/serialize.hpp"

using namespace hilbmap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hilbmap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(HILBMAP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = ExperimentConfig::from_ini_string(
      "[experiment]\nname = convexity\nseed = 9\nk = 2\n[grid]\nradial = 128\n[tolerance]\ncheck = 1e-6\n"
      "[sweep]\nt = 0, 0.5, 1\ncases = 2\n");
  CHECK(c.name == "convexity");
  CHECK(c.seed == 9);
  CHECK(c.k == 2);
  CHECK(c.rule().radial_count() == 128);
  CHECK(c.rule().angular_count() == 16);
  CHECK(c.tol == 1e-6);
  CHECK(c.t_values == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(c.cases == 2);
  CHECK(c.solver_tol == 1e-10);

  CHECK_THROWS(ExperimentConfig::from_ini_string("[experiment]\nname = convexity\n[sweep]\nbogus = 1\n"));
  CHECK_THROWS(ExperimentConfig::from_ini_string("[experiment]\nname = convexity\n[tolerance]\ncheck = -1\n"));
  CHECK_THROWS(ExperimentConfig::from_ini_string("[experiment]\nname = openness\n", "convexity"));
  CHECK_THROWS(ExperimentConfig::from_ini_string("[experiment]\nname = nothing\n"));
  CHECK_THROWS(ExperimentConfig::from_ini_string("[sweep]\nt = 0, x\n", "convexity"));
  CHECK(ExperimentConfig::from_ini_string("[sweep]\ncases = 1\n", "openness").radii == std::vector<double>{0.05});
}

TEST_CASE("verdicts and exit codes") {
  ExperimentReport r{"x", ExperimentConfig::defaults("convexity")};
  CHECK(r.exit_code() == 0);
  r.add({"diag", {}, {}, false, true});
  CHECK(r.exit_code() == 0);
  r.add({"a", {}, {}, false});
  CHECK(r.exit_code() == 3);
  r.hypothesis_met = false;
  CHECK(r.exit_code() == 4);
  CHECK(r.to_json()["summary"]["verdict"] == "hypothesis_fails");
}

TEST_CASE("reports are deterministic for a fixed seed") {
  ExperimentConfig c = ExperimentConfig::defaults("nonsurjectivity");
  c.cases = 4;
  c.max_iterations = 3;
  CHECK(run_nonsurjectivity(c).to_json().dump() == run_nonsurjectivity(c).to_json().dump());
  c.seed = 2;
  const auto other = run_nonsurjectivity(c).to_json();
  c.seed = 1;
  CHECK(other.dump() != run_nonsurjectivity(c).to_json().dump());
}

TEST_CASE("delta limit rejects non-minimal families") {
  ExperimentConfig c = ExperimentConfig::defaults("delta-limit");
  c.k = 2;
  c.family = {0, 1, 2};
  CHECK_THROWS_AS(run_delta_limit(c), std::invalid_argument);
}

TEST_CASE("convexity with no cases passes trivially; openness flags invalid radii") {
  ExperimentConfig c = ExperimentConfig::defaults("convexity");
  c.cases = 0;
  CHECK(run_convexity(c).verdict() == Verdict::pass);

  ExperimentConfig o = ExperimentConfig::defaults("openness");
  o.cases = 2;
  o.radii = {5.0};
  const ExperimentReport r = run_openness(o);
  bool saw_invalid = false;
  for (const auto& rec : r.cases)
    if (rec.values.contains("status") && rec.values["status"].get<std::string>().rfind("invalid", 0) == 0)
      saw_invalid = true;
  CHECK(saw_invalid);
  CHECK(r.cases.back().values["largest_full_success_radius"] == 0.0);
}

TEST_CASE("command line") {
  const fs::path dir = scratch("cli");
  CHECK(run("nonsurjectivity --out " + (dir / "ns").string()) == 0);
  CHECK(fs::exists(dir / "ns" / "report.json"));
  CHECK(fs::exists(dir / "ns" / "nonsurjectivity.csv"));

  write(dir / "bad.ini", "[experiment]\nname = delta-limit\nk = 2\n[sweep]\nfamily = 0, 1, 2\n");
  CHECK(run("delta-limit --config " + (dir / "bad.ini").string() + " --out " + (dir / "dl").string()) == 2);

  write(dir / "conv.ini", "[experiment]\nname = convexity\n[sweep]\ncases = 1\nt = 0.5\n[tolerance]\ncheck = 1e-30\n");
  CHECK(run("convexity --config " + (dir / "conv.ini").string() + " --out " + (dir / "cv").string()) == 3);

  CHECK(run("gram --k 2 --out " + (dir / "gram").string()) == 0);
  const auto g = io::form_from_json(io::read_json(dir / "gram" / "gram.json").at("gram"));
  CHECK(g(1, 1).real() == doctest::Approx(M_PI / 3).epsilon(1e-12));
  CHECK(fs::exists(dir / "gram" / "convergence.csv"));

  write(dir / "num.json", "[[[0,0],[1,0],[0,0]]]");
  write(dir / "den.json", "[[[1,0],[0,0],[0,0]], [[0,0],[0,0],[1,0]]]");
  CHECK(run("constraint bound --num " + (dir / "num.json").string() + " --den " + (dir / "den.json").string() +
            " --out " + (dir / "c").string()) == 0);
  const auto c = io::read_json(dir / "c" / "constraint.json");
  CHECK(c["M"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
  write(dir / "id.json", "[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]");
  CHECK(run("constraint check --form " + (dir / "id.json").string() + " --constraint " +
            (dir / "c" / "constraint.json").string() + " --out " + (dir / "m").string()) == 0);
  CHECK(io::read_json(dir / "m" / "membership.json")["verdict"] == "boundary");
  CHECK(run("constraint sample-acal --k 2 --count 3 --seed 4 --out " + (dir / "s").string()) == 0);
  CHECK(io::read_json(dir / "s" / "constraints.json")["constraints"].size() == 3);

  CHECK(run("spectrum --k 1 --out " + (dir / "sp").string()) == 0);
  CHECK(fs::exists(dir / "sp" / "spectrum.csv"));
  CHECK(run("tangent-rank --k 1 --basis-size 12 --out " + (dir / "tr").string()) == 0);
  CHECK(io::read_json(dir / "tr" / "tangent_rank.json")["rank"] == 4);
  CHECK(run("cone-fit --k 2 --target " + (dir / "id.json").string() + " --points circle:64 --out " +
            (dir / "cf").string()) == 0);
  CHECK(io::read_json(dir / "cf" / "residual.json")["residual"].get<double>() <= 1e-8);
  CHECK(run("ma-solve --k 1 --bump 0,0.2 --tol 1e-9 --out " + (dir / "ma").string()) == 0);
  CHECK(fs::exists(dir / "ma" / "residual_history.csv"));
  write(dir / "t.json", "[[[1.7,0],[0.05,0.02]],[[0.05,-0.02],[1.5,0]]]");
  CHECK(run("invert --k 1 --target " + (dir / "t.json").string() + " --out " + (dir / "inv").string()) == 0);
  CHECK(io::read_json(dir / "inv" / "potential.json")["residual"].get<double>() <= 1e-8);
  CHECK(run("gram --phi " + (dir / "missing.json").string()) == 2);
  CHECK(run("--simd scalar gram --k 1 --out " + (dir / "g2").string()) == 0);
}
