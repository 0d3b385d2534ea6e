#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "horoflow/errors.hpp"
#include "horoflow/pipeline.hpp"
#include "horoflow/report.hpp"

using namespace horoflow;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("horoflow_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kMinimal = R"(
[ambient]
m = 2.0
[initial]
r0 = 6.0
f_kind = "zero"
)";

RunConfig short_run(const std::string& kind, double t_end = 2.0) {
  RunConfig c = parse_config_text(kMinimal);
  c.initial.f_kind = kind;
  if (kind == "legendre") c.initial.coefficients = {0.0, 0.0, 0.3};
  c.flow.t_end = t_end;
  return c;
}

RunOptions into(const fs::path& dir) {
  RunOptions o;
  o.quiet = true;
  o.out_dir = dir;
  return o;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config_text(kMinimal);
  CHECK(c.ambient.m == 2.0);
  CHECK(c.ambient.r_max == 20.0);
  CHECK(c.ambient.tol_ode == 1e-11);
  CHECK(c.n == 96);
  CHECK(c.flow.t_end == 8.0);
  CHECK(c.flow.dt_init == 1e-3);
  CHECK(c.flow.tol_step == 1e-8);
  CHECK(c.flow.safety == 0.8);
  CHECK(c.flow.cadence == 10);
  CHECK(c.shitam.enabled);
  CHECK(c.shitam.tol_R == 1e-4);
  CHECK(c.inequality.enabled);
  CHECK(c.inequality.l_max == 6);
  CHECK(c.inequality.iters == 200);
  CHECK_FALSE(c.output.emit_svg);
}

TEST_CASE("legendre profile is the normalized combination") {
  RunConfig c = parse_config_text(std::string(kMinimal) + "\n");
  c.initial.f_kind = "legendre";
  c.initial.coefficients = {0.0, 0.0, 0.3};
  const auto g = ColatitudeGrid::build(64);
  const Field f = initial_profile(c, g);
  // f - 0.3 P2 is constant and fixes the area of e^{2f} g0 at 4 pi.
  const Field diff = f - 0.15 * (3.0 * g.mu().square() - 1.0);
  CHECK(diff.maxCoeff() - diff.minCoeff() <= 1e-14);
  CHECK(std::abs(g.mean((2.0 * f).exp()) - 1.0) <= 1e-13);
}

TEST_CASE("config errors name the key") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(std::string(kMinimal) + "[flow]\nt_endd = 3.0\n").find("t_endd") != std::string::npos);
  CHECK(message("[ambient]\nm = 2.0\n").find("r0") != std::string::npos);
  CHECK(message(std::string(kMinimal) + "[grid]\nn = \"big\"\n").find("grid.n") != std::string::npos);
  CHECK(message(std::string(kMinimal) + "[flow]\ntol_step = -1.0\n").find("tol_step") != std::string::npos);
  CHECK(message("[ambient]\nm = 2.0\n[initial]\nr0 = 6.0\nf_kind = \"file\"\npath = \"/nonexistent/f.txt\"\n")
            .find("path") != std::string::npos);
}

TEST_CASE("file profiles read Legendre coefficients") {
  const fs::path dir = scratch("file_profile");
  {
    std::ofstream out(dir / "f.txt");
    out << "# coefficients of P0, P1, P2\n0, 0\n0.3\n";
  }
  const RunConfig c = parse_config_text(
      "[ambient]\nm = 2.0\n[initial]\nr0 = 6.0\nf_kind = \"file\"\npath = \"f.txt\"\n", dir);
  RunConfig ref = c;
  ref.initial.f_kind = "legendre";
  ref.initial.coefficients = {0.0, 0.0, 0.3};
  const auto g = ColatitudeGrid::build(32);
  CHECK((initial_profile(c, g) - initial_profile(ref, g)).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("scenario outputs: header, summary keys, manifest digests") {
  const fs::path dir = scratch("scenario");
  RunConfig c = short_run("legendre", 3.0);
  c.output.emit_svg = true;
  const RunOutcome out = run_scenario(c, into(dir));
  REQUIRE(out.exit_code == 0);

  std::ifstream csv(dir / "trace.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "t,area,rhat,m_hawking,h_min,h_max,sup_ring_a_sq,sup_one_minus_nudr,sup_khat_minus_one,"
        "r_outer,r_inner,u_min,u_max,w_min,w_max,positivity_margin,dt");

  const auto s = nlohmann::json::parse(slurp(dir / "summary.json"));
  for (const char* k : {"h2m4", "ringA", "nudr", "dwdt"}) CHECK(s["rates"].contains(k));
  for (const char* k : {"m_hawking", "khat_floor", "f_inf_cauchy", "w_inf_cauchy"}) CHECK(s["final"].contains(k));
  for (const char* k : {"M_scaling_w", "M_scaling_2w", "area_sigma0"}) CHECK(s["mass"].contains(k));
  for (const char* k : {"I_value", "margin"}) CHECK(s["inequality"].contains(k));
  for (const char* k : {"area_law", "monotone_mH", "gamma_sandwich", "R_residual"}) {
    CHECK(s["checks"][k]["pass"] == true);
    CHECK(s["checks"][k].contains("value"));
  }

  const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(m["exit_status"] == 0);
  CHECK(m["config"]["initial"]["coefficients"][2] == 0.3);
  std::vector<std::string> names;
  for (const auto& f : m["files"]) {
    names.push_back(f["name"]);
    CHECK(f["sha256"] == sha256_file(dir / f["name"].get<std::string>()));
  }
  for (const char* want : {"trace.csv", "summary.json", "m_hawking.svg", "h2m4.svg", "ring_a.svg", "khat.svg", "lapse_w.svg"})
    CHECK(std::find(names.begin(), names.end(), want) != names.end());
}

TEST_CASE("round scenario records the consistent lapse scaling") {
  const fs::path dir = scratch("round");
  const RunOutcome out = run_scenario(short_run("zero", 8.0), into(dir));
  REQUIRE(out.exit_code == 0);
  CHECK(out.summary["checks"]["mass_round_consistency"]["pass"] == true);
  CHECK(out.summary["checks"]["mass_round_consistency"]["scaling"] == "w");
}

TEST_CASE("reruns reproduce trace and plots byte for byte") {
  const fs::path a = scratch("repro_a"), b = scratch("repro_b");
  RunConfig c = short_run("legendre");
  c.output.emit_svg = true;
  REQUIRE(run_scenario(c, into(a)).exit_code == 0);
  REQUIRE(run_scenario(c, into(b)).exit_code == 0);
  for (const char* f : {"trace.csv", "summary.json", "m_hawking.svg", "khat.svg", "lapse_w.svg"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("without emit_svg only CSV and JSON are written") {
  const fs::path dir = scratch("nosvg");
  REQUIRE(run_scenario(short_run("zero"), into(dir)).exit_code == 0);
  for (const auto& e : fs::directory_iterator(dir)) CHECK(e.path().extension() != ".svg");
}

TEST_CASE("exit codes and manifest status") {
  SUBCASE("start inside the domain guard") {
    const fs::path dir = scratch("inside");
    RunConfig c = short_run("zero");
    c.initial.r0 = 0.5;
    const RunOutcome out = run_scenario(c, into(dir));
    CHECK(out.exit_code == 3);
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["exit_status"] == 3);
    CHECK(m["status"] != "ok");
  }
  SUBCASE("failed check writes outputs and exits 4") {
    const fs::path dir = scratch("failcheck");
    RunConfig c = short_run("legendre");
    c.shitam.tol_R = 1e-15;
    const RunOutcome out = run_scenario(c, into(dir));
    CHECK(out.exit_code == 4);
    CHECK(fs::exists(dir / "trace.csv"));
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["exit_status"] == 4);
  }
  SUBCASE("stale manifest does not survive a crashed rerun") {
    const fs::path dir = scratch("stale");
    REQUIRE(run_scenario(short_run("zero"), into(dir)).exit_code == 0);
    RunConfig c = short_run("zero");
    c.initial.r0 = 0.5;
    run_scenario(c, into(dir));
    const auto m = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(m["exit_status"] == 3);
  }
}

TEST_CASE("inequality command writes the battery") {
  const fs::path dir = scratch("inequality");
  RunConfig c = short_run("legendre");
  c.inequality.iters = 20;
  const RunOutcome out = run_inequality(c, into(dir));
  CHECK(out.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "inequality.json"));
  CHECK(j["starts"].size() == 11);
  CHECK(std::abs(j["I_value"].get<double>() - 1.21353787) <= 1e-6);
  CHECK(j["violations"] == 0);
  CHECK_FALSE(fs::exists(dir / "findings.json"));
}

TEST_CASE("sweep runs every scenario into its own directory") {
  const fs::path dir = scratch("sweep_cfg"), out = scratch("sweep_out");
  {
    std::ofstream(dir / "a.toml") << kMinimal << "[flow]\nt_end = 1.0\n";
    std::ofstream(dir / "b.toml") << kMinimal << "[flow]\nt_end = 1.0\n[grid]\nn = 48\n";
    std::ofstream(dir / "c.toml") << kMinimal << "[flow]\nbogus = 1\n";
  }
  const auto entries = run_sweep(dir, into(out));
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].outcome.exit_code == 0);
  CHECK(entries[1].outcome.exit_code == 0);
  CHECK(entries[2].outcome.exit_code == 2);
  CHECK(fs::exists(out / "a" / "manifest.json"));
  CHECK(fs::exists(out / "b" / "trace.csv"));
}

TEST_CASE("plots are deterministic and a constant series is flat") {
  PlotSeries s{"m", {0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}};
  const std::string a = render_line_plot("flat", "t", {s});
  CHECK(a == render_line_plot("flat", "t", {s}));
  const auto at = a.find("points=\"");
  REQUIRE(at != std::string::npos);
  std::istringstream pts(a.substr(at + 8, a.find('"', at + 8) - at - 8));
  std::string pair;
  std::set<std::string> ys;
  while (pts >> pair) ys.insert(pair.substr(pair.find(',') + 1));
  CHECK(ys.size() == 1);
}
