#include "horoflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <numbers>
#include <thread>

#include "horoflow/errors.hpp"
#include "horoflow/mass.hpp"
#include "horoflow/report.hpp"

namespace horoflow {

namespace {

constexpr double kPi = std::numbers::pi;
// Thresholds of the standing hypothesis audit on the initial surface.
constexpr double kAuditEps = 0.5;
constexpr double kAuditDelta = 0.05;
constexpr double kAreaLawTol = 1e-4;
constexpr double kAreaLawTolRound = 1e-6;
constexpr double kMonotoneTol = 1e-8;
constexpr double kSandwichTol = 1e-6;

using json = nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

const char* status_name(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitConfig: return "config_error";
    case kExitHypothesis: return "hypothesis_violation";
    default: return "numerical_failure";
  }
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::filesystem::path output_dir(const RunConfig& c, const RunOptions& o) {
  return o.out_dir ? *o.out_dir : std::filesystem::path(c.output.dir);
}

// Runs body, maps exceptions to exit codes, and writes the manifest last.
template <class Body>
RunOutcome with_manifest(const RunConfig& config, const RunOptions& opt, const char* command,
                         Body body) {
  RunOutcome out;
  out.dir = output_dir(config, opt);
  const auto manifest = out.dir / "manifest.json";
  std::vector<std::string> files;
  const std::string started = utc_now();
  try {
    std::filesystem::create_directories(out.dir);
    std::filesystem::remove(manifest);
    body(out, files);
  } catch (const ConfigError& e) {
    out.exit_code = kExitConfig;
    out.message = e.what();
  } catch (const HypothesisViolation& e) {
    out.exit_code = kExitHypothesis;
    out.message = e.what();
  } catch (const DomainError& e) {
    out.exit_code = kExitHypothesis;
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = kExitNumerical;
    out.message = e.what();
  }
  json m;
  m["tool"] = "horoflow";
  m["version"] = version();
  m["command"] = command;
  m["config"] = config_to_json(config);
  m["started"] = started;
  m["finished"] = utc_now();
  m["exit_status"] = out.exit_code;
  m["status"] = status_name(out.exit_code);
  if (!out.message.empty()) m["message"] = out.message;
  json listed = json::array();
  for (const auto& f : files) {
    const auto p = out.dir / f;
    if (!std::filesystem::exists(p)) continue;
    listed.push_back({{"name", f},
                      {"bytes", std::filesystem::file_size(p)},
                      {"sha256", sha256_file(p)}});
  }
  m["files"] = listed;
  try {
    std::filesystem::create_directories(out.dir);
    write_json_atomic(manifest, m);
  } catch (const std::exception& e) {
    if (out.exit_code == kExitOk) out.exit_code = kExitNumerical;
    out.message += std::string(out.message.empty() ? "" : "; ") + "manifest: " + e.what();
  }
  if (!opt.quiet) {
    std::cerr << "[" << command << "] " << out.dir.string() << ": " << status_name(out.exit_code);
    if (!out.message.empty()) std::cerr << " (" << out.message << ")";
    std::cerr << "\n";
  }
  return out;
}

json fit_json(const std::function<DecayFit()>& fit, double lo, double hi) {
  try {
    const DecayFit f = fit();
    return {{"rate", f.rate}, {"r2", f.r2}, {"window", {lo, hi}}, {"samples", f.samples}};
  } catch (const DomainError& e) {
    return {{"rate", nullptr}, {"r2", nullptr}, {"window", {lo, hi}}, {"note", e.what()}};
  }
}

json check(bool pass, double value, double tol) {
  return {{"pass", pass}, {"value", nullable(value)}, {"tolerance", tol}};
}

}  // namespace

std::string version() { return "0.1.0"; }

json config_to_json(const RunConfig& c) {
  return {
      {"ambient", {{"m", c.ambient.m}, {"r_max", c.ambient.r_max}, {"tol_ode", c.ambient.tol_ode}}},
      {"initial",
       {{"r0", c.initial.r0},
        {"f_kind", c.initial.f_kind},
        {"coefficients", c.initial.coefficients},
        {"a", c.initial.a},
        {"path", c.initial.path}}},
      {"grid", {{"n", c.n}}},
      {"flow",
       {{"t_end", c.flow.t_end},
        {"dt_init", c.flow.dt_init},
        {"tol_step", c.flow.tol_step},
        {"safety", c.flow.safety},
        {"cadence", c.flow.cadence}}},
      {"shitam", {{"enabled", c.shitam.enabled}, {"tol_R", c.shitam.tol_R}}},
      {"inequality",
       {{"enabled", c.inequality.enabled},
        {"l_max", c.inequality.l_max},
        {"iters", c.inequality.iters}}},
      {"output", {{"dir", c.output.dir}, {"emit_svg", c.output.emit_svg}, {"seed", c.output.seed}}},
  };
}

RunOutcome run_scenario(const RunConfig& config, const RunOptions& opt) {
  return with_manifest(config, opt, "run", [&](RunOutcome& out, std::vector<std::string>& files) {
    const AmbientModel ambient =
        AmbientModel::build(config.ambient.m, config.ambient.r_max, config.ambient.tol_ode);
    const ColatitudeGrid grid = ColatitudeGrid::build(config.n);
    const Field f = initial_profile(config, grid);
    const Field rho0 = config.initial.r0 + f - ambient.asymptotic_shift();
    if (rho0.minCoeff() < 0.0)
      throw HypothesisViolation("initial surface reaches inside the sphere where H = 2 (r0 too small)");
    if (rho0.maxCoeff() > ambient.r_max())
      throw HypothesisViolation("initial surface lies beyond ambient.r_max");

    const GraphSurface s0 = build_surface(ambient, grid, rho0);
    const HypothesisReport audit = hypothesis_report(s0, kAuditEps, kAuditDelta);
    json summary;
    summary["hypothesis"] = {{"eps0", kAuditEps},
                             {"delta0", kAuditDelta},
                             {"pass", audit.passes()},
                             {"min_h", audit.min_h},
                             {"min_nu_dr", audit.min_nu_dr},
                             {"max_ring_ratio", audit.max_ring_ratio},
                             {"q0", audit.q0},
                             {"q1", audit.q1},
                             {"q2", audit.q2}};
    if (!audit.passes()) throw HypothesisViolation("initial surface fails the standing hypothesis audit");

    const FlowTrace trace = run_imcf(ambient, grid, rho0, config.flow);
    std::optional<ShiTamResult> lapse;
    if (config.shitam.enabled) {
      ShiTamOptions so;
      so.enforce_sandwich = false;
      lapse = run_shitam(trace, so);
    }

    const auto& recs = trace.records;
    const double a0 = recs.front().diag.area;
    const double t_end = recs.back().t;
    const double lo = t_end >= 7.5 ? 2.0 : 0.25 * t_end;
    const double hi = t_end >= 7.5 ? 7.0 : 0.875 * t_end;

    json rates;
    rates["h2m4"] = fit_json([&] { return fit_trace_rate(trace, &FlowDiagnostics::sup_h2_minus_4, lo, hi); }, lo, hi);
    rates["ringA"] = fit_json([&] { return fit_trace_rate(trace, &FlowDiagnostics::sup_ring_a_sq, lo, hi); }, lo, hi);
    rates["nudr"] = fit_json([&] { return fit_trace_rate(trace, &FlowDiagnostics::sup_one_minus_nudr, lo, hi); }, lo, hi);
    if (lapse) {
      rates["dwdt"] = fit_json(
          [&] {
            std::vector<double> ts, vs;
            for (std::size_t k = 0; k < recs.size(); ++k) {
              if (recs[k].t < lo - 1e-12 || recs[k].t > hi + 1e-12) continue;
              ts.push_back(recs[k].t);
              vs.push_back(lapse_rate(trace.surface(k), lapse->states[k].w, recs[k].t, a0).abs().maxCoeff());
            }
            return fit_decay_rate(ts, vs);
          },
          lo, hi);
    } else {
      rates["dwdt"] = nullptr;
    }
    summary["rates"] = rates;

    const FInfinity finf = extract_f_infinity(trace);
    double khat_floor = std::numeric_limits<double>::infinity();
    for (const auto& r : recs)
      if (r.t >= lo - 1e-12) khat_floor = std::min(khat_floor, r.diag.sup_khat_minus_one);
    summary["final"] = {{"t", t_end},
                        {"m_hawking", recs.back().diag.m_hawking},
                        {"khat_floor", khat_floor},
                        {"f_inf_cauchy", finf.cauchy},
                        {"w_inf_cauchy", lapse ? json(lapse->w_cauchy) : json(nullptr)}};

    const InequalityReport ineq = penrose_functional(grid, f);
    summary["inequality"] = config.inequality.enabled
                                ? json{{"I_value", ineq.value}, {"margin", ineq.margin}}
                                : json{{"I_value", nullptr}, {"margin", nullptr}};

    json checks;
    double area_dev = 0.0, min_inc = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < recs.size(); ++k) {
      area_dev = std::max(area_dev, std::abs(recs[k].diag.area / (a0 * std::exp(recs[k].t)) - 1.0));
      if (k) min_inc = std::min(min_inc, recs[k].diag.m_hawking - recs[k - 1].diag.m_hawking);
    }
    const double area_tol = config.initial.f_kind == "zero" ? kAreaLawTolRound : kAreaLawTol;
    checks["area_law"] = check(area_dev <= area_tol, area_dev, area_tol);
    checks["monotone_mH"] = check(min_inc >= -kMonotoneTol, min_inc, -kMonotoneTol);

    json mass;
    mass["area_sigma0"] = a0;
    mass["penrose_threshold"] = std::sqrt(a0 / (16.0 * kPi));
    mass["m_hawking_sigma0"] = recs.front().diag.m_hawking;
    mass["hawking_limit"] = hawking_limit(grid, f, ambient.mass());
    if (lapse) {
      checks["gamma_sandwich"] = check(lapse->sandwich_excess <= kSandwichTol, lapse->sandwich_excess, kSandwichTol);
      double sup_r = 0.0;
      for (std::size_t k = 1; k + 1 < recs.size(); ++k)
        sup_r = std::max(sup_r, scalar_curvature_residual(trace, *lapse, k).abs().maxCoeff());
      checks["R_residual"] = check(sup_r <= config.shitam.tol_R, sup_r, config.shitam.tol_R);

      const double lapse_mass = hawking_mass_lapse(trace.surface(recs.size() - 1), lapse->states.back().z);
      mass["lapse_hawking_mass"] = lapse_mass;
      const double threshold = std::sqrt(a0 / (16.0 * kPi));
      std::vector<std::string> consistent;
      for (LapseScaling sc : {LapseScaling::W, LapseScaling::TwoW}) {
        const std::string key = sc == LapseScaling::W ? "M_scaling_w" : "M_scaling_2w";
        try {
          const MassAspect asp = build_mass_aspect(ambient.mass(), a0, finf.f, lapse->w_inf, sc);
          const double M = total_mass(grid, asp.trace_h).mass;
          mass[key] = M;
          if (M >= threshold - 1e-3 && std::abs(M - lapse_mass) <= 0.01 * std::abs(lapse_mass))
            consistent.push_back(to_string(sc));
        } catch (const DomainError&) {
          mass[key] = nullptr;
        }
      }
      mass["consistent_scalings"] = consistent;
      if (config.initial.f_kind == "zero") {
        checks["mass_round_consistency"] = {{"pass", consistent.size() == 1},
                                            {"scaling", consistent.size() == 1 ? json(consistent[0]) : json(nullptr)}};
      }
    } else {
      mass["M_scaling_w"] = nullptr;
      mass["M_scaling_2w"] = nullptr;
      checks["gamma_sandwich"] = {{"pass", nullptr}, {"value", nullptr}, {"note", "lapse disabled"}};
      checks["R_residual"] = {{"pass", nullptr}, {"value", nullptr}, {"note", "lapse disabled"}};
    }
    summary["mass"] = mass;
    summary["checks"] = checks;
    summary["steps"] = {{"accepted", trace.steps_accepted}, {"rejected", trace.steps_rejected}};

    write_trace_csv(out.dir / "trace.csv", trace, lapse ? &*lapse : nullptr);
    files.push_back("trace.csv");
    write_json(out.dir / "summary.json", summary);
    files.push_back("summary.json");
    if (config.output.emit_svg)
      for (auto& name : emit_plots(trace, lapse ? &*lapse : nullptr, out.dir)) files.push_back(name);
    out.summary = summary;

    for (auto& [name, c] : checks.items())
      if (c.contains("pass") && c["pass"].is_boolean() && !c["pass"].get<bool>()) {
        out.exit_code = kExitNumerical;
        out.message = "check failed: " + name;
        break;
      }
  });
}

RunOutcome run_inequality(const RunConfig& config, const RunOptions& opt) {
  return with_manifest(config, opt, "inequality", [&](RunOutcome& out, std::vector<std::string>& files) {
    const ColatitudeGrid grid = ColatitudeGrid::build(config.n);
    const Field f = initial_profile(config, grid);
    const InequalityReport ineq = penrose_functional(grid, f);
    MinimizeOptions mo;
    mo.l_max = config.inequality.l_max;
    mo.iters = config.inequality.iters;

    json starts = json::array();
    json findings = json::array();
    auto record = [&](const std::string& label, std::optional<std::uint64_t> seed, const Field& start) {
      const MinimizeResult r = minimize_I(grid, start, mo);
      json j = {{"start", label},
                {"seed", seed ? json(*seed) : json(nullptr)},
                {"initial", r.trajectory.front()},
                {"final", r.value},
                {"iterations", r.iterations},
                {"violation", r.violation}};
      starts.push_back(j);
      if (r.violation) {
        const Eigen::VectorXd c = grid.legendre_coeffs(r.f_best, mo.l_max);
        j["legendre_coefficients"] = std::vector<double>(c.data(), c.data() + c.size());
        findings.push_back(j);
      }
    };
    record("configured", std::nullopt, f);
    for (std::uint64_t i = 0; i < 10; ++i) {
      const std::uint64_t seed = config.output.seed + i;
      record("random", seed, random_profile(grid, mo.l_max, 0.5, seed));
    }
    json result = {{"I_value", ineq.value},
                   {"margin", ineq.margin},
                   {"normalization_error", ineq.normalization},
                   {"l_max", mo.l_max},
                   {"iters", mo.iters},
                   {"starts", starts},
                   {"violations", findings.size()}};
    write_json(out.dir / "inequality.json", result);
    files.push_back("inequality.json");
    if (!findings.empty()) {
      write_json(out.dir / "findings.json", {{"kind", "inequality_violation"}, {"threshold", mo.violation_threshold}, {"items", findings}});
      files.push_back("findings.json");
    }
    out.summary = result;
  });
}

std::vector<SweepEntry> run_sweep(const std::filesystem::path& dir, const RunOptions& opt) {
  if (!std::filesystem::is_directory(dir)) throw ConfigError("sweep: not a directory: " + dir.string());
  std::vector<std::filesystem::path> configs;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".toml") configs.push_back(e.path());
  std::sort(configs.begin(), configs.end());

  std::vector<SweepEntry> entries(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      entries[i].config = configs[i];
      try {
        const RunConfig c = parse_config(configs[i]);
        RunOptions o = opt;
        o.out_dir = output_dir(c, opt) / configs[i].stem();
        entries[i].outcome = run_scenario(c, o);
      } catch (const ConfigError& e) {
        entries[i].outcome.exit_code = kExitConfig;
        entries[i].outcome.message = e.what();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(hw, std::max<std::size_t>(1, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return entries;
}

}  // namespace horoflow
