#include "horoflow/imcf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

Field checked_rhs(const AmbientModel& ambient, const ColatitudeGrid& grid, const Field& rho,
                  double t) {
  const GraphSurface s = build_surface(ambient, grid, rho);
  if (s.mean_curv.minCoeff() <= 0.0)
    throw HypothesisViolation("imcf: mean curvature reached zero at t = " + std::to_string(t));
  return imcf_rhs(s);
}

// Largest step for which explicit stepping of the linearized diffusion stays
// stable: the spectral radius of the graph Laplacian on the grid is about
// n^2 / (H^2 E).
double stability_limit(const GraphSurface& s, double safety) {
  const double n = s.grid->size();
  const double lam = n * (n - 1.0) * (1.0 / (s.mean_curv.square() * s.E)).maxCoeff();
  return 3.0 * safety / lam;
}

}  // namespace

Field imcf_rhs(const GraphSurface& s) { return s.W / s.mean_curv; }

Field tangential_speed(const GraphSurface& s) {
  return s.rho_theta / (s.mean_curv * s.W * s.phi.square());
}

Field positivity_margin(const GraphSurface& s) {
  const Field inv_h_dev = -s.mean_curv_dev / (2.0 * s.mean_curv);
  return 2.0 * s.gauss_curv + 6.0 - 2.0 * s.mean_curv * laplace_induced(s, inv_h_dev);
}

FlowDiagnostics flow_diagnostics(const GraphSurface& s) {
  FlowDiagnostics d;
  const double c = s.ambient->asymptotic_shift();
  d.area = s.area;
  d.rhat = s.rhat;
  d.m_hawking = hawking_mass(s);
  d.h_min = s.mean_curv.minCoeff();
  d.h_max = s.mean_curv.maxCoeff();
  d.sup_h2_minus_4 = s.h2_minus_4.abs().maxCoeff();
  d.sup_ring_a_sq = s.ring_a_sq.maxCoeff();
  d.sup_one_minus_nudr = s.one_minus_nu_dr.maxCoeff();
  d.sup_khat_minus_one = (s.khat - 1.0).abs().maxCoeff();
  d.r_outer = s.rho.maxCoeff() + c;
  d.r_inner = s.rho.minCoeff() + c;
  d.positivity_margin = positivity_margin(s).minCoeff();
  return d;
}

double FlowTrace::spacing() const {
  if (records.size() < 2) throw DomainError("trace: fewer than two records");
  return records[1].t - records[0].t;
}

GraphSurface FlowTrace::surface(std::size_t k) const {
  if (k >= records.size()) throw DomainError("trace: record index out of range");
  return build_surface(*ambient, *grid, records[k].rho);
}

Field FlowTrace::rho_at(double t) const {
  const double dt = spacing();
  const double t0 = records.front().t;
  if (!(t >= t0 && t <= records.back().t + 1e-12 * dt))
    throw DomainError("trace: time outside the recorded interval");
  std::size_t k = std::min(static_cast<std::size_t>((t - t0) / dt), records.size() - 2);
  const FlowRecord& a = records[k];
  const FlowRecord& b = records[k + 1];
  const double h = b.t - a.t;
  const double x = (t - a.t) / h;
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * a.rho + (x3 - 2 * x2 + x) * h * a.rho_dot +
         (-2 * x3 + 3 * x2) * b.rho + (x3 - x2) * h * b.rho_dot;
}

FlowTrace run_imcf(const AmbientModel& ambient, const ColatitudeGrid& grid, const Field& rho0,
                   const ImcfConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !(cfg.dt_init > 0.0) || !(cfg.tol_step > 0.0) ||
      !(cfg.safety > 0.0 && cfg.safety <= 1.0) || cfg.cadence < 1)
    throw DomainError("imcf: invalid flow configuration");
  const double spacing = cfg.cadence * cfg.dt_init;
  const auto n_rec = static_cast<std::size_t>(std::llround(cfg.t_end / spacing));
  if (n_rec < 2 || std::abs(n_rec * spacing - cfg.t_end) > 1e-9 * cfg.t_end)
    throw DomainError("imcf: t_end must be a multiple of cadence * dt_init");

  FlowTrace trace;
  trace.ambient = &ambient;
  trace.grid = &grid;
  trace.records.reserve(n_rec + 1);

  auto record = [&](double t, const Field& rho, double dt_last) {
    const GraphSurface s = build_surface(ambient, grid, rho);
    if (s.mean_curv.minCoeff() <= 0.0)
      throw HypothesisViolation("imcf: mean curvature not positive at t = " + std::to_string(t));
    FlowRecord r;
    r.t = t;
    r.rho = rho;
    r.rho_dot = imcf_rhs(s);
    r.diag = flow_diagnostics(s);
    r.diag.dt = dt_last;
    trace.records.push_back(std::move(r));
    return s;
  };

  Field y = rho0;
  double t = 0.0;
  double dt = cfg.dt_init;
  double dt_last = 0.0;
  GraphSurface current = record(0.0, y, 0.0);
  Field k1 = trace.records.back().rho_dot;

  for (std::size_t rec = 1; rec <= n_rec; ++rec) {
    const double t_next = rec * spacing;
    while (t < t_next) {
      const double remaining = t_next - t;
      double h = std::min({dt, remaining, stability_limit(current, cfg.safety)});
      // Avoid leaving a sliver before the record time.
      if (remaining - h < 1e-3 * h) h = remaining;
      if (h < 1e-12 * std::max(1.0, t))
        throw NumericalFailure("imcf: step size collapsed at t = " + std::to_string(t));

      const Field k2 = checked_rhs(ambient, grid, y + h * (a21 * k1), t);
      const Field k3 = checked_rhs(ambient, grid, y + h * (a31 * k1 + a32 * k2), t);
      const Field k4 = checked_rhs(ambient, grid, y + h * (a41 * k1 + a42 * k2 + a43 * k3), t);
      const Field k5 =
          checked_rhs(ambient, grid, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t);
      const Field k6 = checked_rhs(
          ambient, grid, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t);
      const Field y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const GraphSurface s_new = build_surface(ambient, grid, y_new);
      if (s_new.mean_curv.minCoeff() <= 0.0)
        throw HypothesisViolation("imcf: mean curvature reached zero at t = " + std::to_string(t + h));
      const Field k7 = imcf_rhs(s_new);
      const Field err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      const double norm = err.abs().maxCoeff() / cfg.tol_step;

      const double grow = norm > 0.0 ? 0.9 * std::pow(norm, -0.2) : 5.0;
      if (norm <= 1.0) {
        t = (h == remaining) ? t_next : t + h;
        y = y_new;
        k1 = k7;
        current = s_new;
        dt_last = h;
        ++trace.steps_accepted;
        dt = h * std::clamp(grow, 0.2, 5.0);
      } else {
        ++trace.steps_rejected;
        dt = h * std::clamp(grow, 0.1, 0.9);
      }
    }
    record(t_next, y, dt_last);
  }
  return trace;
}

FInfinity extract_f_infinity(const FlowTrace& trace) {
  const double dt = trace.spacing();
  const std::size_t last = trace.records.size() - 1;
  const auto back = static_cast<std::size_t>(std::llround(1.0 / dt));
  if (trace.records.size() < 3 || back > last)
    throw DomainError("f_infinity: trace shorter than one unit of time");
  FInfinity out;
  out.f = trace.surface(last).profile;
  out.cauchy = (out.f - trace.surface(last - back).profile).abs().maxCoeff();
  return out;
}

DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 3)
    throw DomainError("fit: need at least three paired samples");
  const std::size_t n = times.size();
  double st = 0, sy = 0, stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw DomainError("fit: values must be positive and finite");
    const double y = std::log(values[i]);
    st += times[i];
    sy += y;
    stt += times[i] * times[i];
    sty += times[i] * y;
    syy += y * y;
  }
  const double vt = stt - st * st / n;
  const double vy = syy - sy * sy / n;
  const double cov = sty - st * sy / n;
  DecayFit fit;
  fit.rate = cov / vt;
  fit.r2 = vy > 0.0 ? cov * cov / (vt * vy) : 1.0;
  fit.samples = n;
  return fit;
}

DecayFit fit_trace_rate(const FlowTrace& trace, double FlowDiagnostics::*field, double t_lo,
                        double t_hi) {
  std::vector<double> ts, vs;
  for (const auto& r : trace.records) {
    if (r.t < t_lo - 1e-12 || r.t > t_hi + 1e-12) continue;
    ts.push_back(r.t);
    vs.push_back(r.diag.*field);
  }
  return fit_decay_rate(ts, vs);
}

double evolution_residual(const FlowTrace& trace, std::size_t k, double max_spacing) {
  if (k == 0 || k + 1 >= trace.records.size())
    throw DomainError("evolution residual: needs a record on each side");
  const double dt_fwd = trace.records[k + 1].t - trace.records[k].t;
  const double dt_bwd = trace.records[k].t - trace.records[k - 1].t;
  if (std::abs(dt_fwd - dt_bwd) > 1e-9 * dt_fwd)
    throw DomainError("evolution residual: records are not equally spaced");
  if (dt_fwd > max_spacing)
    throw DomainError("evolution residual: record cadence too coarse");

  const GraphSurface s = trace.surface(k);
  const GraphSurface sp = trace.surface(k + 1);
  const GraphSurface sm = trace.surface(k - 1);
  const Field& H = s.mean_curv;
  const Field dh_graph = (sp.mean_curv_dev - sm.mean_curv_dev) / (2.0 * dt_fwd);
  const Field dh_normal = dh_graph - tangential_speed(s) * s.grid->d_theta(s.mean_curv_dev);

  const Field& d1 = s.kappa1_dev;
  const Field& d2 = s.kappa2_dev;
  const Field a_plus_ric = d1 * (2.0 + d1) + d2 * (2.0 + d2) + s.ricci_normal_excess;
  const Field rhs = laplace_induced(s, s.mean_curv_dev) / H.square() - a_plus_ric / H -
                    2.0 * grad_inner_induced(s, s.mean_curv_dev, s.mean_curv_dev) / H.cube();
  return (dh_normal - rhs).abs().maxCoeff();
}

}  // namespace horoflow
