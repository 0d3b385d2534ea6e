#include "horoflow/shitam.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

namespace {

constexpr double kPi = std::numbers::pi;

Field inverse_h_dev(const GraphSurface& s) { return -s.mean_curv_dev / (2.0 * s.mean_curv); }

// 1 - u^{-2} for u = 1 + z.
double comparison_constant(double z) { return z * (2.0 + z) / ((1.0 + z) * (1.0 + z)); }

// (1 - x)^{-1/2} - 1 without cancellation for small x.
double gamma_dev(double x) {
  const double r = std::sqrt(1.0 - x);
  return x / (r * (1.0 + r));
}

struct SliceGeometry {
  GraphSurface s;
  Field inv_h;
  Field lap_inv_h;
  Field margin;
  Field tau;
};

SliceGeometry slice(const FlowTrace& trace, const Field& rho) {
  SliceGeometry g{build_surface(*trace.ambient, *trace.grid, rho), {}, {}, {}, {}};
  g.inv_h = inverse_h_dev(g.s);
  g.lap_inv_h = laplace_induced(g.s, g.inv_h);
  g.margin = 2.0 * g.s.gauss_curv + 6.0 - 2.0 * g.s.mean_curv * g.lap_inv_h;
  g.tau = tangential_speed(g.s);
  return g;
}

Field lapse_rate_on(const SliceGeometry& g, const Field& w, double scale) {
  const GraphSurface& s = g.s;
  const Field z = w / scale;
  const Field u2 = (1.0 + z).square();
  const Field& H = s.mean_curv;
  const Field growth = 3.0 * s.h2_minus_4 - 4.0 * s.gauss_curv + 4.0 * H * g.lap_inv_h -
                       (3.0 * z + z.square()) * g.margin;
  const Field normal = (2.0 * u2 * laplace_induced(s, w) +
                        4.0 * u2 * H * grad_inner_induced(s, w, g.inv_h) + w * growth) /
                       (2.0 * H.square());
  return normal + g.tau * s.grid->d_theta(w);
}

double diffusion_radius(const SliceGeometry& g, const Field& z) {
  const double n = g.s.grid->size();
  return n * (n - 1.0) * ((1.0 + z).square() / (g.s.mean_curv.square() * g.s.E)).maxCoeff();
}

}  // namespace

double lapse_scale(double t, double area0) {
  return 2.0 * std::exp(1.5 * t) * area0 / (4.0 * kPi);
}

Field shitam_rhs(const GraphSurface& s, const Field& z) {
  const Field inv_h = inverse_h_dev(s);
  const Field& H = s.mean_curv;
  const Field u2 = (1.0 + z).square();
  const Field q = positivity_margin(s);
  return (2.0 * u2 * laplace_induced(s, z) + 4.0 * u2 * H * grad_inner_induced(s, z, inv_h) -
          z * (1.0 + z) * (2.0 + z) * q) /
         (2.0 * H.square());
}

Field lapse_rate(const GraphSurface& s, const Field& w, double t, double area0) {
  SliceGeometry g{s, inverse_h_dev(s), {}, {}, tangential_speed(s)};
  g.lap_inv_h = laplace_induced(s, g.inv_h);
  g.margin = 2.0 * s.gauss_curv + 6.0 - 2.0 * s.mean_curv * g.lap_inv_h;
  return lapse_rate_on(g, w, lapse_scale(t, area0));
}

ShiTamResult run_shitam(const FlowTrace& trace, const ShiTamOptions& opt) {
  const auto& recs = trace.records;
  if (recs.size() < 2) throw DomainError("shitam: trace needs at least two records");
  ShiTamResult out;
  out.area0 = recs.front().diag.area;
  const double a0 = out.area0;

  SliceGeometry here = slice(trace, recs[0].rho);
  Field z0 = opt.z0 ? *opt.z0 : Field(here.s.mean_curv_dev / 2.0);
  if (z0.size() != here.s.rho.size()) throw DomainError("shitam: initial lapse has wrong size");
  if ((1.0 + z0).minCoeff() <= 0.0) throw DomainError("shitam: initial lapse must be positive");

  Field w = lapse_scale(0.0, a0) * z0;
  out.states.push_back({0.0, z0, w});

  std::vector<double> hp(recs.size()), hm(recs.size());
  const double sup_z0 = z0.maxCoeff();
  const double inf_z0 = z0.minCoeff();
  auto comparison_rates = [&](std::size_t k, const SliceGeometry& g) {
    if (g.margin.minCoeff() <= 0.0)
      throw HypothesisViolation("shitam: positivity margin lost at t = " + std::to_string(recs[k].t));
    const Field h = g.margin / (2.0 * g.s.mean_curv.square());
    hp[k] = h.maxCoeff();
    hm[k] = inf_z0 <= 0.0 ? hp[k] : h.minCoeff();
  };
  comparison_rates(0, here);

  for (std::size_t k = 0; k + 1 < recs.size(); ++k) {
    const double ta = recs[k].t, tb = recs[k + 1].t;
    SliceGeometry end = slice(trace, recs[k + 1].rho);
    const double lam = std::max(diffusion_radius(here, w / lapse_scale(ta, a0)),
                                diffusion_radius(end, w / lapse_scale(ta, a0)));
    const int sub = std::max(1, static_cast<int>(std::ceil((tb - ta) * lam / 2.5)));
    const double h = (tb - ta) / sub;
    SliceGeometry left = here;
    for (int j = 0; j < sub; ++j) {
      const double t = ta + j * h;
      const SliceGeometry mid = slice(trace, trace.rho_at(t + 0.5 * h));
      SliceGeometry right = (j + 1 == sub) ? end : slice(trace, trace.rho_at(t + h));
      const Field k1 = lapse_rate_on(left, w, lapse_scale(t, a0));
      const Field k2 = lapse_rate_on(mid, w + 0.5 * h * k1, lapse_scale(t + 0.5 * h, a0));
      const Field k3 = lapse_rate_on(mid, w + 0.5 * h * k2, lapse_scale(t + 0.5 * h, a0));
      const Field k4 = lapse_rate_on(right, w + h * k3, lapse_scale(t + h, a0));
      w += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!w.allFinite()) throw NumericalFailure("shitam: lapse became non-finite");
      left = std::move(right);
    }
    here = std::move(end);
    out.states.push_back({tb, w / lapse_scale(tb, a0), w});
    comparison_rates(k + 1, here);
  }

  ComparisonBounds& b = out.bounds;
  b.W_plus = comparison_constant(sup_z0);
  b.W_minus = comparison_constant(inf_z0);
  b.t.resize(recs.size());
  b.h_plus = hp;
  b.h_minus = hm;
  b.gamma_plus_dev.resize(recs.size());
  b.gamma_minus_dev.resize(recs.size());
  double ip = 0.0, im = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    if (k > 0) {
      const double dt = recs[k].t - recs[k - 1].t;
      ip += dt * (hp[k] + hp[k - 1]);
      im += dt * (hm[k] + hm[k - 1]);
    }
    b.t[k] = recs[k].t;
    b.gamma_plus_dev[k] = gamma_dev(b.W_plus * std::exp(-ip));
    b.gamma_minus_dev[k] = gamma_dev(b.W_minus * std::exp(-im));
    const Field& z = out.states[k].z;
    const double above = z.maxCoeff() - b.gamma_plus_dev[k];
    const double below = b.gamma_minus_dev[k] - z.minCoeff();
    out.sandwich_excess = std::max({out.sandwich_excess, above, below});
  }
  if (opt.enforce_sandwich && out.sandwich_excess > opt.sandwich_tol)
    throw NumericalFailure("shitam: lapse left the comparison band by " +
                           std::to_string(out.sandwich_excess));

  const std::size_t last = out.states.size() - 1;
  out.w_inf = out.states[last].w;
  const auto back = static_cast<std::size_t>(std::llround(1.0 / trace.spacing()));
  if (back <= last) out.w_cauchy = (out.w_inf - out.states[last - back].w).abs().maxCoeff();
  return out;
}

Field scalar_curvature_residual(const FlowTrace& trace, const ShiTamResult& lapse, std::size_t k) {
  const auto& recs = trace.records;
  if (k == 0 || k + 1 >= recs.size() || lapse.states.size() != recs.size())
    throw DomainError("scalar curvature residual: needs a record on each side");
  const double dt = recs[k + 1].t - recs[k].t;
  if (std::abs(dt - (recs[k].t - recs[k - 1].t)) > 1e-9 * dt)
    throw DomainError("scalar curvature residual: records are not equally spaced");

  auto v_dev = [&](std::size_t j, const GraphSurface& s) -> Field {
    return (2.0 * lapse.states[j].z - s.mean_curv_dev) / (2.0 * s.mean_curv);
  };
  const GraphSurface s = trace.surface(k);
  const Field vm = v_dev(k - 1, trace.surface(k - 1));
  const Field vp = v_dev(k + 1, trace.surface(k + 1));
  const Field v0 = v_dev(k, s);
  const Field dv = (vp - vm) / (2.0 * dt) - tangential_speed(s) * s.grid->d_theta(v0);

  const Field& z = lapse.states[k].z;
  const Field u = 1.0 + z;
  const Field v = 0.5 + v0;
  const Field& H = s.mean_curv;
  return 2.0 * s.gauss_curv + 1.5 * (2.0 * z - s.mean_curv_dev) * (2.0 * u + H) / u.square() -
         s.ring_a_sq / u.square() + 2.0 * dv / v.cube() - 2.0 * laplace_induced(s, v0) / v;
}

W0Diagnostic w0_khat_diagnostic(const GraphSurface& s0, const Field& z0) {
  const ColatitudeGrid& g = *s0.grid;
  const Field w0 = lapse_scale(0.0, s0.area) * z0;
  const double norm = std::sqrt(g.integrate(s0.khat.square()));
  W0Diagnostic d;
  d.misfit_factor1 = std::sqrt(g.integrate((w0 - s0.khat).square())) / norm;
  d.misfit_factor2 = std::sqrt(g.integrate((2.0 * w0 - s0.khat).square())) / norm;
  d.best_factor = d.misfit_factor1 <= d.misfit_factor2 ? 1 : 2;
  return d;
}

}  // namespace horoflow
