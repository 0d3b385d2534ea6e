#include "horoflow/ambient.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "horoflow/errors.hpp"
#include "horoflow/quadrature.hpp"

namespace horoflow {

namespace {

constexpr double kTableStep = 0.01;
constexpr int kMaxSubsteps = 1 << 12;

struct State {
  double phi;
  double dphi;
};

State rk4(const State& y, double h, double m) {
  auto f = [m](const State& s) {
    return State{s.dphi, s.phi + m / (2.0 * s.phi * s.phi)};
  };
  const State k1 = f(y);
  const State k2 = f({y.phi + 0.5 * h * k1.phi, y.dphi + 0.5 * h * k1.dphi});
  const State k3 = f({y.phi + 0.5 * h * k2.phi, y.dphi + 0.5 * h * k2.dphi});
  const State k4 = f({y.phi + h * k3.phi, y.dphi + h * k3.dphi});
  return {y.phi + h / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi),
          y.dphi + h / 6.0 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi)};
}

void integrate_table(double m, double h, int intervals, int sub, std::vector<double>& phi,
                     std::vector<double>& dphi) {
  phi.assign(intervals + 1, 0.0);
  dphi.assign(intervals + 1, 0.0);
  State y{m, m};
  phi[0] = y.phi;
  dphi[0] = y.dphi;
  const double hs = h / sub;
  for (int i = 1; i <= intervals; ++i) {
    for (int k = 0; k < sub; ++k) y = rk4(y, hs, m);
    phi[i] = y.phi;
    dphi[i] = y.dphi;
  }
}

double quintic_hermite(double x, double h, double y0, double d0, double s0, double y1, double d1,
                       double s1) {
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double h00 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
  const double h10 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
  const double h20 = 0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5);
  const double h01 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
  const double h11 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
  const double h21 = 0.5 * (x3 - 2.0 * x4 + x5);
  return y0 * h00 + h * d0 * h10 + h * h * s0 * h20 + y1 * h01 + h * d1 * h11 +
         h * h * s1 * h21;
}

}  // namespace

AmbientModel AmbientModel::build(double m, double r_max, double tol_ode) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("ambient: mass must be positive");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw DomainError("ambient: r_max must be positive");
  if (!(tol_ode > 0.0)) throw DomainError("ambient: tol_ode must be positive");

  AmbientModel model;
  model.m_ = m;
  model.t0_ = m;
  model.r_max_ = r_max;
  model.tol_ode_ = tol_ode;
  const int intervals = std::max(1, static_cast<int>(std::ceil(r_max / kTableStep)));
  model.h_ = r_max / intervals;

  // Step doubling: halve the RK4 substep until the relative change of phi(r_max)
  // is below tol_ode, then keep the finer table.
  std::vector<double> coarse_phi, coarse_dphi, fine_phi, fine_dphi;
  int sub = 1;
  integrate_table(m, model.h_, intervals, sub, coarse_phi, coarse_dphi);
  while (true) {
    if (2 * sub > kMaxSubsteps)
      throw NumericalFailure("ambient: warp ODE did not reach tol_ode = " + std::to_string(tol_ode));
    integrate_table(m, model.h_, intervals, 2 * sub, fine_phi, fine_dphi);
    const double a = coarse_phi.back(), b = fine_phi.back();
    const double da = coarse_dphi.back(), db = fine_dphi.back();
    const double change = std::max(std::abs(a - b) / std::abs(b), std::abs(da - db) / std::abs(db));
    sub *= 2;
    std::swap(coarse_phi, fine_phi);
    std::swap(coarse_dphi, fine_dphi);
    if (change <= tol_ode) break;
  }
  model.substeps_ = sub;
  model.phi_ = std::move(coarse_phi);
  model.dphi_ = std::move(coarse_dphi);
  model.shift_ = std::asinh(m) - model.tail_integral(m);
  return model;
}

WarpSample AmbientModel::warp(double r) const {
  if (!(r >= 0.0 && r <= r_max_))
    throw DomainError("ambient: r = " + std::to_string(r) + " outside [0, " +
                      std::to_string(r_max_) + "]");
  const std::size_t last = phi_.size() - 1;
  std::size_t i = std::min(static_cast<std::size_t>(r / h_), last - 1);
  const double x = (r - i * h_) / h_;
  const double m = m_;
  auto dd = [m](double p) { return p + m / (2.0 * p * p); };
  auto ddd = [m](double p, double dp) { return dp * (1.0 - m / (p * p * p)); };
  const double p0 = phi_[i], p1 = phi_[i + 1];
  const double d0 = dphi_[i], d1 = dphi_[i + 1];
  WarpSample s{};
  s.phi = quintic_hermite(x, h_, p0, d0, dd(p0), p1, d1, dd(p1));
  s.dphi = quintic_hermite(x, h_, d0, dd(p0), ddd(p0, d0), d1, dd(p1), ddd(p1, d1));
  s.ddphi = dd(s.phi);
  s.dphi_minus_phi = (1.0 - m / s.phi) / (s.dphi + s.phi);
  return s;
}

double AmbientModel::coordinate_sphere_mean_curvature(double r) const {
  const WarpSample s = warp(r);
  return 2.0 * s.dphi / s.phi;
}

AmbientCurvature AmbientModel::curvature(double r) const {
  const WarpSample s = warp(r);
  const double p = s.phi;
  AmbientCurvature c{};
  c.sect_radial = -s.ddphi / p;
  c.sect_spherical = (1.0 - s.dphi * s.dphi) / (p * p);
  c.ricci_radial = 2.0 * c.sect_radial;
  c.ricci_tangential = c.sect_radial + c.sect_spherical;
  c.scalar = c.ricci_radial + 2.0 * c.ricci_tangential;
  return c;
}

double AmbientModel::tail_integral(double t) const {
  if (!(t >= t0_)) throw DomainError("ambient: tail integral needs t >= t0");
  // Substitute x = t/u on u in (0, 1]; the integrand behaves like m u^2/(2 t^3)
  // near u = 0, so composite Gauss-Legendre converges quickly.
  static const GaussLegendreRule rule = gauss_legendre(16);
  constexpr int panels = 24;
  const double m = m_;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double b = static_cast<double>(p + 1) / panels;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double u = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k];
      const double x = t / u;
      const double va = 1.0 + x * x - m / x;
      const double vb = 1.0 + x * x;
      const double sa = std::sqrt(va), sb = std::sqrt(vb);
      const double g = (m / x) / (sa * sb * (sa + sb));
      sum += 0.5 * (b - a) * rule.weights[k] * g * t / (u * u);
    }
  }
  return sum;
}

double AmbientModel::r_of_t(double t) const {
  if (!(t >= t0_)) throw DomainError("ambient: r_of_t needs t >= t0");
  return std::asinh(t) - tail_integral(t) - shift_;
}

}  // namespace horoflow
