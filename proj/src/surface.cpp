#include "horoflow/surface.hpp"

#include <cmath>
#include <numbers>

#include "horoflow/errors.hpp"

namespace horoflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

GraphSurface build_surface(const AmbientModel& ambient, const ColatitudeGrid& grid,
                           const Field& rho) {
  if (rho.size() != grid.size()) throw DomainError("surface: rho does not match the grid");
  if (!rho.allFinite()) throw DomainError("surface: rho is not finite");
  const int n = grid.size();
  const double m = ambient.mass();

  GraphSurface s;
  s.ambient = &ambient;
  s.grid = &grid;
  s.rho = rho;
  s.phi.resize(n);
  s.dphi.resize(n);
  Field rel_dev(n);  // phi'/phi - 1
  for (int k = 0; k < n; ++k) {
    const WarpSample w = ambient.warp(rho(k));
    s.phi(k) = w.phi;
    s.dphi(k) = w.dphi;
    rel_dev(k) = w.dphi_minus_phi / w.phi;
  }
  const Field& mu = grid.mu();
  const Field& sin2 = grid.sin_sq();
  const Field phi2 = s.phi.square();

  s.rho_mu = grid.d_mu(rho);
  s.rho_theta = -grid.sin_theta() * s.rho_mu;
  s.rho_thth = sin2 * grid.d_mu(s.rho_mu) - mu * s.rho_mu;

  s.slope_sq = sin2 * s.rho_mu.square() / phi2;
  const Field& q = s.slope_sq;
  s.W = (1.0 + q).sqrt();
  s.nu_dr = 1.0 / s.W;
  s.one_minus_nu_dr = q / (s.W * (s.W + 1.0));
  s.E = phi2 * s.W.square();
  s.G = phi2 * sin2;

  const Field W3 = s.W.cube();
  const Field c1 = 1.0 + 2.0 * q;
  const Field c1_minus_w3 = (q + q.square() - q.cube()) / (c1 + W3);
  s.kappa1_dev = (rel_dev * c1 + c1_minus_w3 - s.rho_thth / phi2) / W3;
  s.kappa2_dev = rel_dev / s.W - s.one_minus_nu_dr + mu * s.rho_mu / (s.W * phi2);
  s.kappa1 = 1.0 + s.kappa1_dev;
  s.kappa2 = 1.0 + s.kappa2_dev;
  s.a_thth = s.kappa1 * s.E;
  s.a_phph = s.kappa2 * s.G;
  s.mean_curv_dev = s.kappa1_dev + s.kappa2_dev;
  s.mean_curv = 2.0 + s.mean_curv_dev;
  s.h2_minus_4 = s.mean_curv_dev * (4.0 + s.mean_curv_dev);
  s.a_sq = s.kappa1.square() + s.kappa2.square();
  s.ring_a_sq = 0.5 * (s.kappa1_dev - s.kappa2_dev).square();

  const Field ratio = s.dphi / s.phi;
  const Field flux = (mu - ratio * sin2 * s.rho_mu) / s.W;
  s.gauss_curv = grid.d_mu(flux) / (phi2 * s.W);

  const Field mphi3 = m / (phi2 * s.phi);
  s.gauss_curv_ext = (q / s.W.square()) * (-1.5 * mphi3) + mphi3 + s.kappa1_dev +
                     s.kappa2_dev + s.kappa1_dev * s.kappa2_dev;
  s.ricci_normal_excess = (-mphi3 + q * 0.5 * mphi3) / s.W.square();

  s.area_density = phi2 * s.W;
  s.area = grid.integrate(s.area_density);
  s.rhat = std::asinh(std::sqrt(s.area / (4.0 * kPi)));
  s.profile = rho + ambient.asymptotic_shift() - s.rhat;
  s.khat = (s.area / (4.0 * kPi)) * s.gauss_curv;
  return s;
}

double integrate_on(const GraphSurface& s, const Field& f) {
  return s.grid->integrate(f * s.area_density);
}

double hawking_mass(const GraphSurface& s) {
  const double c = std::pow(16.0 * kPi, 1.5);
  return std::sqrt(s.area) / c * (16.0 * kPi - integrate_on(s, s.h2_minus_4));
}

Field laplace_induced(const GraphSurface& s, const Field& u) {
  const ColatitudeGrid& g = *s.grid;
  const Field inv_w = 1.0 / s.W;
  const Field d_inv_w = -g.d_mu(s.one_minus_nu_dr);
  const Field div = inv_w * g.laplace_round(u) + g.sin_sq() * g.d_mu(u) * d_inv_w;
  return div / (s.phi.square() * s.W);
}

Field grad_inner_induced(const GraphSurface& s, const Field& a, const Field& b) {
  const ColatitudeGrid& g = *s.grid;
  return g.sin_sq() * g.d_mu(a) * g.d_mu(b) / s.E;
}

Field expansion_residual(const GraphSurface& s) {
  const double m = s.ambient->mass();
  const Field sh = (s.rho + s.ambient->asymptotic_shift()).sinh();
  return s.h2_minus_4 - 4.0 * s.gauss_curv - 2.0 * s.ring_a_sq + 4.0 * m / sh.cube();
}

double normalized_area_ratio(const GraphSurface& s, double q0) {
  const double sh = std::sinh(q0);
  return s.area / (4.0 * kPi * sh * sh);
}

HypothesisReport hypothesis_report(const GraphSurface& s, double eps0, double delta0,
                                   double q_max) {
  HypothesisReport r;
  r.min_h = s.mean_curv.minCoeff();
  r.min_nu_dr = s.nu_dr.minCoeff();
  r.max_ring_ratio = (s.ring_a_sq / s.mean_curv.square()).maxCoeff();
  r.q0 = s.area * s.h2_minus_4.abs().maxCoeff();
  r.q1 = s.area * s.one_minus_nu_dr.maxCoeff();
  r.q2 = s.area * s.area * s.ring_a_sq.maxCoeff();
  r.inside_domain = s.rho.minCoeff() >= 0.0 && s.rho.maxCoeff() <= s.ambient->r_max();
  r.h_bound = r.min_h >= eps0;
  r.nu_bound = r.min_nu_dr >= eps0;
  r.ring_bound = (s.ring_a_sq <= (0.25 - delta0) * s.mean_curv.square()).all();
  r.q_bounds = r.q0 <= q_max && r.q1 <= q_max && r.q2 <= q_max;
  return r;
}

}  // namespace horoflow
