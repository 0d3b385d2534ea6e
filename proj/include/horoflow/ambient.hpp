#pragma once

#include <cstddef>
#include <vector>

namespace horoflow {

struct WarpSample {
  double phi;
  double dphi;
  double ddphi;
  // phi' - phi, from (phi'^2 - phi^2) = 1 - m/phi so it keeps full relative
  // precision when both are large.
  double dphi_minus_phi;
};

struct AmbientCurvature {
  double ricci_radial;
  double ricci_tangential;
  double scalar;
  double sect_radial;
  double sect_spherical;
};

// AdS-Schwarzschild exterior written as dr^2 + phi(r)^2 g_0, with r = 0 on the
// sphere where phi = t0 = m (the coordinate sphere with H = 2).
//
// phi is tabulated once by integrating phi'' = phi + m/(2 phi^2) and is then
// evaluated by quintic Hermite interpolation.
class AmbientModel {
 public:
  static AmbientModel build(double m, double r_max = 20.0, double tol_ode = 1e-11);

  double mass() const noexcept { return m_; }
  double t0() const noexcept { return t0_; }
  double r_max() const noexcept { return r_max_; }
  double tol_ode() const noexcept { return tol_ode_; }
  double table_step() const noexcept { return h_; }
  std::size_t table_size() const noexcept { return phi_.size(); }
  // RK4 substeps per table interval that met tol_ode.
  int substeps() const noexcept { return substeps_; }

  WarpSample warp(double r) const;
  double phi(double r) const { return warp(r).phi; }

  // 2 phi'/phi on {r = const}.
  double coordinate_sphere_mean_curvature(double r) const;
  AmbientCurvature curvature(double r) const;

  // r(t) = int_{t0}^t dx / sqrt(1 + x^2 - m/x), by quadrature.
  double r_of_t(double t) const;
  // phi(r), by the table.
  double t_of_r(double r) const { return phi(r); }

  // Constant c with phi(r) = sinh(r + c) + O(e^{-2r}). The coordinate r + c
  // is the one in which the metric is sinh^2 + m/(3 sinh) + ... at infinity.
  double asymptotic_shift() const noexcept { return shift_; }

  // int_t^infty [1/sqrt(1 + x^2 - m/x) - 1/sqrt(1 + x^2)] dx.
  double tail_integral(double t) const;

 private:
  AmbientModel() = default;
  double m_ = 0.0;
  double t0_ = 0.0;
  double r_max_ = 0.0;
  double tol_ode_ = 0.0;
  double h_ = 0.0;
  double shift_ = 0.0;
  int substeps_ = 0;
  std::vector<double> phi_;
  std::vector<double> dphi_;
};

}  // namespace horoflow
