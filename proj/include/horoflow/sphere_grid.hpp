#pragma once

#include <Eigen/Dense>

namespace horoflow {

// Values of an axisymmetric function at the grid nodes.
using Field = Eigen::ArrayXd;

// Colatitude grid on S^2 for axisymmetric fields: Gauss-Legendre nodes in
// mu = cos(theta), ascending. Integrals include the 2 pi from the azimuth.
class ColatitudeGrid {
 public:
  // n even, n >= 8.
  static ColatitudeGrid build(int n);

  int size() const noexcept { return n_; }
  const Field& mu() const noexcept { return mu_; }
  const Field& weights() const noexcept { return w_; }
  const Field& sin_theta() const noexcept { return sin_; }
  const Field& sin_sq() const noexcept { return sin2_; }

  double integrate(const Field& f) const;
  double mean(const Field& f) const;  // integral / (4 pi)

  // d/dmu and d/dtheta = -sin(theta) d/dmu, by barycentric differentiation.
  Field d_mu(const Field& f) const;
  Field d_theta(const Field& f) const;
  // Round Laplacian d/dmu((1 - mu^2) d/dmu).
  Field laplace_round(const Field& f) const;

  // a_l = (2l + 1)/2 sum_k w_k f_k P_l(mu_k), l = 0..l_max, l_max < n/2.
  Eigen::VectorXd legendre_coeffs(const Field& f, int l_max) const;
  Field legendre_synth(const Eigen::VectorXd& coeffs) const;
  Field legendre(int l) const;

  const Eigen::MatrixXd& diff_mu_matrix() const noexcept { return dmu_; }

 private:
  ColatitudeGrid() = default;
  void check(const Field& f) const;

  int n_ = 0;
  Field mu_, w_, sin_, sin2_;
  Eigen::MatrixXd dmu_;
  Eigen::MatrixXd pl_;  // pl_(k, l) = P_l(mu_k), l < n
};

}  // namespace horoflow
