#include "horoflow/sphere_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "horoflow/errors.hpp"
#include "horoflow/quadrature.hpp"

namespace horoflow {

ColatitudeGrid ColatitudeGrid::build(int n) {
  if (n < 8 || n % 2 != 0)
    throw DomainError("grid: n must be even and at least 8, got " + std::to_string(n));
  ColatitudeGrid g;
  g.n_ = n;
  const GaussLegendreRule rule = gauss_legendre(n);
  g.mu_ = Eigen::Map<const Field>(rule.nodes.data(), n);
  g.w_ = Eigen::Map<const Field>(rule.weights.data(), n);
  g.sin2_ = (1.0 - g.mu_) * (1.0 + g.mu_);
  g.sin_ = g.sin2_.sqrt();

  Eigen::ArrayXd lambda(n);
  for (int j = 0; j < n; ++j)
    lambda(j) = ((j % 2 == 0) ? 1.0 : -1.0) * std::sqrt(g.sin2_(j) * g.w_(j));
  g.dmu_ = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (lambda(j) / lambda(i)) / (g.mu_(i) - g.mu_(j));
      g.dmu_(i, j) = d;
      diag -= d;
    }
    g.dmu_(i, i) = diag;
  }

  g.pl_.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const auto p = legendre_values(n - 1, g.mu_(k));
    for (int l = 0; l < n; ++l) g.pl_(k, l) = p[l];
  }
  return g;
}

void ColatitudeGrid::check(const Field& f) const {
  if (f.size() != n_)
    throw DomainError("grid: field has " + std::to_string(f.size()) + " values, grid has " +
                      std::to_string(n_));
}

double ColatitudeGrid::integrate(const Field& f) const {
  check(f);
  return 2.0 * std::numbers::pi * (w_ * f).sum();
}

double ColatitudeGrid::mean(const Field& f) const {
  check(f);
  return 0.5 * (w_ * f).sum();
}

// Constants are removed before the matrix products: both operators annihilate
// them, and a large constant part would otherwise dominate the rounding error.
Field ColatitudeGrid::d_mu(const Field& f) const {
  check(f);
  const Eigen::VectorXd centred = (f - mean(f)).matrix();
  return (dmu_ * centred).array();
}

Field ColatitudeGrid::d_theta(const Field& f) const { return -sin_ * d_mu(f); }

// Expanded form (1 - mu^2) f'' - 2 mu f'. Its rounding error grows like n^2,
// against n^4 for a precomputed Legendre-diagonal matrix.
Field ColatitudeGrid::laplace_round(const Field& f) const {
  const Field f1 = d_mu(f);
  return sin2_ * d_mu(f1) - 2.0 * mu_ * f1;
}

Eigen::VectorXd ColatitudeGrid::legendre_coeffs(const Field& f, int l_max) const {
  check(f);
  if (l_max < 0 || 2 * l_max >= n_)
    throw DomainError("grid: l_max must satisfy 0 <= l_max < n/2");
  Eigen::VectorXd a(l_max + 1);
  for (int l = 0; l <= l_max; ++l)
    a(l) = 0.5 * (2.0 * l + 1.0) * (w_ * f * pl_.col(l).array()).sum();
  return a;
}

Field ColatitudeGrid::legendre_synth(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() > n_) throw DomainError("grid: more coefficients than nodes");
  return (pl_.leftCols(coeffs.size()) * coeffs).array();
}

Field ColatitudeGrid::legendre(int l) const {
  if (l < 0 || l >= n_) throw DomainError("grid: Legendre degree out of range");
  return pl_.col(l).array();
}

}  // namespace horoflow
