#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "horoflow/errors.hpp"
#include "horoflow/sphere_grid.hpp"
#include "oracles.hpp"

using horoflow::ColatitudeGrid;
using horoflow::Field;
constexpr double kPi = std::numbers::pi;

TEST_CASE("quadrature integrates constants and x3^2 exactly") {
  for (int n : {8, 32, 96, 128}) {
    const auto g = ColatitudeGrid::build(n);
    CHECK(std::abs(g.integrate(Field::Ones(n)) - 4 * kPi) <= 1e-13);
    CHECK(std::abs(g.integrate(g.mu().square()) - 4 * kPi / 3) <= 1e-13);
    CHECK(std::abs(g.integrate(g.mu())) <= 1e-14);
  }
}

TEST_CASE("Legendre polynomials are Laplace eigenfunctions") {
  const auto g = ColatitudeGrid::build(96);
  for (int l = 0; l <= 48; ++l) {
    const Field p = g.legendre(l);
    const Field lp = g.laplace_round(p);
    const double lam = -l * (l + 1.0);
    const double scale = std::max(1.0, std::abs(lam)) * p.abs().maxCoeff();
    CHECK((lp - lam * p).abs().maxCoeff() / scale <= 1e-9);
  }
  for (int l = 0; l <= 4; ++l) {
    Field ref(96);
    for (int k = 0; k < 96; ++k) ref(k) = oracle::legendre(l, g.mu()(k));
    CHECK((g.legendre(l) - ref).abs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("Laplacian of a smooth field integrates to zero") {
  const auto g = ColatitudeGrid::build(96);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const Field f = (a * g.mu() + b * g.mu().square()).exp() + c * (3 * g.mu()).sin();
    const Field lf = g.laplace_round(f);
    CHECK(std::abs(g.integrate(lf)) / g.integrate(lf.abs()) <= 1e-10);
  }
}

TEST_CASE("derivatives of polynomials are exact") {
  const auto g = ColatitudeGrid::build(64);
  const Field& mu = g.mu();
  CHECK((g.d_mu(mu.cube()) - 3 * mu.square()).abs().maxCoeff() <= 1e-11);
  // d/dtheta cos(theta) = -sin(theta)
  CHECK((g.d_theta(mu) + g.sin_theta()).abs().maxCoeff() <= 1e-12);
  CHECK(g.d_mu(Field::Constant(64, 7.5)).abs().maxCoeff() <= 1e-13);
}

TEST_CASE("Legendre analysis and synthesis round trip") {
  const auto g = ColatitudeGrid::build(96);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(7);
  c << 0.1, -0.2, 0.3, 0.0, 0.05, -0.01, 0.02;
  const Field f = g.legendre_synth(c);
  const Eigen::VectorXd back = g.legendre_coeffs(f, 6);
  CHECK((back - c).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(g.legendre_coeffs(f, 48), horoflow::DomainError);
}

namespace {
double exp_cos_error(int n) {
  const auto g = ColatitudeGrid::build(n);
  const Field& mu = g.mu();
  const Field exact = (1.0 - mu.square() - 2.0 * mu) * mu.exp();
  return (g.laplace_round(mu.exp()) - exact).abs().maxCoeff();
}
}  // namespace

TEST_CASE("spectral convergence of the round Laplacian on exp(cos theta)") {
  // Truncation regime: a coarse grid resolves exp(mu) only to a few digits.
  CHECK(exp_cos_error(16) <= 0.1 * exp_cos_error(8));
  // From n = 32 on the truncation error is below double rounding, so the
  // error can only sit at the rounding floor.
  CHECK(exp_cos_error(32) <= 1e-11);
  CHECK(exp_cos_error(64) <= 1e-11);
}

TEST_CASE("grid rejects bad sizes and mismatched fields") {
  CHECK_THROWS_AS(ColatitudeGrid::build(7), horoflow::DomainError);
  CHECK_THROWS_AS(ColatitudeGrid::build(6), horoflow::DomainError);
  const auto g = ColatitudeGrid::build(16);
  CHECK_THROWS_AS(g.integrate(Field::Ones(8)), horoflow::DomainError);
  CHECK_THROWS_AS(g.laplace_round(Field::Ones(8)), horoflow::DomainError);
}
