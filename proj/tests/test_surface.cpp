#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "horoflow/errors.hpp"
#include "horoflow/surface.hpp"
#include "oracles.hpp"

using namespace horoflow;
constexpr double kPi = std::numbers::pi;

namespace {
const AmbientModel& model2() {
  static const AmbientModel m = AmbientModel::build(2.0);
  return m;
}
const ColatitudeGrid& grid96() {
  static const ColatitudeGrid g = ColatitudeGrid::build(96);
  return g;
}
Field p2(const ColatitudeGrid& g) { return 0.5 * (3.0 * g.mu().square() - 1.0); }
}  // namespace

TEST_CASE("coordinate spheres: umbilic, H = 2 phi'/phi, Hawking mass m/2") {
  const auto& g = grid96();
  for (double m : {1.0, 2.0, 5.0}) {
    const auto model = AmbientModel::build(m);
    for (double r : {0.0, 1.0, 3.0, 6.0, 12.0}) {
      const auto s = build_surface(model, g, Field::Constant(96, r));
      const double p = oracle::warp_first_order(m, r, 4000);
      const double h_ref = 2.0 * std::sqrt(1.0 + p * p - m / p) / p;
      CHECK(std::abs(s.mean_curv(0) - h_ref) <= 1e-10);
      CHECK(s.ring_a_sq.abs().maxCoeff() <= 1e-28);
      CHECK(std::abs(s.area / (4 * kPi * p * p) - 1.0) <= 1e-10);
      CHECK(std::abs(hawking_mass(s) - 0.5 * m) <= 1e-9);
      // rho + c - asinh(phi) = -T(phi), the tail integral at the area radius.
      CHECK((s.profile + model.tail_integral(p)).abs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("principal curvatures match the direct second fundamental form") {
  const auto& g = grid96();
  const auto s = build_surface(model2(), g, 1.0 + 0.2 * p2(g));
  // Direct, unsimplified formulas.
  const Field rp2 = s.rho_theta.square();
  const Field athth = (s.phi * s.dphi + 2 * rp2 * s.dphi / s.phi - s.rho_thth) /
                      (1 + rp2 / s.phi.square()).sqrt();
  const Field k1 = athth / (rp2 + s.phi.square());
  CHECK((s.kappa1 - k1).abs().maxCoeff() <= 1e-12);
  const Field k2 = (s.phi * s.dphi + g.mu() * s.rho_mu) / (s.W * s.phi.square());
  CHECK((s.kappa2 - k2).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("intrinsic and Gauss-equation curvatures agree") {
  const auto& g = grid96();
  const auto far = build_surface(model2(), g, 6.0 + 0.3 * p2(g));
  CHECK((far.gauss_curv - far.gauss_curv_ext).abs().maxCoeff() <= 1e-7);
  const auto near = build_surface(model2(), g, 1.0 + 0.2 * p2(g));
  const double scale = near.gauss_curv.abs().maxCoeff();
  CHECK((near.gauss_curv - near.gauss_curv_ext).abs().maxCoeff() / scale <= 1e-9);
}

TEST_CASE("Gauss-Bonnet and self-adjointness of the induced Laplacian") {
  const auto& g = grid96();
  for (double a : {0.1, 0.3, 0.6}) {
    const auto s = build_surface(model2(), g, 2.0 + a * p2(g) + 0.1 * a * g.mu());
    CHECK(std::abs(integrate_on(s, s.gauss_curv) - 4 * kPi) <= 1e-9);
    const Field u = (g.mu()).exp();
    const Field v = g.mu().square() + 0.3 * g.mu();
    const double lhs = integrate_on(s, u * laplace_induced(s, v));
    const double rhs = integrate_on(s, v * laplace_induced(s, u));
    const double gr = -integrate_on(s, grad_inner_induced(s, u, v));
    CHECK(std::abs(lhs - rhs) <= 1e-7 * std::abs(lhs));
    CHECK(std::abs(lhs - gr) <= 1e-7 * std::abs(lhs));
  }
}

TEST_CASE("induced Laplacian on a coordinate sphere is the scaled round one") {
  const auto& g = grid96();
  const auto s = build_surface(model2(), g, Field::Constant(96, 2.0));
  const Field u = g.legendre(3);
  const double p = s.phi(0);
  CHECK((laplace_induced(s, u) + 12.0 * u / (p * p)).abs().maxCoeff() <= 1e-10 / (p * p) * 12);
}

TEST_CASE("Hawking mass is exact in deviation form far out") {
  const auto& g = grid96();
  // phi(12) is about 3e5; the naive H = 2 phi'/phi would leave no correct digit.
  const auto s = build_surface(model2(), g, Field::Constant(96, 12.0));
  CHECK(std::abs(hawking_mass(s) - 1.0) <= 1e-9);
}

TEST_CASE("Gauss-equation residual decays like e^{-5s}") {
  const auto& g = grid96();
  std::vector<double> rs, vs;
  for (double r = 2.0; r <= 5.01; r += 0.5) {
    const auto s = build_surface(model2(), g, r + 0.3 * p2(g));
    rs.push_back(r);
    vs.push_back(expansion_residual(s).abs().maxCoeff());
  }
  const auto fit = oracle::log_slope(rs, vs);
  CHECK(fit.slope == doctest::Approx(-5.0).epsilon(0.1));
}

TEST_CASE("hypothesis audit") {
  const auto& g = grid96();
  const auto good = build_surface(model2(), g, 6.0 + 0.3 * p2(g));
  const auto rep = hypothesis_report(good, 0.5, 0.1, 1000.0);
  CHECK(rep.passes());
  // Any non-round graph has <nu, d_r> < 1 somewhere.
  CHECK(rep.min_nu_dr < 1.0);
  CHECK_FALSE(hypothesis_report(good, 1.0, 0.1).passes());
  // A large-amplitude graph stays pointwise tame but its scale-invariant
  // quantities blow past bounds that the mild graph meets.
  const auto wild = build_surface(model2(), g, 2.0 + 1.5 * p2(g));
  const auto bad = hypothesis_report(wild, 0.5, 0.1, 1000.0);
  CHECK_FALSE(bad.passes());
  CHECK_FALSE(bad.q_bounds);
}

TEST_CASE("normalized area ratio tends to one for round spheres in the asymptotic coordinate") {
  const auto& g = grid96();
  const double c = model2().asymptotic_shift();
  double prev = 1.0;
  for (double q0 : {4.0, 6.0, 8.0}) {
    const auto s = build_surface(model2(), g, Field::Constant(96, q0 - c));
    const double dev = std::abs(normalized_area_ratio(s, q0) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 1e-6);
}

TEST_CASE("surfaces outside the tabulated range are rejected") {
  const auto& g = grid96();
  CHECK_THROWS_AS(build_surface(model2(), g, Field::Constant(96, -0.5)), DomainError);
  CHECK_THROWS_AS(build_surface(model2(), g, Field::Constant(96, 25.0)), DomainError);
  CHECK_THROWS_AS(build_surface(model2(), g, Field::Constant(32, 2.0)), DomainError);
}
