#include "horoflow/mass.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "horoflow/errors.hpp"

namespace horoflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* to_string(LapseScaling s) { return s == LapseScaling::W ? "w" : "2w"; }

MassAspect build_mass_aspect(double m, double area0, const Field& f_inf, const Field& w_inf,
                             LapseScaling scaling) {
  if (f_inf.size() != w_inf.size()) throw DomainError("mass aspect: field sizes differ");
  const double k = scaling == LapseScaling::W ? 1.0 : 2.0;
  MassAspect a;
  a.p = m + std::sqrt(area0 / (4.0 * kPi)) * (3.0 * f_inf).exp() * (k * w_inf);
  a.trace_h = 2.0 * a.p;
  return a;
}

MassVector total_mass(const ColatitudeGrid& grid, const Field& trace_h) {
  // Axisymmetric fields: the x_1, x_2 moments are azimuthal integrals of
  // cos and sin against a function of mu alone, done here by the trapezoid
  // rule, which is exact for them.
  constexpr int n_az = 8;
  double c = 0.0, s = 0.0;
  for (int j = 0; j < n_az; ++j) {
    const double ang = 2.0 * kPi * j / n_az;
    c += std::cos(ang) / n_az;
    s += std::sin(ang) / n_az;
  }
  const double radial = grid.integrate(trace_h * grid.sin_theta());
  MassVector v;
  v.moment[0] = grid.integrate(trace_h);
  v.moment[1] = radial * c;
  v.moment[2] = radial * s;
  v.moment[3] = grid.integrate(trace_h * grid.mu());
  const double sq = v.moment[0] * v.moment[0] - v.moment[1] * v.moment[1] -
                    v.moment[2] * v.moment[2] - v.moment[3] * v.moment[3];
  if (sq < 0.0 || v.moment[0] < 0.0)
    throw DomainError("total mass: energy-momentum vector is not future timelike");
  v.mass = std::sqrt(sq) / (16.0 * kPi);
  return v;
}

double hawking_limit(const ColatitudeGrid& grid, const Field& f, double m) {
  return 0.5 * m * std::sqrt(grid.mean((2.0 * f).exp())) * grid.mean((-f).exp());
}

Field conformal_gauss_curvature(const ColatitudeGrid& grid, const Field& f) {
  return (-2.0 * f).exp() * (1.0 - grid.laplace_round(f));
}

Field normalize_profile(const ColatitudeGrid& grid, const Field& f) {
  return f - 0.5 * std::log(grid.mean((2.0 * f).exp()));
}

InequalityReport penrose_functional(const ColatitudeGrid& grid, const Field& f) {
  const Field density = conformal_gauss_curvature(grid, f) * (3.0 * f).exp();
  const double e = grid.mean(density);
  const double p = grid.mean(density * grid.mu());
  InequalityReport r;
  r.value = e * e - p * p;
  r.margin = r.value - 1.0;
  r.normalization = grid.mean((2.0 * f).exp()) - 1.0;
  return r;
}

Field mobius_profile(const ColatitudeGrid& grid, double a) {
  if (!(std::abs(a) < 1.0)) throw DomainError("mobius: need |a| < 1");
  const Field f = std::log1p(-a * a) - (1.0 - 2.0 * a * grid.mu() + a * a).log();
  const double norm = grid.mean((2.0 * f).exp()) - 1.0;
  const double curv = (conformal_gauss_curvature(grid, f) - 1.0).abs().maxCoeff();
  if (std::abs(norm) > 1e-9 || curv > 1e-8)
    throw ConsistencyError("mobius: grid of " + std::to_string(grid.size()) +
                           " nodes does not resolve a = " + std::to_string(a));
  return f;
}

MinimizeResult minimize_I(const ColatitudeGrid& grid, const Field& f_init,
                          const MinimizeOptions& opt) {
  if (opt.l_max < 1 || 2 * opt.l_max >= grid.size())
    throw DomainError("minimize_I: l_max must satisfy 1 <= l_max < n/2");
  if (opt.iters < 0) throw DomainError("minimize_I: negative iteration count");
  Eigen::MatrixXd basis(grid.size(), opt.l_max);
  for (int l = 1; l <= opt.l_max; ++l) basis.col(l - 1) = grid.legendre(l).matrix();
  auto profile = [&](const Eigen::VectorXd& c) {
    return normalize_profile(grid, f_init + (basis * c).array());
  };
  auto value = [&](const Eigen::VectorXd& c) { return penrose_functional(grid, profile(c)).value; };

  MinimizeResult res;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(opt.l_max);
  double val = value(c);
  res.trajectory.push_back(val);
  double alpha = 1.0;
  for (int it = 0; it < opt.iters; ++it) {
    Eigen::VectorXd grad(opt.l_max);
    for (int i = 0; i < opt.l_max; ++i) {
      Eigen::VectorXd cp = c, cm = c;
      cp(i) += opt.fd_step;
      cm(i) -= opt.fd_step;
      grad(i) = (value(cp) - value(cm)) / (2.0 * opt.fd_step);
    }
    const double g2 = grad.squaredNorm();
    if (g2 < 1e-24) break;
    alpha = std::min(1.0, 2.0 * alpha);
    bool accepted = false;
    while (alpha > 1e-14) {
      const Eigen::VectorXd trial = c - alpha * grad;
      const double tv = value(trial);
      if (tv <= val - 1e-4 * alpha * g2) {
        c = trial;
        val = tv;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    res.trajectory.push_back(val);
    res.iterations = it + 1;
  }
  for (std::size_t i = 1; i < res.trajectory.size(); ++i)
    if (res.trajectory[i] > res.trajectory[i - 1])
      throw NumericalFailure("minimize_I: objective increased along the descent");
  res.coeffs = c;
  res.f_best = profile(c);
  res.value = val;
  res.violation = val < 1.0 - opt.violation_threshold;
  return res;
}

Field random_profile(const ColatitudeGrid& grid, int l_max, double sup, std::uint64_t seed) {
  if (l_max < 0 || l_max >= grid.size()) throw DomainError("random_profile: bad degree");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-sup, sup);
  Eigen::VectorXd c(l_max + 1);
  for (int l = 0; l <= l_max; ++l) c(l) = dist(rng);
  return normalize_profile(grid, grid.legendre_synth(c));
}

double hawking_mass_lapse(const GraphSurface& s, const Field& z) {
  const Field dev = (s.mean_curv_dev - 2.0 * z) / (1.0 + z);
  const Field h2m4 = dev * (4.0 + dev);
  return std::sqrt(s.area) / std::pow(16.0 * kPi, 1.5) * (16.0 * kPi - integrate_on(s, h2m4));
}

std::vector<MassRatioRow> mass_ratio_limit_check(const AmbientModel& ambient,
                                                 const ColatitudeGrid& grid, const Field& f,
                                                 const std::vector<double>& r0s,
                                                 const ImcfConfig& config) {
  const double c = ambient.asymptotic_shift();
  const double m = ambient.mass();
  const InequalityReport ineq = penrose_functional(grid, f);
  std::vector<MassRatioRow> rows;
  for (double r0 : r0s) {
    const FlowTrace trace = run_imcf(ambient, grid, r0 + f - c, config);
    const ShiTamResult lapse = run_shitam(trace);
    const FInfinity finf = extract_f_infinity(trace);
    MassRatioRow row;
    row.r0 = r0;
    row.area0 = lapse.area0;
    row.m_hawking0 = trace.records.front().diag.m_hawking;
    row.hawking_limit = hawking_limit(grid, f, m);
    for (LapseScaling sc : {LapseScaling::W, LapseScaling::TwoW}) {
      const MassAspect a = build_mass_aspect(m, row.area0, finf.f, lapse.w_inf, sc);
      const double mass = total_mass(grid, a.trace_h).mass;
      const double ratio = 16.0 * kPi * mass * mass / row.area0;
      (sc == LapseScaling::W ? row.mass_w : row.mass_2w) = mass;
      (sc == LapseScaling::W ? row.ratio_w : row.ratio_2w) = ratio;
    }
    row.lapse_mass = hawking_mass_lapse(trace.surface(trace.records.size() - 1),
                                        lapse.states.back().z);
    row.I_value = ineq.value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace horoflow
