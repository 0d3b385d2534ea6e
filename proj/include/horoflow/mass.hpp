#pragma once

#include <cstdint>
#include <vector>

#include "horoflow/imcf.hpp"
#include "horoflow/shitam.hpp"

namespace horoflow {

enum class LapseScaling { W, TwoW };
const char* to_string(LapseScaling s);

// Coefficient of g_0 / (3 sinh s) in the limit metric, and tr_{g0} of that tensor.
struct MassAspect {
  Field p;
  Field trace_h;
};

// p = m + (|S_0| / 4 pi)^{1/2} e^{3 f} w, with w doubled for TwoW.
MassAspect build_mass_aspect(double m, double area0, const Field& f_inf, const Field& w_inf,
                             LapseScaling scaling);

struct MassVector {
  double moment[4] = {0, 0, 0, 0};  // int tr h, int tr h x_1, x_2, x_3
  double mass = 0.0;                // (1/16 pi) sqrt(m0^2 - |m_vec|^2)
};
// Throws DomainError when the energy-momentum vector is not timelike.
MassVector total_mass(const ColatitudeGrid& grid, const Field& trace_h);

// Limit of the Hawking mass of {s = r0 + f} as r0 grows:
// (m/2) (mean e^{2f})^{1/2} mean e^{-f}.
double hawking_limit(const ColatitudeGrid& grid, const Field& f, double m);

// Gauss curvature of e^{2f} g_0.
Field conformal_gauss_curvature(const ColatitudeGrid& grid, const Field& f);

// f - (1/2) log(mean e^{2f}), so that e^{2f} g_0 has area 4 pi.
Field normalize_profile(const ColatitudeGrid& grid, const Field& f);

struct InequalityReport {
  double value = 0.0;          // (mean K e^{3f})^2 - (mean K e^{3f} x_3)^2
  double margin = 0.0;         // value - 1
  double normalization = 0.0;  // mean e^{2f} - 1
};
InequalityReport penrose_functional(const ColatitudeGrid& grid, const Field& f);

// log of the conformal factor of the boost fixing the poles: (1 - a^2)/(1 - 2 a mu + a^2).
// Verified on the grid; throws ConsistencyError when the grid cannot resolve it.
Field mobius_profile(const ColatitudeGrid& grid, double a);

struct MinimizeOptions {
  int l_max = 6;
  int iters = 200;
  double fd_step = 1e-5;
  double violation_threshold = 1e-6;  // a value below 1 - threshold is a finding
};

struct MinimizeResult {
  Field f_best;
  Eigen::VectorXd coeffs;  // perturbation coefficients for P_1 .. P_lmax
  double value = 0.0;
  std::vector<double> trajectory;
  int iterations = 0;
  bool violation = false;
};

// Descends I over f = normalize(f_init + sum_l c_l P_l), l = 1..l_max, with
// central-difference gradients and Armijo backtracking.
MinimizeResult minimize_I(const ColatitudeGrid& grid, const Field& f_init,
                          const MinimizeOptions& options = {});

// Random profile sum_{l<=l_max} c_l P_l with |c_l| <= sup, normalized.
Field random_profile(const ColatitudeGrid& grid, int l_max, double sup, std::uint64_t seed);

// Hawking mass of S_t in the metric (u/H)^2 dt^2 + g_t, where its mean curvature is H/u.
double hawking_mass_lapse(const GraphSurface& s, const Field& z);

struct MassRatioRow {
  double r0 = 0.0;
  double area0 = 0.0;
  double m_hawking0 = 0.0;
  double hawking_limit = 0.0;
  double ratio_w = 0.0;   // 16 pi M^2 / |S_0| with the w scaling
  double ratio_2w = 0.0;
  double mass_w = 0.0;
  double mass_2w = 0.0;
  double lapse_mass = 0.0;  // Hawking mass of the last slice in the lapse metric
  double I_value = 0.0;
};

std::vector<MassRatioRow> mass_ratio_limit_check(const AmbientModel& ambient,
                                                 const ColatitudeGrid& grid, const Field& f,
                                                 const std::vector<double>& r0s,
                                                 const ImcfConfig& config);

}  // namespace horoflow
