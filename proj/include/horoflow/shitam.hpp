#pragma once

#include <optional>
#include <vector>

#include "horoflow/imcf.hpp"

namespace horoflow {

// Lapse u along the flow, stored as z = u - 1 and as the rescaled deviation
// w = 2 e^{3t/2} |S_0| / (4 pi) (u - 1), which has a finite limit.
struct LapseState {
  double t = 0.0;
  Field z;
  Field w;
};

struct ComparisonBounds {
  std::vector<double> t;
  std::vector<double> h_plus, h_minus;
  // gamma - 1 for the upper and lower comparison solutions.
  std::vector<double> gamma_plus_dev, gamma_minus_dev;
  double W_plus = 0.0, W_minus = 0.0;
};

struct ShiTamOptions {
  // u0 - 1; defaults to H(S_0)/2 - 1.
  std::optional<Field> z0;
  double sandwich_tol = 1e-6;
  // Throw when u leaves the comparison band by more than sandwich_tol.
  bool enforce_sandwich = true;
};

struct ShiTamResult {
  std::vector<LapseState> states;  // one per flow record
  ComparisonBounds bounds;
  double sandwich_excess = 0.0;    // largest distance outside [gamma_-, gamma_+]
  double area0 = 0.0;
  Field w_inf;
  double w_cauchy = 0.0;           // sup |w(t_end) - w(t_end - 1)|
};

// 2 e^{3t/2} |S_0| / (4 pi)
double lapse_scale(double t, double area0);

// du/dt along the normal trajectories of the flow, for a lapse u = 1 + z.
Field shitam_rhs(const GraphSurface& s, const Field& z);

// dw/dt at fixed theta on the graph parametrization.
Field lapse_rate(const GraphSurface& s, const Field& w, double t, double area0);

ShiTamResult run_shitam(const FlowTrace& trace, const ShiTamOptions& options = {});

// R + 6 for the metric u^2 H^{-2} dt^2 + g_t at record k, by central
// differences in time. Needs records on both sides.
Field scalar_curvature_residual(const FlowTrace& trace, const ShiTamResult& lapse, std::size_t k);

struct W0Diagnostic {
  int best_factor = 0;         // c in {1, 2} minimising ||c w0 - Khat||
  double misfit_factor1 = 0.0; // relative L2 misfit of w0 against Khat
  double misfit_factor2 = 0.0; // same for 2 w0
};
W0Diagnostic w0_khat_diagnostic(const GraphSurface& s0, const Field& z0);

}  // namespace horoflow
