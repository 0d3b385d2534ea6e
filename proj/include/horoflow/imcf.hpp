#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "horoflow/surface.hpp"

namespace horoflow {

struct ImcfConfig {
  double t_end = 8.0;
  double dt_init = 1e-3;
  double tol_step = 1e-8;
  double safety = 0.8;
  // Records are stored every cadence * dt_init units of time.
  int cadence = 10;
};

struct FlowDiagnostics {
  double area = 0.0;
  double rhat = 0.0;
  double m_hawking = 0.0;
  double h_min = 0.0;
  double h_max = 0.0;
  double sup_h2_minus_4 = 0.0;
  double sup_ring_a_sq = 0.0;
  double sup_one_minus_nudr = 0.0;
  double sup_khat_minus_one = 0.0;
  double r_outer = 0.0;  // sup of rho + c
  double r_inner = 0.0;  // inf of rho + c
  double positivity_margin = 0.0;  // inf of R + 6 - 2 H Lap(1/H)
  double dt = 0.0;                 // last accepted step
};

struct FlowRecord {
  double t = 0.0;
  Field rho;
  Field rho_dot;  // W/H at the record, for Hermite interpolation in time
  FlowDiagnostics diag;
};

struct FlowTrace {
  const AmbientModel* ambient = nullptr;
  const ColatitudeGrid* grid = nullptr;
  std::vector<FlowRecord> records;
  std::size_t steps_accepted = 0;
  std::size_t steps_rejected = 0;

  double spacing() const;
  GraphSurface surface(std::size_t k) const;
  // Graph at time t between records, by cubic Hermite interpolation.
  Field rho_at(double t) const;
};

// d rho / dt = W / H for the graph {r = rho(theta)}; the tangential part of
// the motion is absorbed in keeping theta fixed.
Field imcf_rhs(const GraphSurface& s);

// R_t + 6 - 2 H Lap(1/H) at every node, with R_t = 2K.
Field positivity_margin(const GraphSurface& s);

// Graph-coordinate time derivative minus normal time derivative, per unit
// theta-derivative: d/dt|theta = d/dt|normal + tangential_speed * d/dtheta.
Field tangential_speed(const GraphSurface& s);

FlowDiagnostics flow_diagnostics(const GraphSurface& s);

FlowTrace run_imcf(const AmbientModel& ambient, const ColatitudeGrid& grid, const Field& rho0,
                   const ImcfConfig& config);

struct FInfinity {
  Field f;
  double cauchy = 0.0;  // sup |f(t_end) - f(t_end - 1)|
};
FInfinity extract_f_infinity(const FlowTrace& trace);

struct DecayFit {
  double rate = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};
// Least-squares fit of log(values) against times.
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values);
// Same, restricted to t in [t_lo, t_hi] and the chosen diagnostic.
DecayFit fit_trace_rate(const FlowTrace& trace, double FlowDiagnostics::*field, double t_lo,
                        double t_hi);

// sup over the surface of |d_t H - (Lap H / H^2 - (|A|^2 + Rc(nu,nu)) / H - 2|grad H|^2 / H^3)|
// with d_t H along normal trajectories, from central differences of records.
double evolution_residual(const FlowTrace& trace, std::size_t k, double max_spacing = 0.05);

}  // namespace horoflow
