#pragma once

#include <limits>

#include "horoflow/ambient.hpp"
#include "horoflow/sphere_grid.hpp"

namespace horoflow {

// Axisymmetric graph {r = rho(theta)} with every derived quantity evaluated at
// the grid nodes. Quantities that sit close to their round values (H - 2,
// 1 - <nu, d_r>, H^2 - 4) are stored as deviations computed directly, since
// subtracting afterwards loses most digits once phi is large.
struct GraphSurface {
  const AmbientModel* ambient = nullptr;
  const ColatitudeGrid* grid = nullptr;

  Field rho;
  Field phi, dphi;
  Field rho_mu;
  Field rho_theta;    // rho'
  Field rho_thth;     // rho''
  Field slope_sq;     // rho'^2 / phi^2
  Field E, G;         // induced metric E dtheta^2 + G dphi^2
  Field W;            // sqrt(1 + slope_sq)
  Field nu_dr;        // <nu, d_r> = 1/W
  Field one_minus_nu_dr;
  Field a_thth, a_phph;
  Field kappa1, kappa2;
  Field kappa1_dev, kappa2_dev;  // kappa_i - 1
  Field mean_curv;
  Field mean_curv_dev;           // H - 2
  Field h2_minus_4;
  Field a_sq;                    // |A|^2
  Field ring_a_sq;               // |A - (H/2) g|^2
  Field gauss_curv;              // from the induced metric
  Field gauss_curv_ext;          // sectional curvature + det of A
  Field ricci_normal_excess;     // Rc(nu, nu) + 2
  Field area_density;            // sqrt(E) phi, so dA = density dmu dphi

  double area = 0.0;
  double rhat = 0.0;   // area radius: 4 pi sinh^2(rhat) = area
  Field profile;       // rho + c - rhat, with c the asymptotic shift
  Field khat;          // (area / 4 pi) K
};

GraphSurface build_surface(const AmbientModel& ambient, const ColatitudeGrid& grid,
                           const Field& rho);

double integrate_on(const GraphSurface& s, const Field& f);
double hawking_mass(const GraphSurface& s);

// Laplacian and gradient pairing of the induced metric.
Field laplace_induced(const GraphSurface& s, const Field& u);
Field grad_inner_induced(const GraphSurface& s, const Field& a, const Field& b);

// H^2 - 4 - 4K - 2|A|^2 + 4m / sinh^3(s) with s = rho + c.
Field expansion_residual(const GraphSurface& s);

// area / (4 pi sinh^2 q0), q0 in the asymptotic coordinate.
double normalized_area_ratio(const GraphSurface& s, double q0);

struct HypothesisReport {
  double min_h = 0.0;
  double min_nu_dr = 0.0;
  double max_ring_ratio = 0.0;   // sup |A - H g/2|^2 / H^2
  double q0 = 0.0;               // |S| sup |H^2 - 4|
  double q1 = 0.0;               // |S| (1 - inf <nu, d_r>)
  double q2 = 0.0;               // |S|^2 sup |A - H g/2|^2
  bool inside_domain = false;
  bool h_bound = false;
  bool nu_bound = false;
  bool ring_bound = false;
  bool q_bounds = false;
  bool passes() const { return inside_domain && h_bound && nu_bound && ring_bound && q_bounds; }
};

HypothesisReport hypothesis_report(const GraphSurface& s, double eps0, double delta0,
                                   double q_max = std::numeric_limits<double>::infinity());

}  // namespace horoflow
