#pragma once

#include <vector>

namespace horoflow {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule on [-1, 1]. Nodes are found by Newton
// iteration on the three-term recurrence.
GaussLegendreRule gauss_legendre(int n);

// P_0(x) .. P_lmax(x) by recurrence.
std::vector<double> legendre_values(int lmax, double x);

}  // namespace horoflow
