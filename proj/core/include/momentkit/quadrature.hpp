#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace momentkit {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Cached n-point rule.
const GaussLegendreRule& gauss_legendre(int n);

struct QuadratureNodes {
  std::vector<double> x;
  std::vector<double> w;
};

// `panels` equal panels of `order`-point Gauss-Legendre on [a, b].
QuadratureNodes composite_gauss_legendre(double a, double b, std::size_t panels, int order = 16);

// Vector-valued integrand: writes m values at x.
using VectorIntegrand = std::function<void(double x, std::span<double> out)>;

// Adaptive bisection with 16-point panels. Component j is accepted once the
// local error is below tol * (integral of |f_j| over [a, b]) scaled by the
// panel's share of the interval.
std::vector<double> integrate_adaptive(double a, double b, std::size_t m, const VectorIntegrand& f,
                                       double tol = 1e-12, int max_depth = 48);

double integrate_adaptive(double a, double b, const std::function<double(double)>& f, double tol = 1e-12);

}  // namespace momentkit
