#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qent::quad {

/// Composite trapezoid weights for n uniform nodes of spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(std::size_t n);

/// Integral over [a, b] with a fixed rule mapped onto the interval.
double integrate_fixed(const GaussRule& rule, const std::function<double(double)>& f, double a,
                       double b);

/// Adaptive 7/15-point Gauss-Kronrod with global bisection of the worst
/// subinterval. Stops when the summed error estimate falls below
/// max(abs_tol, rel_tol * |result|) or after `max_intervals` subdivisions.
struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-12, double abs_tol = 0.0,
                                  std::size_t max_intervals = 2000);

}  // namespace qent::quad
