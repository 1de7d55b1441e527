#ifndef SYMM_QUADRATURE_HPP
#define SYMM_QUADRATURE_HPP

// Gauss-Legendre rules, adaptive Gauss-Legendre integration, and
// Chebyshev-Lobatto barycentric interpolation on an interval.

#include <functional>
#include <span>
#include <vector>

namespace symm::quadrature {

struct Rule {
  std::vector<double> nodes;   // on [-1, 1], ascending
  std::vector<double> weights;
};

/// m-point Gauss-Legendre rule, exact for polynomials of degree <= 2m - 1.
/// Rules for m in {8, 10, 16, 20} are built once and shared.
const Rule& gauss_legendre(int m);

/// Integral of f over [a, b] with a fixed rule.
double integrate(const Rule& rule, const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection: a subinterval is accepted when the 20-point rule on it agrees
/// with the sum of the 20-point rule on its halves. Targets rel_tol * |I| overall.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          int max_depth = 40);

/// Chebyshev-Lobatto points x_j = cos(j pi / (m-1)) mapped to [a, b], ascending.
std::vector<double> chebyshev_lobatto(int m, double a, double b);

/// Barycentric interpolation through Chebyshev-Lobatto values on [a, b].
double chebyshev_interpolate(std::span<const double> values, double a, double b, double x);

} // namespace symm::quadrature

#endif
