#include "symm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace symm::quadrature {

namespace {

Rule build_gauss_legendre(int m) {
  Rule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    // Newton on P_m from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[m - 1 - i] = x;
    rule.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double adaptive_step(const std::function<double(double)>& f, double a, double b, double coarse, double tol,
                     int depth, int max_depth) {
  const double mid = 0.5 * (a + b);
  const Rule& hi = gauss_legendre(20);
  const double left_fine = integrate(hi, f, a, mid);
  const double right_fine = integrate(hi, f, mid, b);
  const double fine = left_fine + right_fine;
  if (std::abs(fine - coarse) <= tol || depth >= max_depth) return fine;
  return adaptive_step(f, a, mid, left_fine, 0.5 * tol, depth + 1, max_depth) +
         adaptive_step(f, mid, b, right_fine, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

const Rule& gauss_legendre(int m) {
  static const Rule r8 = build_gauss_legendre(8);
  static const Rule r10 = build_gauss_legendre(10);
  static const Rule r16 = build_gauss_legendre(16);
  static const Rule r20 = build_gauss_legendre(20);
  switch (m) {
  case 8: return r8;
  case 10: return r10;
  case 16: return r16;
  case 20: return r20;
  default: throw std::invalid_argument("gauss_legendre: unsupported order");
  }
}

double integrate(const Rule& rule, const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double centre = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(centre + half * rule.nodes[i]);
  return half * sum;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                          int max_depth) {
  const double whole = integrate(gauss_legendre(20), f, a, b);
  const double scale = std::abs(whole);
  const double tol = rel_tol * (scale > 0.0 ? scale : 1.0) * 0.1;
  return adaptive_step(f, a, b, whole, tol, 0, max_depth);
}

std::vector<double> chebyshev_lobatto(int m, double a, double b) {
  std::vector<double> x(m);
  for (int j = 0; j < m; ++j) {
    const double t = -std::cos(std::numbers::pi * j / (m - 1));
    x[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

double chebyshev_interpolate(std::span<const double> values, double a, double b, double x) {
  static const std::vector<double> nodes17 = chebyshev_lobatto(17, -1.0, 1.0);
  const int m = static_cast<int>(values.size());
  const std::vector<double> other = (m == 17) ? std::vector<double>{} : chebyshev_lobatto(m, -1.0, 1.0);
  const std::vector<double>& nodes = (m == 17) ? nodes17 : other;
  const double t = (2.0 * x - a - b) / (b - a);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < m; ++j) {
    const double node = nodes[j];
    const double diff = t - node;
    if (diff == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == m - 1) w *= 0.5;
    w /= diff;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

} // namespace symm::quadrature
