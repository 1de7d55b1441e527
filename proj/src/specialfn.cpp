#include "symm/specialfn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "symm/errors.hpp"

namespace symm::specialfn {

namespace {

// Partial sums of the hypergeometric part of the ascending series are carried
// in binary128: near x = 50 the largest term is ~1e20 while the sum is O(1),
// and the extra 49 bits of mantissa absorb that cancellation.
using wide = __float128;

wide wabs(wide v) { return v < 0 ? -v : v; }

// sum_{k>=0} (-y)^k / (k! (nu+1)_k) with y = x^2/4.
double hypergeometric_sum(double nu, double x) {
  const wide y = static_cast<wide>(x) * static_cast<wide>(x) / 4;
  wide term = 1;
  wide sum = 1;
  wide largest = 1;
  for (int k = 1; k < 400; ++k) {
    term *= -y / (static_cast<wide>(k) * (static_cast<wide>(nu) + k));
    sum += term;
    const wide mag = wabs(term);
    if (mag > largest) largest = mag;
    // Terms decrease monotonically once k (k + nu) > y.
    if (static_cast<double>(k) * (k + nu) > static_cast<double>(y)) {
      if (mag < static_cast<wide>(1e-17) * wabs(sum) || mag < static_cast<wide>(1e-32) * largest) {
        return static_cast<double>(sum);
      }
    }
  }
  throw InternalError("bessel series did not terminate");
}

void check_argument(double x) {
  if (!(x >= 0.0) || x > kBesselMaxArgument) {
    throw std::domain_error("bessel argument outside [0, 50]: " + std::to_string(x));
  }
}

} // namespace

BesselOrder::BesselOrder(double nu) : nu_(nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) {
    throw std::domain_error("bessel order must be finite and >= 0");
  }
}

BesselOrder BesselOrder::for_dimension(int n) {
  if (n < 2) throw std::domain_error("dimension must be >= 2 for a Bessel order");
  return BesselOrder(0.5 * n - 1.0);
}

double gamma(double a) {
  if (!(a > 0.0)) throw std::domain_error("gamma: argument must be positive");
  const double twice = 2.0 * a;
  if (twice == std::floor(twice) && twice < 340.0) {
    const long m = static_cast<long>(twice);
    // Walk down to Gamma(1) = 1 or Gamma(1/2) = sqrt(pi), then multiply back up.
    double value = (m % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (double t = (m % 2 == 0) ? 1.0 : 0.5; t < a; t += 1.0) value *= t;
    return value;
  }
  return std::tgamma(a);
}

double unit_ball_volume(int n) {
  if (n < 1) throw std::domain_error("unit_ball_volume: dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / gamma(0.5 * n + 1.0);
}

double bessel_j_scaled(BesselOrder order, double x) {
  check_argument(x);
  const double nu = order.nu();
  return std::pow(2.0, -nu) / gamma(nu + 1.0) * hypergeometric_sum(nu, x);
}

double bessel_j(BesselOrder order, double x) {
  check_argument(x);
  const double nu = order.nu();
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  return std::pow(0.5 * x, nu) / gamma(nu + 1.0) * hypergeometric_sum(nu, x);
}

double bessel_first_zero(BesselOrder order) {
  const double nu = order.nu();
  if (nu > 10.0) throw std::domain_error("bessel_first_zero: order must be <= 10");

  // J_nu > 0 on (0, j_{nu,1}) and j_{nu,1} > nu, so the scan starts inside the positive lobe.
  constexpr double step = 0.1;
  double lo = std::max(nu, step);
  double f_lo = bessel_j(order, lo);
  double hi = lo;
  double f_hi = f_lo;
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi = lo + step;
    if (hi > kBesselMaxArgument) throw InternalError("bessel_first_zero: no sign change before x = 50");
    f_hi = bessel_j(order, hi);
  }
  if (f_hi == 0.0) return hi;

  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = bessel_j(order, mid);
    if (f_mid > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // Newton polish with J'_nu = (nu/x) J_nu - J_{nu+1}.
  const BesselOrder next(nu + 1.0);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double f = bessel_j(order, x);
    const double df = nu / x * f - bessel_j(next, x);
    const double dx = f / df;
    const double candidate = x - dx;
    if (candidate < lo || candidate > hi) break;
    x = candidate;
    if (std::abs(dx) <= 1e-16 * x) break;
  }
  return x;
}

double ball_eigen_profile(int n, double lambda, double r) {
  if (!(lambda > 0.0)) throw std::domain_error("ball_eigen_profile: lambda must be positive");
  if (!(r >= 0.0)) throw std::domain_error("ball_eigen_profile: radius must be >= 0");
  const BesselOrder order = BesselOrder::for_dimension(n);
  const double root = std::sqrt(lambda);
  const double edge = bessel_first_zero(order) / root;
  if (r > edge * (1.0 + 1e-12)) {
    throw std::domain_error("ball_eigen_profile: radius beyond the first zero");
  }
  const double x = std::min(root * r, edge * root);
  return std::pow(root, order.nu()) * bessel_j_scaled(order, x);
}

} // namespace symm::specialfn
