#ifndef SYMM_SPECIALFN_HPP
#define SYMM_SPECIALFN_HPP

// Gamma-based ball volumes, Bessel functions of the first kind by their
// ascending series, first positive zeros, and the radial profile of the first
// Dirichlet eigenfunction of a Euclidean ball.
//
// Everything here is a pure function of its arguments.

namespace symm::specialfn {

/// Order nu >= 0 of a Bessel function of the first kind.
class BesselOrder {
public:
  explicit BesselOrder(double nu);

  /// nu = n/2 - 1, the order attached to the Laplacian in dimension n >= 2.
  static BesselOrder for_dimension(int n);

  double nu() const { return nu_; }

private:
  double nu_;
};

/// Largest argument accepted by bessel_j.
inline constexpr double kBesselMaxArgument = 50.0;

/// Gamma(a) for a > 0. Integer and half-integer arguments use the exact
/// factorial / double-factorial products; other arguments fall back to std::tgamma.
double gamma(double a);

/// Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_volume(int n);

/// J_nu(x) for 0 <= x <= 50.
double bessel_j(BesselOrder order, double x);

/// x^{-nu} J_nu(x), analytic at x = 0 where it equals 2^{-nu} / Gamma(nu + 1).
double bessel_j_scaled(BesselOrder order, double x);

/// First positive zero j_{nu,1} of J_nu, for 0 <= nu <= 10.
double bessel_first_zero(BesselOrder order);

/// phi(r) = r^{1-n/2} J_{n/2-1}(sqrt(lambda) r) on [0, j_{n/2-1,1}/sqrt(lambda)].
double ball_eigen_profile(int n, double lambda, double r);

} // namespace symm::specialfn

#endif
