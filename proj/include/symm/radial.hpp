#ifndef SYMM_RADIAL_HPP
#define SYMM_RADIAL_HPP

// Solutions on Euclidean balls written in the rearrangement variable s:
// the radial Poisson solution driven by a decreasing source, the moment
// hierarchy of the ball, eigenvalue bounds, and the reverse Hoelder constant.

#include <vector>

#include "symm/rearrange.hpp"

namespace symm::radial {

using rearrange::DecreasingProfile;

/// Dimension, asymptotic volume ratio and measure of the domain being symmetrized.
class SymmetrizationContext {
public:
  /// Throws std::domain_error unless n >= 2, avr in (0, 1] and omega_total > 0.
  SymmetrizationContext(int n, double avr, double omega_total);

  int n() const { return n_; }
  double avr() const { return avr_; }
  /// |Omega|, the measure of the original domain.
  double omega_total() const { return omega_total_; }
  /// gamma_n = n (avr omega_n)^{1/n}.
  double gamma_n() const { return gamma_n_; }
  /// Radius R of the Euclidean ball with avr * |B(R)| = |Omega|.
  double sharp_radius() const;

private:
  int n_;
  double avr_;
  double omega_total_;
  double gamma_n_;
};

/// v*(s) = gamma_n^{-2} int_s^{|Omega|} xi^{-2+2/n} F(xi) dxi with F(xi) = int_0^xi f*.
///
/// The outer integral is taken in the normalized radius rho = (xi/|Omega|)^{1/n},
/// where the integrand rho^{1-n} F is bounded at the origin and polynomial
/// whenever f* is. The result is a radial profile with panels that follow the
/// breakpoints of f*.
DecreasingProfile talenti_profile(const DecreasingProfile& f_star, const SymmetrizationContext& ctx);

/// v(r) = v*(avr omega_n r^n) for 0 <= r <= R.
double ball_radial_solution(const DecreasingProfile& v_star, const SymmetrizationContext& ctx, double r);

struct BallMoment {
  int k;
  DecreasingProfile profile; ///< v_k*
  double torsion;            ///< T_k of the Euclidean ball, (1/avr) int_0^{|Omega|} v_k*
  double sup;                ///< J_k = v_k*(0)
};

/// Ball hierarchy -Delta v_k = k v_{k-1}, v_0 = 1, for k = 1..k_max (k_max <= 10).
std::vector<BallMoment> moment_sequence_ball(const SymmetrizationContext& ctx, int k_max);

/// J_1 of the ball in closed form, R^2 / (2n).
double ball_torsion_sup(const SymmetrizationContext& ctx);

/// lambda_1 of the symmetrized ball: j^2_{n/2-1,1} (omega_n avr / |Omega|)^{2/n}.
double faber_krahn_bound(const SymmetrizationContext& ctx);

/// 2^{2/n} times faber_krahn_bound.
double second_eig_bound(const SymmetrizationContext& ctx);

/// Radius of the Euclidean ball whose first Dirichlet eigenvalue is lambda.
double b_lambda_radius(int n, double lambda);

/// Upper bound K(p, q, lambda, n, avr) on ||u||_q / ||u||_p for Dirichlet eigenfunctions.
double chiti_constant(double p, double q, double lambda, int n, double avr);

/// (avr omega_n)^{2/n} T |Omega|^{-(n+2)/n}; at most 1/(n(n+2)).
double saint_venant_normalized(double torsion, double volume, int n, double avr);

} // namespace symm::radial

#endif
