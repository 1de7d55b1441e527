#include "symm/radial.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "symm/errors.hpp"
#include "symm/quadrature.hpp"
#include "symm/specialfn.hpp"

namespace symm::radial {

namespace {

constexpr int kNodes = DecreasingProfile::kPanelNodes;
// Output panels are at most this wide in rho, and away from the origin
// span at most this ratio, so the Chebyshev interpolant resolves log-like terms.
constexpr double kMaxPanelWidth = 0.125;
constexpr double kMaxPanelRatio = 1.5;

// One piece of f* in the radius variable, with F at its left end.
struct SourcePiece {
  double rho_lo;
  double rho_hi;
  double s_lo;
  double f_lo; // F(s_lo)
  std::size_t index;
};

std::vector<double> split_piece(double lo, double hi) {
  std::vector<double> edges{lo};
  double x = lo;
  while (x < hi) {
    double next = x == 0.0 ? kMaxPanelWidth : std::min(x * kMaxPanelRatio, x + kMaxPanelWidth);
    // Absorb a trailing sliver into the current panel.
    if (next >= hi || hi - next < 0.25 * (next - x)) next = hi;
    edges.push_back(next);
    x = next;
  }
  return edges;
}

} // namespace

SymmetrizationContext::SymmetrizationContext(int n, double avr, double omega_total)
    : n_(n), avr_(avr), omega_total_(omega_total), gamma_n_(0.0) {
  if (n < 2) throw std::domain_error("SymmetrizationContext: n must be >= 2");
  if (!(avr > 0.0) || avr > 1.0) throw std::domain_error("SymmetrizationContext: avr must lie in (0, 1]");
  if (!(omega_total > 0.0) || !std::isfinite(omega_total)) {
    throw std::domain_error("SymmetrizationContext: |Omega| must be positive");
  }
  gamma_n_ = n * std::pow(avr * specialfn::unit_ball_volume(n), 1.0 / n);
}

double SymmetrizationContext::sharp_radius() const {
  return rearrange::schwarz_radius_map(omega_total_, avr_, n_);
}

DecreasingProfile talenti_profile(const DecreasingProfile& f_star, const SymmetrizationContext& ctx) {
  const double S = ctx.omega_total();
  const int n = ctx.n();
  if (std::abs(f_star.total() - S) > 1e-12 * S) {
    throw ContractError("talenti_profile: source profile does not live on [0, |Omega|]");
  }
  const auto to_rho = [&](double s) { return std::min(1.0, std::pow(s / S, 1.0 / n)); };

  // Pieces of f* on which F has a closed form (step, linear) or a polynomial integrand (radial).
  std::vector<SourcePiece> pieces;
  {
    const auto bp = f_star.breakpoints();
    double F = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
      const double rho_lo = i == 0 ? 0.0 : to_rho(bp[i]);
      const double rho_hi = i + 2 == bp.size() ? 1.0 : to_rho(bp[i + 1]);
      pieces.push_back({rho_lo, rho_hi, bp[i], F, i});
      F += f_star.integral_of_power(bp[i], bp[i + 1], 1.0);
    }
  }

  const auto F_at = [&](const SourcePiece& piece, double rho) {
    const double s = S * std::pow(rho, n);
    switch (f_star.interpolation()) {
    case rearrange::Interpolation::step:
      return piece.f_lo + f_star.values()[piece.index] * (s - piece.s_lo);
    case rearrange::Interpolation::linear:
      return piece.f_lo + 0.5 * (f_star(piece.s_lo) + f_star(s)) * (s - piece.s_lo);
    case rearrange::Interpolation::radial:
      return piece.f_lo + f_star.integral_of_power(piece.s_lo, s, 1.0);
    }
    return 0.0;
  };

  const double c = n * std::pow(S, 2.0 / n - 1.0) / (ctx.gamma_n() * ctx.gamma_n());
  const quadrature::Rule& rule = quadrature::gauss_legendre(16);

  // Panels in increasing rho, each tagged with the source piece it lies in.
  std::vector<double> edges{0.0};
  std::vector<std::size_t> owner;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const std::vector<double> sub = split_piece(pieces[p].rho_lo, pieces[p].rho_hi);
    for (std::size_t k = 1; k < sub.size(); ++k) {
      if (!(sub[k] > edges.back())) continue;
      edges.push_back(sub[k]);
      owner.push_back(p);
    }
  }
  edges.back() = 1.0;

  const std::size_t panels = edges.size() - 1;
  std::vector<double> values(panels * kNodes);
  double right = 0.0; // v*(|Omega|) = 0
  for (std::size_t k = panels; k-- > 0;) {
    const SourcePiece& piece = pieces[owner[k]];
    const std::vector<double> x = quadrature::chebyshev_lobatto(kNodes, edges[k], edges[k + 1]);
    const std::function<double(double)> integrand = [&](double rho) {
      return c * std::pow(rho, 1 - n) * F_at(piece, rho);
    };
    double* out = values.data() + k * kNodes;
    out[kNodes - 1] = right;
    for (int j = kNodes - 2; j >= 0; --j) {
      out[j] = out[j + 1] + quadrature::integrate(rule, integrand, x[j], x[j + 1]);
    }
    right = out[0];
  }
  return DecreasingProfile::radial(n, S, std::move(edges), std::move(values));
}

double ball_radial_solution(const DecreasingProfile& v_star, const SymmetrizationContext& ctx, double r) {
  const double R = ctx.sharp_radius();
  if (!(r >= 0.0) || r > R * (1.0 + 1e-12)) throw std::domain_error("ball_radial_solution: r outside [0, R]");
  const double s = ctx.avr() * specialfn::unit_ball_volume(ctx.n()) * std::pow(std::min(r, R), ctx.n());
  return v_star(std::min(s, v_star.total()));
}

std::vector<BallMoment> moment_sequence_ball(const SymmetrizationContext& ctx, int k_max) {
  if (k_max < 1 || k_max > 10) throw std::domain_error("moment_sequence_ball: k_max must lie in [1, 10]");
  std::vector<BallMoment> rows;
  DecreasingProfile previous = DecreasingProfile::step({0.0, ctx.omega_total()}, {1.0});
  for (int k = 1; k <= k_max; ++k) {
    DecreasingProfile v = talenti_profile(previous.scaled(k), ctx);
    const double torsion = v.integral() / ctx.avr();
    const double sup = v(0.0);
    rows.push_back({k, v, torsion, sup});
    previous = std::move(v);
  }
  return rows;
}

double ball_torsion_sup(const SymmetrizationContext& ctx) {
  const double R = ctx.sharp_radius();
  return R * R / (2.0 * ctx.n());
}

double faber_krahn_bound(const SymmetrizationContext& ctx) {
  const double j = specialfn::bessel_first_zero(specialfn::BesselOrder::for_dimension(ctx.n()));
  return j * j * std::pow(specialfn::unit_ball_volume(ctx.n()) * ctx.avr() / ctx.omega_total(), 2.0 / ctx.n());
}

double second_eig_bound(const SymmetrizationContext& ctx) {
  return std::pow(2.0, 2.0 / ctx.n()) * faber_krahn_bound(ctx);
}

double b_lambda_radius(int n, double lambda) {
  if (!(lambda > 0.0)) throw std::domain_error("b_lambda_radius: lambda must be positive");
  return specialfn::bessel_first_zero(specialfn::BesselOrder::for_dimension(n)) / std::sqrt(lambda);
}

double chiti_constant(double p, double q, double lambda, int n, double avr) {
  if (!(p > 0.0) || !(q >= p)) throw std::domain_error("chiti_constant: need 0 < p <= q");
  if (!(lambda > 0.0)) throw std::domain_error("chiti_constant: lambda must be positive");
  if (!(avr > 0.0) || avr > 1.0) throw std::domain_error("chiti_constant: avr must lie in (0, 1]");
  if (p == q) return 1.0;

  const specialfn::BesselOrder order = specialfn::BesselOrder::for_dimension(n);
  const double j = specialfn::bessel_first_zero(order);
  // r^{n-1} phi(r)^e with phi(r) = (j r)^{-nu} J_nu(j r); the factor j^nu cancels in the ratio.
  // phi vanishes linearly at r = 1, so phi^e has a power singularity there for e < 1;
  // on [1/2, 1] we integrate in t with r = 1 - t^2, which turns it into t^{2e+1}.
  const auto moment = [&](double e) {
    const auto g = [&](double r) {
      const double phi = std::max(0.0, specialfn::bessel_j_scaled(order, std::min(j * r, j)));
      return std::pow(r, n - 1) * std::pow(phi, e);
    };
    const double inner = quadrature::integrate_adaptive(g, 0.0, 0.5, 1e-13);
    const double outer =
        quadrature::integrate_adaptive([&](double t) { return 2.0 * t * g(1.0 - t * t); }, 0.0, std::sqrt(0.5), 1e-13);
    return inner + outer;
  };
  const double ball = n * specialfn::unit_ball_volume(n) * avr * std::pow(j / std::sqrt(lambda), n);
  return std::pow(ball, 1.0 / q - 1.0 / p) * std::pow(moment(q), 1.0 / q) / std::pow(moment(p), 1.0 / p);
}

double saint_venant_normalized(double torsion, double volume, int n, double avr) {
  if (!(torsion >= 0.0) || !(volume > 0.0)) throw std::domain_error("saint_venant_normalized: bad inputs");
  return std::pow(avr * specialfn::unit_ball_volume(n), 2.0 / n) * torsion * std::pow(volume, -(n + 2.0) / n);
}

} // namespace symm::radial
