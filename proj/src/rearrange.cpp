#include "symm/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

#include "symm/errors.hpp"
#include "symm/quadrature.hpp"
#include "symm/specialfn.hpp"

namespace symm::rearrange {

namespace {

// Decreasing value, ties broken by increasing measure. Any permutation of the
// input produces the same order, so cumulative sums are bit-reproducible.
std::vector<Cell> canonical_order(std::span<const Cell> cells) {
  std::vector<Cell> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end(), [](const Cell& a, const Cell& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.measure < b.measure;
  });
  return sorted;
}

double power(double v, double p) { return p == 1.0 ? v : std::pow(v, p); }

} // namespace

// ---------------------------------------------------------------------------
// WeightedSample

WeightedSample::WeightedSample(std::vector<Cell> cells) : cells_(std::move(cells)), total_(0.0) {
  if (cells_.empty()) throw std::domain_error("WeightedSample: no cells");
  for (const Cell& c : cells_) {
    if (!std::isfinite(c.value) || c.value < 0.0) {
      throw std::domain_error("WeightedSample: values must be finite and nonnegative");
    }
    if (!(c.measure > 0.0) || !std::isfinite(c.measure)) {
      throw std::domain_error("WeightedSample: measures must be positive");
    }
  }
  for (const Cell& c : canonical_order(cells_)) total_ += c.measure;
}

WeightedSample WeightedSample::absolute_value(std::span<const double> values, std::span<const double> measures) {
  if (values.size() != measures.size()) throw ContractError("absolute_value: values and measures differ in length");
  std::vector<Cell> cells(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) cells[i] = {std::abs(values[i]), measures[i]};
  return WeightedSample(std::move(cells));
}

double WeightedSample::max_value() const {
  double m = 0.0;
  for (const Cell& c : cells_) m = std::max(m, c.value);
  return m;
}

// ---------------------------------------------------------------------------
// DecreasingProfile

DecreasingProfile DecreasingProfile::step(std::vector<double> breakpoints, std::vector<double> values) {
  DecreasingProfile p;
  p.mode_ = Interpolation::step;
  p.breakpoints_ = std::move(breakpoints);
  p.values_ = std::move(values);
  if (p.breakpoints_.size() < 2 || p.values_.size() + 1 != p.breakpoints_.size()) {
    throw ContractError("step profile: need m + 1 breakpoints for m values");
  }
  p.validate();
  return p;
}

DecreasingProfile DecreasingProfile::linear(std::vector<double> breakpoints, std::vector<double> node_values) {
  DecreasingProfile p;
  p.mode_ = Interpolation::linear;
  p.breakpoints_ = std::move(breakpoints);
  p.values_ = std::move(node_values);
  if (p.breakpoints_.size() < 2 || p.values_.size() != p.breakpoints_.size()) {
    throw ContractError("linear profile: need one value per breakpoint");
  }
  p.validate();
  return p;
}

DecreasingProfile DecreasingProfile::radial(int n, double total, std::vector<double> rho_edges,
                                            std::vector<double> node_values) {
  if (n < 1) throw std::domain_error("radial profile: dimension must be >= 1");
  if (!(total > 0.0)) throw std::domain_error("radial profile: total must be positive");
  if (rho_edges.size() < 2 || rho_edges.front() != 0.0 || rho_edges.back() != 1.0) {
    throw ContractError("radial profile: panel edges must run from 0 to 1");
  }
  if (node_values.size() != (rho_edges.size() - 1) * kPanelNodes) {
    throw ContractError("radial profile: expected kPanelNodes values per panel");
  }
  DecreasingProfile p;
  p.mode_ = Interpolation::radial;
  p.n_ = n;
  p.rho_edges_ = std::move(rho_edges);
  p.breakpoints_.resize(p.rho_edges_.size());
  for (std::size_t i = 0; i < p.rho_edges_.size(); ++i) p.breakpoints_[i] = total * std::pow(p.rho_edges_[i], n);
  p.breakpoints_.back() = total;
  p.values_ = std::move(node_values);
  p.validate();
  return p;
}

void DecreasingProfile::validate() const {
  if (breakpoints_.front() != 0.0) throw ContractError("profile: first breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) throw ContractError("profile: breakpoints must increase strictly");
  }
  double largest = 0.0;
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) throw std::domain_error("profile: values must be finite and nonnegative");
    largest = std::max(largest, v);
  }
  const double slack = mode_ == Interpolation::step ? 0.0 : 1e-12 * largest;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] > values_[i - 1] + slack) throw ContractError("profile: values must be nonincreasing");
  }
}

double DecreasingProfile::to_rho(double s) const {
  return std::min(1.0, std::pow(std::max(s, 0.0) / total(), 1.0 / n_));
}

std::size_t DecreasingProfile::panel_index(double rho) const {
  const auto it = std::upper_bound(rho_edges_.begin(), rho_edges_.end(), rho);
  const std::size_t i = static_cast<std::size_t>(it - rho_edges_.begin());
  return std::clamp<std::size_t>(i == 0 ? 0 : i - 1, 0, rho_edges_.size() - 2);
}

double DecreasingProfile::radial_value(std::size_t panel, double rho) const {
  const std::span<const double> vals(values_.data() + panel * kPanelNodes, kPanelNodes);
  return std::max(0.0, quadrature::chebyshev_interpolate(vals, rho_edges_[panel], rho_edges_[panel + 1], rho));
}

double DecreasingProfile::operator()(double s) const {
  if (!(s >= 0.0) || s > total() * (1.0 + 1e-12)) {
    throw std::domain_error("profile evaluated outside [0, total]: " + std::to_string(s));
  }
  switch (mode_) {
  case Interpolation::step: {
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
    return values_[std::min(i == 0 ? 0 : i - 1, values_.size() - 1)];
  }
  case Interpolation::linear: {
    if (s >= total()) return values_.back();
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    const double t = (s - breakpoints_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
    return values_[i] + t * (values_[i + 1] - values_[i]);
  }
  case Interpolation::radial: {
    const double rho = to_rho(s);
    return radial_value(panel_index(rho), rho);
  }
  }
  return 0.0;
}

double DecreasingProfile::left_limit(double s) const {
  if (mode_ != Interpolation::step || s <= 0.0) return (*this)(s);
  if (s > total() * (1.0 + 1e-12)) throw std::domain_error("profile evaluated outside [0, total]");
  const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
  return values_[std::min(i - 1, values_.size() - 1)];
}

std::size_t DecreasingProfile::first_piece(double s) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
  return i == 0 ? 0 : i - 1;
}

double DecreasingProfile::integral_of_power(double a, double b, double p) const {
  a = std::max(a, 0.0);
  b = std::min(b, total());
  if (!(b > a)) return 0.0;
  const quadrature::Rule& rule = quadrature::gauss_legendre(16);
  double sum = 0.0;
  switch (mode_) {
  case Interpolation::step:
    for (std::size_t i = first_piece(a); i < values_.size() && breakpoints_[i] < b; ++i) {
      const double lo = std::max(a, breakpoints_[i]);
      const double hi = std::min(b, breakpoints_[i + 1]);
      if (hi > lo) sum += power(values_[i], p) * (hi - lo);
    }
    return sum;
  case Interpolation::linear:
    for (std::size_t i = first_piece(a); i + 1 < breakpoints_.size() && breakpoints_[i] < b; ++i) {
      const double lo = std::max(a, breakpoints_[i]);
      const double hi = std::min(b, breakpoints_[i + 1]);
      if (!(hi > lo)) continue;
      if (p == 1.0) {
        sum += 0.5 * ((*this)(lo) + (*this)(hi)) * (hi - lo);
      } else {
        sum += quadrature::integrate(rule, [&](double s) { return power((*this)(s), p); }, lo, hi);
      }
    }
    return sum;
  case Interpolation::radial: {
    const double ra = to_rho(a);
    const double rb = to_rho(b);
    const double scale = total() * n_;
    for (std::size_t i = 0; i + 1 < rho_edges_.size(); ++i) {
      const double lo = std::max(ra, rho_edges_[i]);
      const double hi = std::min(rb, rho_edges_[i + 1]);
      if (!(hi > lo)) continue;
      sum += quadrature::integrate(
          rule,
          [&](double rho) { return power(radial_value(i, rho), p) * scale * std::pow(rho, n_ - 1); }, lo, hi);
    }
    return sum;
  }
  }
  return sum;
}

double DecreasingProfile::distribution(double t) const {
  if (mode_ == Interpolation::step) {
    std::size_t count = 0;
    while (count < values_.size() && values_[count] > t) ++count;
    return breakpoints_[count];
  }
  if ((*this)(0.0) <= t) return 0.0;
  if ((*this)(total()) > t) return total();
  // h is nonincreasing: bisect for the crossing.
  double lo = 0.0;
  double hi = total();
  for (int it = 0; it < 200 && hi - lo > 1e-15 * total(); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) > t) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::vector<double> DecreasingProfile::nodes() const {
  if (mode_ != Interpolation::radial) return breakpoints_;
  std::vector<double> out;
  out.reserve((rho_edges_.size() - 1) * (kPanelNodes - 1) + 1);
  for (std::size_t i = 0; i + 1 < rho_edges_.size(); ++i) {
    const std::vector<double> rho = quadrature::chebyshev_lobatto(kPanelNodes, rho_edges_[i], rho_edges_[i + 1]);
    for (int j = (i == 0 ? 0 : 1); j < kPanelNodes; ++j) out.push_back(total() * std::pow(rho[j], n_));
  }
  out.back() = total();
  return out;
}

DecreasingProfile DecreasingProfile::scaled(double c) const {
  if (!(c >= 0.0)) throw std::domain_error("profile: scale factor must be nonnegative");
  DecreasingProfile p = *this;
  for (double& v : p.values_) v *= c;
  return p;
}

void DecreasingProfile::write_csv(std::ostream& out) const {
  out << "s,value\n" << std::setprecision(17);
  for (double s : nodes()) out << s << ',' << (*this)(s) << '\n';
}

// ---------------------------------------------------------------------------
// Free functions

double distribution(const WeightedSample& h, double t) {
  double mu = 0.0;
  for (const Cell& c : canonical_order(h.cells())) {
    if (c.value <= t) break;
    mu += c.measure;
  }
  return mu;
}

DecreasingProfile decreasing_rearrangement(const WeightedSample& h) {
  const std::vector<Cell> sorted = canonical_order(h.cells());
  std::vector<double> breakpoints{0.0};
  std::vector<double> values;
  double s = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    s += sorted[i].measure;
    if (i + 1 == sorted.size() || sorted[i + 1].value != sorted[i].value) {
      breakpoints.push_back(s);
      values.push_back(sorted[i].value);
    }
  }
  return DecreasingProfile::step(std::move(breakpoints), std::move(values));
}

double schwarz_radius_map(double s, double avr, int n) {
  if (!(avr > 0.0) || avr > 1.0) throw std::domain_error("schwarz_radius_map: avr must lie in (0, 1]");
  if (!(s >= 0.0)) throw std::domain_error("schwarz_radius_map: s must be >= 0");
  if (s == 0.0) return 0.0;
  return std::pow(s / (avr * specialfn::unit_ball_volume(n)), 1.0 / n);
}

double lp_norm(double p, const DecreasingProfile& h) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
  return std::pow(h.integral_of_power(0.0, h.total(), p), 1.0 / p);
}

double lp_norm(double p, const WeightedSample& h) {
  if (!(p > 0.0)) throw std::domain_error("lp_norm: p must be positive");
  double sum = 0.0;
  for (const Cell& c : h.cells()) sum += power(c.value, p) * c.measure;
  return std::pow(sum, 1.0 / p);
}

double hardy_littlewood_gap(const WeightedSample& h, const WeightedSample& w) {
  if (h.size() != w.size()) throw ContractError("hardy_littlewood_gap: cell lists differ in length");
  double direct = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Cell& a = h.cells()[i];
    const Cell& b = w.cells()[i];
    if (std::abs(a.measure - b.measure) > 1e-12 * std::max(a.measure, b.measure)) {
      throw ContractError("hardy_littlewood_gap: cell measures are not aligned");
    }
    direct += a.value * b.value * a.measure;
  }

  const DecreasingProfile hs = decreasing_rearrangement(h);
  const DecreasingProfile ws = decreasing_rearrangement(w);
  const auto hb = hs.breakpoints();
  const auto wb = ws.breakpoints();
  const double end = std::min(hb.back(), wb.back());
  double rearranged = 0.0;
  double s = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (s < end && i < hs.values().size() && j < ws.values().size()) {
    const double next = std::min({hb[i + 1], wb[j + 1], end});
    rearranged += hs.values()[i] * ws.values()[j] * (next - s);
    s = next;
    if (hb[i + 1] <= s) ++i;
    if (wb[j + 1] <= s) ++j;
  }
  return rearranged - direct;
}

DominanceResult hlp_dominance(const DecreasingProfile& f, const DecreasingProfile& g, double p, double q) {
  if (!(p > 0.0) || !(q >= p)) throw std::domain_error("hlp_dominance: need 0 < p <= q");
  const double R = f.total();
  if (std::abs(R - g.total()) > 1e-12 * std::max(R, g.total())) {
    throw ContractError("hlp_dominance: profiles live on different intervals");
  }
  std::vector<double> points = f.nodes();
  const std::vector<double> more = g.nodes();
  points.insert(points.end(), more.begin(), more.end());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const double fp_total = f.integral_of_power(0.0, R, p);
  const double gp_total = g.integral_of_power(0.0, R, p);
  const double tol = 1e-12 * std::max({1.0, fp_total, gp_total});
  double fp = 0.0;
  double gp = 0.0;
  bool holds = true;
  for (std::size_t k = 1; k < points.size(); ++k) {
    const double a = points[k - 1];
    const double b = std::min(points[k], R);
    fp += f.integral_of_power(a, b, p);
    gp += g.integral_of_power(a, b, p);
    if (fp > gp + tol) {
      holds = false;
      break;
    }
  }
  const double gap = g.integral_of_power(0.0, R, q) - f.integral_of_power(0.0, R, q);
  return {holds, gap};
}

} // namespace symm::rearrange
