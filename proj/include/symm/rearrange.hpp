#ifndef SYMM_REARRANGE_HPP
#define SYMM_REARRANGE_HPP

// Distribution functions, decreasing and Schwarz rearrangements, L^p norms,
// the Hardy-Littlewood inequality and the Hardy-Littlewood-Polya dominance
// lemma for functions given as weighted cells.

#include <iosfwd>
#include <span>
#include <vector>

namespace symm::rearrange {

/// One piece of a measurable function: a value held on a set of positive measure.
struct Cell {
  double value;
  double measure;
};

/// A nonnegative measurable function represented by (value, measure) cells.
class WeightedSample {
public:
  /// Throws std::domain_error on a negative or non-finite value or a non-positive measure,
  /// and on an empty cell list.
  explicit WeightedSample(std::vector<Cell> cells);

  /// |values| paired with measures. Sign conventions stay visible at the call site.
  static WeightedSample absolute_value(std::span<const double> values, std::span<const double> measures);

  std::span<const Cell> cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  double total_measure() const { return total_; }
  double max_value() const;

private:
  std::vector<Cell> cells_;
  double total_;
};

enum class Interpolation {
  step,   ///< value v_i on [s_{i-1}, s_i), right-continuous
  linear, ///< piecewise linear through node values at the breakpoints
  radial, ///< piecewise polynomial in the normalized radius (s / total)^{1/n}
};

/// Nonincreasing, nonnegative function on [0, total].
///
/// Step profiles come out of discrete data; radial profiles come out of the
/// ball formulas, where the natural smooth variable is the radius of the ball
/// of measure s rather than s itself. A radial profile is stored as panels in
/// rho = (s/total)^{1/n}, each carrying values at Chebyshev-Lobatto nodes.
class DecreasingProfile {
public:
  /// Nodes per panel of a radial profile.
  static constexpr int kPanelNodes = 17;

  static DecreasingProfile step(std::vector<double> breakpoints, std::vector<double> values);
  static DecreasingProfile linear(std::vector<double> breakpoints, std::vector<double> node_values);
  /// `rho_edges` are panel edges in [0, 1] starting at 0 and ending at 1;
  /// `node_values` holds kPanelNodes values per panel, ordered by increasing rho.
  static DecreasingProfile radial(int n, double total, std::vector<double> rho_edges,
                                  std::vector<double> node_values);

  Interpolation interpolation() const { return mode_; }
  double total() const { return breakpoints_.back(); }

  /// Breakpoints s_0 = 0 < ... < s_m = total (panel edges for radial profiles).
  std::span<const double> breakpoints() const { return breakpoints_; }
  /// Step values (m), linear node values (m + 1), or radial node values (m * kPanelNodes).
  std::span<const double> values() const { return values_; }
  /// Dimension attached to a radial profile, 0 otherwise.
  int dimension() const { return n_; }

  /// h(s) for 0 <= s <= total; right-continuous for step profiles, and h(total) = v_m.
  double operator()(double s) const;
  /// Left limit h(s^-) for 0 < s <= total. Equals operator() except at step breakpoints.
  double left_limit(double s) const;

  /// Integral of h^p over [a, b]. Exact for step profiles; Gauss-Legendre otherwise.
  double integral_of_power(double a, double b, double p) const;
  double integral() const { return integral_of_power(0.0, total(), 1.0); }

  /// mu(t) = |{s : h(s) > t}|.
  double distribution(double t) const;

  /// Every point at which the representation stores a value, ascending.
  std::vector<double> nodes() const;

  /// c * h for c >= 0.
  DecreasingProfile scaled(double c) const;

  /// Two-column CSV, header "s,value", one row per node in increasing s.
  void write_csv(std::ostream& out) const;

private:
  DecreasingProfile() = default;
  void validate() const;
  std::size_t panel_index(double rho) const;
  std::size_t first_piece(double s) const;
  double radial_value(std::size_t panel, double rho) const;
  double to_rho(double s) const;

  Interpolation mode_ = Interpolation::step;
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> rho_edges_;
  int n_ = 0;
};

/// mu_h(t) = sum of the measures of cells with value > t.
double distribution(const WeightedSample& h, double t);

/// Step profile h*: cells sorted by decreasing value, equal values merged into one step.
DecreasingProfile decreasing_rearrangement(const WeightedSample& h);

/// Radius r with avr * omega_n * r^n = s. The Schwarz rearrangement is
/// h#(x) = h*(avr |B(|x|)|), i.e. h* composed with the inverse of this map.
double schwarz_radius_map(double s, double avr, int n);

/// (int_0^total h*(s)^p ds)^{1/p}.
double lp_norm(double p, const DecreasingProfile& h);
/// (sum value^p * measure)^{1/p}, computed on the cells directly.
double lp_norm(double p, const WeightedSample& h);

/// int_0^|Omega| h* w* ds - int |h w|, for samples over the same cells.
/// Throws ContractError if the two cell lists do not carry the same measures.
double hardy_littlewood_gap(const WeightedSample& h, const WeightedSample& w);

struct DominanceResult {
  bool premise_holds;
  double conclusion_gap;
};

/// Checks int_0^s f^p <= int_0^s g^p + tol at every node s of either profile
/// and returns int g^q - int f^q. Throws ContractError if the intervals differ.
DominanceResult hlp_dominance(const DecreasingProfile& f, const DecreasingProfile& g, double p, double q);

} // namespace symm::rearrange

#endif
