#ifndef SYMM_VERIFY_HPP
#define SYMM_VERIFY_HPP

// Discrete checks of the comparison, eigenvalue, moment and reverse Hoelder
// inequalities, each judged against the discretization defect of the unit
// disk, where every one of them is an equality.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "symm/geometry.hpp"
#include "symm/pde.hpp"
#include "symm/rearrange.hpp"

namespace symm::verify {

enum class Theorem { talenti, faber_krahn, hks, saint_venant_k, linf_moment_k, chiti };
std::string to_string(Theorem theorem);

struct Level {
  int resolution;
  double slack;
  double tolerance;
  double value; ///< measured left-hand side
  double bound; ///< right-hand side from the ball
};

struct ComparisonReport {
  Theorem theorem = Theorem::talenti;
  double slack = 0.0;     ///< at the finest level; positive means the inequality holds strictly
  double tolerance = 0.0; ///< discretization allowance at the finest level
  bool passed = false;    ///< every level has slack >= -tolerance (and, for equality runs, the limit is 0)
  std::vector<Level> levels;
  std::vector<std::pair<std::string, double>> params;
  double value = 0.0;
  double bound = 0.0;
  std::optional<double> normalized_value; ///< saint_venant_k with k = 1 only
  std::optional<double> normalized_bound;

  // Filled by convergence_study from the last three levels.
  std::optional<double> extrapolated_slack;
  std::optional<double> extrapolated_value;
  std::optional<double> rate;
  bool inconclusive = false;
};

nlohmann::ordered_json to_json(const ComparisonReport& report);

/// Relative discretization defects of the unit disk at a given resolution,
/// measured on the 1-D radial reduction (identical to the polar mesh for radial data).
namespace allowance {
/// Driven by f = 1, or by the source whose rearrangement is `f_star`, moved onto the unit disk.
double talenti(int resolution);
double talenti(int resolution, const rearrange::DecreasingProfile& f_star);
double eigenvalue(int resolution);
/// {T_k defect, J_k defect}.
std::pair<double, double> moments(int resolution, int k);
double chiti(int resolution, double p, double q);
} // namespace allowance

struct TalentiProfiles {
  rearrange::DecreasingProfile u_star;
  rearrange::DecreasingProfile v_star;
};

struct TalentiResult {
  ComparisonReport report;
  TalentiProfiles profiles;
};

/// Solves -Delta u = f, compares u* with the ball solution v* at the breakpoints of u*
/// and 10^4 uniform points of [0, |Omega| - b], where b is the measure of the cells
/// that carry a Dirichlet face. Throws std::domain_error if f is negative or zero.
TalentiResult verify_talenti(const pde::Field& source);

/// Eigenpairs may be passed in to share one eigensolve between checks.
ComparisonReport verify_faber_krahn(const geometry::Mesh& mesh, const std::vector<pde::EigenPair>* pairs = nullptr);
ComparisonReport verify_hks(const geometry::Mesh& mesh, const std::vector<pde::EigenPair>* pairs = nullptr);

/// Reports T_1, J_1, ..., T_k, J_k in that order.
std::vector<ComparisonReport> verify_moments(const geometry::Mesh& mesh, int k_max);

ComparisonReport verify_chiti(const geometry::Mesh& mesh, double p, double q, int which_eigenpair = 1,
                              const std::vector<pde::EigenPair>* pairs = nullptr);

enum class CheckKind { talenti, faber_krahn, hks, moments, chiti };

struct CheckSpec {
  CheckKind kind = CheckKind::talenti;
  int k_max = 1;
  double p = 1.0;
  double q = 2.0;
  int which_eigenpair = 1;
};

std::string check_label(const CheckSpec& check);

enum class SourceKind { constant, radial_step, tabulated };

/// Source term for Talenti runs, as a function of the distance to the domain
/// centre (the shape centre for masks, the origin or apex for polar kinds).
struct SourceSpec {
  SourceKind kind = SourceKind::constant;
  double value = 1.0;  ///< constant
  double radius = 0.5; ///< radial_step: inner for r < radius, outer otherwise
  double inner = 1.0;
  double outer = 0.0;
  std::vector<std::pair<double, double>> table; ///< tabulated (r, value), r ascending; linear, clamped at the ends
};

pde::Field evaluate_source(const SourceSpec& source, const geometry::DomainSpec& domain, const geometry::Mesh& mesh);

struct StudyResult {
  std::vector<ComparisonReport> reports;
  /// One entry per level for Talenti studies.
  std::vector<std::pair<int, TalentiProfiles>> profiles;
};

struct StudyOptions {
  SourceSpec source;
  /// Extrapolated slack must vanish (|slack_0| <= 1e-3, rate >= 1) for the report to pass.
  bool expect_equality = false;
  int jobs = 1;
};

/// Runs one check at every resolution in `levels` (ascending, at least 3),
/// fits slack(h) = slack_0 + C h^p on the last three, and merges levels in order.
StudyResult convergence_study(const CheckSpec& check, const geometry::DomainSpec& domain, const std::vector<int>& levels,
                              const StudyOptions& options);

struct Extrapolation {
  double limit;
  double rate;
  bool inconclusive;
};

/// Fit y(h) = y_0 + C h^p through three points with h_1 > h_2 > h_3.
/// Differences within `noise` count as a flat sequence, which gives rate 0;
/// a sign change in the differences is inconclusive.
Extrapolation extrapolate(const double h[3], const double y[3], double noise = 0.0);

/// CSV "s,u_star,v_star" on the union of the profile nodes.
void write_talenti_csv(const TalentiProfiles& profiles, std::ostream& out);

} // namespace symm::verify

#endif
