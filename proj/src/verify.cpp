#include "symm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>

#include "symm/radial.hpp"
#include "symm/specialfn.hpp"

namespace symm::verify {

namespace {

constexpr int kUniformSamples = 10000;
constexpr double kAllowanceFactor = 2.0;
constexpr double kEqualityLimit = 1e-3;
// Floor on every allowance: the linear solves are only accurate to about this level.
constexpr double kRoundoff = 1e-9;
constexpr double kLevelMerge = 1e-8;
// Level-to-level changes below this fraction of the bound are rounding, not a trend.
constexpr double kNoise = 1e-10;

radial::SymmetrizationContext context(const geometry::Mesh& mesh) {
  return radial::SymmetrizationContext(mesh.n, mesh.avr, mesh.volume);
}

geometry::Mesh unit_disk(int resolution) {
  geometry::DomainSpec spec;
  spec.kind = geometry::DomainKind::cone_radial;
  spec.resolution = resolution;
  return geometry::build_mesh(spec);
}

double boundary_layer(const geometry::Mesh& mesh) {
  double b = 0.0;
  for (std::size_t i = 0; i < mesh.cells(); ++i) {
    if (mesh.boundary_weights[i] > 0.0) b += mesh.measures[i];
  }
  return b;
}

// Cell values sample u at cell centres, so each level of u* belongs at the
// middle of its rank interval. Linear through those points, u*(|Omega|) = 0.
// Levels closer than kLevelMerge * max u are one level split by solver rounding
// (a ring of a polar mesh, say) and are merged before placing the midpoints.
rearrange::DecreasingProfile centred_reconstruction(const rearrange::DecreasingProfile& step) {
  const auto bp = step.breakpoints();
  const auto v = step.values();
  const double merge = kLevelMerge * v[0];
  std::vector<double> s{0.0};
  std::vector<double> y{v[0]};
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    double mass = 0.0;
    while (j < v.size() && v[i] - v[j] <= merge) {
      mass += v[j] * (bp[j + 1] - bp[j]);
      ++j;
    }
    s.push_back(0.5 * (bp[i] + bp[j]));
    y.push_back(mass / (bp[j] - bp[i]));
    i = j;
  }
  s.push_back(bp.back());
  y.push_back(0.0);
  return rearrange::DecreasingProfile::linear(std::move(s), std::move(y));
}

// min of v* - u* over the nodes of u and 10^4 uniform points of [0, cut].
// At a node of a step profile the left limit is the larger side.
double talenti_margin(const rearrange::DecreasingProfile& u, const rearrange::DecreasingProfile& v, double cut) {
  const double end = std::min(u.total(), v.total());
  double margin = v(0.0) - u(0.0);
  for (double s : u.breakpoints()) {
    if (s <= 0.0 || s > cut) continue;
    margin = std::min(margin, v(std::min(s, end)) - u.left_limit(std::min(s, end)));
  }
  for (int j = 0; j <= kUniformSamples; ++j) {
    const double s = std::min(cut * j / kUniformSamples, end);
    margin = std::min(margin, v(s) - u(s));
  }
  return margin;
}

struct TalentiCore {
  double margin;      // reconstructed u*
  double step_margin; // raw step u*
  TalentiProfiles profiles;
};

TalentiCore talenti_core(const pde::Field& source) {
  const geometry::Mesh& mesh = *source.mesh;
  double peak = 0.0;
  for (double f : source.values) {
    if (f < 0.0) throw std::domain_error("verify_talenti: source must be nonnegative");
    peak = std::max(peak, f);
  }
  if (peak == 0.0) throw std::domain_error("verify_talenti: source is identically zero");
  const pde::Field u = pde::poisson_solve(source);
  rearrange::DecreasingProfile u_star = rearrange::decreasing_rearrangement(pde::field_to_sample(u));
  const rearrange::DecreasingProfile f_star = rearrange::decreasing_rearrangement(pde::field_to_sample(source));
  rearrange::DecreasingProfile v_star = radial::talenti_profile(f_star, context(mesh));
  // Cells with a Dirichlet face resolve u only to within their own width; they are left out.
  const double cut = std::max(0.0, mesh.volume - boundary_layer(mesh));
  const double margin = talenti_margin(centred_reconstruction(u_star), v_star, cut);
  const double step_margin = talenti_margin(u_star, v_star, cut);
  return {margin, step_margin, {std::move(u_star), std::move(v_star)}};
}

ComparisonReport single_level(Theorem theorem, const geometry::Mesh& mesh, double value, double bound, double slack,
                              double relative_allowance) {
  ComparisonReport r;
  r.theorem = theorem;
  r.value = value;
  r.bound = bound;
  r.slack = slack;
  r.tolerance = (kAllowanceFactor * relative_allowance + kRoundoff) * std::abs(bound);
  r.passed = r.slack >= -r.tolerance;
  r.levels.push_back({mesh.resolution, r.slack, r.tolerance, value, bound});
  return r;
}

std::vector<pde::EigenPair> eigenpairs_for(const geometry::Mesh& mesh, const std::vector<pde::EigenPair>* pairs,
                                           int count) {
  if (pairs != nullptr && static_cast<int>(pairs->size()) >= count) return *pairs;
  return pde::smallest_eigenpairs(mesh, count);
}

double norm_ratio(const pde::Field& field, double p, double q) {
  const rearrange::WeightedSample sample = rearrange::WeightedSample::absolute_value(field.values, field.mesh->measures);
  return rearrange::lp_norm(q, sample) / rearrange::lp_norm(p, sample);
}

std::vector<ComparisonReport> run_check(const CheckSpec& check, const geometry::Mesh& mesh, const pde::Field* source,
                                        std::optional<TalentiProfiles>* profiles) {
  switch (check.kind) {
  case CheckKind::talenti: {
    TalentiResult result = verify_talenti(*source);
    if (profiles != nullptr) *profiles = std::move(result.profiles);
    return {result.report};
  }
  case CheckKind::faber_krahn: return {verify_faber_krahn(mesh)};
  case CheckKind::hks: return {verify_hks(mesh)};
  case CheckKind::moments: return verify_moments(mesh, check.k_max);
  case CheckKind::chiti: return {verify_chiti(mesh, check.p, check.q, check.which_eigenpair)};
  }
  return {};
}

double source_value(const SourceSpec& source, double r) {
  switch (source.kind) {
  case SourceKind::constant: return source.value;
  case SourceKind::radial_step: return r < source.radius ? source.inner : source.outer;
  case SourceKind::tabulated: {
    const auto& t = source.table;
    if (r <= t.front().first) return t.front().second;
    if (r >= t.back().first) return t.back().second;
    const auto hi = std::upper_bound(t.begin(), t.end(), r, [](double x, const auto& row) { return x < row.first; });
    const auto lo = hi - 1;
    const double w = (r - lo->first) / (hi->first - lo->first);
    return (1.0 - w) * lo->second + w * hi->second;
  }
  }
  return 0.0;
}

} // namespace

std::string to_string(Theorem theorem) {
  switch (theorem) {
  case Theorem::talenti: return "talenti";
  case Theorem::faber_krahn: return "faber_krahn";
  case Theorem::hks: return "hks";
  case Theorem::saint_venant_k: return "saint_venant_k";
  case Theorem::linf_moment_k: return "linf_moment_k";
  case Theorem::chiti: return "chiti";
  }
  return "unknown";
}

nlohmann::ordered_json to_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["theorem"] = to_string(report.theorem);
  j["passed"] = report.passed;
  j["slack"] = report.slack;
  j["tolerance"] = report.tolerance;
  j["value"] = report.value;
  j["bound"] = report.bound;
  if (report.normalized_value) {
    j["normalized_value"] = *report.normalized_value;
    j["normalized_bound"] = *report.normalized_bound;
  }
  j["levels"] = nlohmann::ordered_json::array();
  for (const Level& l : report.levels) {
    j["levels"].push_back({{"resolution", l.resolution},
                           {"slack", l.slack},
                           {"tolerance", l.tolerance},
                           {"value", l.value},
                           {"bound", l.bound}});
  }
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.params) j["params"][key] = value;
  if (report.extrapolated_slack) {
    j["extrapolated_slack"] = *report.extrapolated_slack;
    j["extrapolated_value"] = *report.extrapolated_value;
    j["rate"] = *report.rate;
    j["inconclusive"] = report.inconclusive;
  }
  return j;
}

namespace allowance {

double talenti(int resolution) { return talenti(resolution, rearrange::DecreasingProfile::step({0.0, 1.0}, {1.0})); }

double talenti(int resolution, const rearrange::DecreasingProfile& f_star) {
  // The symmetrized source on the unit disk: f#(r) = f*(r^2 |Omega|).
  const geometry::Mesh disk = unit_disk(resolution);
  std::vector<double> f(disk.cells());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = disk.centers[i][0];
    f[i] = f_star(std::min(r * r, 1.0) * f_star.total());
  }
  const TalentiCore core = talenti_core(pde::make_field(disk, std::move(f)));
  return std::abs(core.margin) / core.profiles.v_star(0.0);
}

double eigenvalue(int resolution) {
  const geometry::Mesh disk = unit_disk(resolution);
  const double lambda = pde::smallest_eigenpairs(disk, 1)[0].lambda;
  const double exact = radial::faber_krahn_bound(context(disk));
  return std::abs(lambda - exact) / exact;
}

std::pair<double, double> moments(int resolution, int k) {
  const geometry::Mesh disk = unit_disk(resolution);
  const auto rows = pde::moment_hierarchy(disk, k);
  const auto ball = radial::moment_sequence_ball(context(disk), k);
  const double t_exact = disk.avr * ball[k - 1].torsion;
  const double j_exact = ball[k - 1].sup;
  return {std::abs(rows[k].torsion - t_exact) / t_exact, std::abs(rows[k].sup - j_exact) / j_exact};
}

double chiti(int resolution, double p, double q) {
  const geometry::Mesh disk = unit_disk(resolution);
  const pde::EigenPair pair = pde::smallest_eigenpairs(disk, 1)[0];
  const double k = radial::chiti_constant(p, q, pair.lambda, disk.n, disk.avr);
  return std::abs(k - norm_ratio(pair.field, p, q)) / k;
}

} // namespace allowance

TalentiResult verify_talenti(const pde::Field& source) {
  const geometry::Mesh& mesh = *source.mesh;
  TalentiCore core = talenti_core(source);
  const double allowed =
      allowance::talenti(mesh.resolution, rearrange::decreasing_rearrangement(pde::field_to_sample(source)));
  const double u0 = core.profiles.u_star(0.0);
  const double v0 = core.profiles.v_star(0.0);
  ComparisonReport report =
      single_level(Theorem::talenti, mesh, u0, v0, core.margin, allowed);
  report.params.emplace_back("step_slack", core.step_margin);
  return {std::move(report), std::move(core.profiles)};
}

ComparisonReport verify_faber_krahn(const geometry::Mesh& mesh, const std::vector<pde::EigenPair>* pairs) {
  const double lambda = eigenpairs_for(mesh, pairs, 1)[0].lambda;
  const double bound = radial::faber_krahn_bound(context(mesh));
  return single_level(Theorem::faber_krahn, mesh, lambda, bound, lambda - bound, allowance::eigenvalue(mesh.resolution));
}

ComparisonReport verify_hks(const geometry::Mesh& mesh, const std::vector<pde::EigenPair>* pairs) {
  const double lambda = eigenpairs_for(mesh, pairs, 2)[1].lambda;
  const double bound = radial::second_eig_bound(context(mesh));
  return single_level(Theorem::hks, mesh, lambda, bound, lambda - bound, allowance::eigenvalue(mesh.resolution));
}

std::vector<ComparisonReport> verify_moments(const geometry::Mesh& mesh, int k_max) {
  if (k_max < 1 || k_max > 10) throw std::domain_error("verify_moments: k_max must lie in [1, 10]");
  const auto rows = pde::moment_hierarchy(mesh, k_max);
  const auto ball = radial::moment_sequence_ball(context(mesh), k_max);
  std::vector<ComparisonReport> reports;
  for (int k = 1; k <= k_max; ++k) {
    const auto [t_defect, j_defect] = allowance::moments(mesh.resolution, k);
    const double t_bound = mesh.avr * ball[k - 1].torsion;
    ComparisonReport t = single_level(Theorem::saint_venant_k, mesh, rows[k].torsion, t_bound,
                                      t_bound - rows[k].torsion, t_defect);
    t.params.emplace_back("k", k);
    if (k == 1) {
      t.normalized_value = radial::saint_venant_normalized(rows[1].torsion, mesh.volume, mesh.n, mesh.avr);
      t.normalized_bound = 1.0 / (mesh.n * (mesh.n + 2.0));
    }
    reports.push_back(std::move(t));

    const double j_bound = ball[k - 1].sup;
    ComparisonReport j =
        single_level(Theorem::linf_moment_k, mesh, rows[k].sup, j_bound, j_bound - rows[k].sup, j_defect);
    j.params.emplace_back("k", k);
    reports.push_back(std::move(j));
  }
  return reports;
}

ComparisonReport verify_chiti(const geometry::Mesh& mesh, double p, double q, int which_eigenpair,
                              const std::vector<pde::EigenPair>* pairs) {
  if (!(p > 0.0) || !(q >= p)) throw std::domain_error("verify_chiti: need 0 < p <= q");
  if (which_eigenpair != 1 && which_eigenpair != 2) throw std::domain_error("verify_chiti: eigenpair must be 1 or 2");
  const std::vector<pde::EigenPair> found = eigenpairs_for(mesh, pairs, which_eigenpair);
  const pde::EigenPair& pair = found[which_eigenpair - 1];
  const double ratio = p == q ? 1.0 : norm_ratio(pair.field, p, q);
  const double k = radial::chiti_constant(p, q, pair.lambda, mesh.n, mesh.avr);
  const double defect = p == q ? 0.0 : allowance::chiti(mesh.resolution, p, q);
  ComparisonReport r = single_level(Theorem::chiti, mesh, ratio, k, k - ratio, defect);
  r.params = {{"p", p}, {"q", q}, {"which_eigenpair", which_eigenpair}};
  return r;
}

std::string check_label(const CheckSpec& check) {
  switch (check.kind) {
  case CheckKind::talenti: return "talenti";
  case CheckKind::faber_krahn: return "faber_krahn";
  case CheckKind::hks: return "hks";
  case CheckKind::moments: return "moments";
  case CheckKind::chiti: return "chiti";
  }
  return "unknown";
}

pde::Field evaluate_source(const SourceSpec& source, const geometry::DomainSpec& domain, const geometry::Mesh& mesh) {
  if (source.kind == SourceKind::tabulated) {
    if (source.table.empty()) throw std::domain_error("evaluate_source: empty table");
    for (std::size_t i = 1; i < source.table.size(); ++i) {
      if (!(source.table[i].first > source.table[i - 1].first)) {
        throw std::domain_error("evaluate_source: table radii must increase");
      }
    }
  }
  std::vector<double> values(mesh.cells());
  for (std::size_t i = 0; i < mesh.cells(); ++i) {
    const auto& c = mesh.centers[i];
    const double r = mesh.polar() ? c[0] : std::hypot(c[0] - domain.center_offset[0], c[1] - domain.center_offset[1]);
    values[i] = source_value(source, r);
    if (!(values[i] >= 0.0)) throw std::domain_error("evaluate_source: source must be nonnegative");
  }
  return pde::make_field(mesh, std::move(values));
}

Extrapolation extrapolate(const double h[3], const double y[3], double noise) {
  const double d1 = y[0] - y[1];
  const double d2 = y[1] - y[2];
  const double scale = std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y[2])});
  const double flat = std::max(1e-12 * scale, noise);
  if (std::abs(d1) <= flat && std::abs(d2) <= flat) return {y[2], 0.0, false};
  if (d1 * d2 <= 0.0) return {y[2], 0.0, true};
  const double ratio = d1 / d2;
  const auto g = [&](double p) {
    return (std::pow(h[0], p) - std::pow(h[1], p)) / (std::pow(h[1], p) - std::pow(h[2], p));
  };
  double lo = 1e-6;
  double hi = 12.0;
  if (ratio <= g(lo)) return {y[2], 0.0, true}; // differences not shrinking
  if (ratio >= g(hi)) return {y[2], hi, false};
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < ratio ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double c = d2 / (std::pow(h[1], p) - std::pow(h[2], p));
  return {y[2] - c * std::pow(h[2], p), p, false};
}

StudyResult convergence_study(const CheckSpec& check, const geometry::DomainSpec& domain, const std::vector<int>& levels,
                              const StudyOptions& options) {
  if (levels.size() < 3) throw std::domain_error("convergence_study: at least 3 levels required");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (levels[i] <= levels[i - 1]) throw std::domain_error("convergence_study: levels must be ascending");
  }

  struct Outcome {
    std::vector<ComparisonReport> reports;
    std::optional<TalentiProfiles> profiles;
  };
  const auto run_level = [&](int resolution) {
    geometry::DomainSpec spec = domain;
    spec.resolution = resolution;
    const geometry::Mesh mesh = geometry::build_mesh(spec);
    Outcome out;
    if (check.kind == CheckKind::talenti) {
      const pde::Field source = evaluate_source(options.source, spec, mesh);
      out.reports = run_check(check, mesh, &source, &out.profiles);
    } else {
      out.reports = run_check(check, mesh, nullptr, nullptr);
    }
    return out;
  };

  std::vector<Outcome> outcomes(levels.size());
  const std::size_t jobs = static_cast<std::size_t>(std::max(1, options.jobs));
  if (jobs == 1) {
    for (std::size_t i = 0; i < levels.size(); ++i) outcomes[i] = run_level(levels[i]);
  } else {
    for (std::size_t start = 0; start < levels.size(); start += jobs) {
      std::vector<std::future<Outcome>> batch;
      for (std::size_t i = start; i < std::min(levels.size(), start + jobs); ++i) {
        batch.push_back(std::async(std::launch::async, run_level, levels[i]));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) outcomes[start + i] = batch[i].get();
    }
  }

  StudyResult result;
  const std::size_t count = outcomes.front().reports.size();
  for (std::size_t r = 0; r < count; ++r) {
    ComparisonReport merged = outcomes.back().reports[r];
    merged.levels.clear();
    merged.passed = true;
    for (const Outcome& o : outcomes) {
      const ComparisonReport& level = o.reports[r];
      merged.levels.push_back(level.levels.front());
      merged.passed = merged.passed && level.passed;
    }
    const std::size_t m = merged.levels.size();
    double h[3];
    double slack[3];
    double value[3];
    for (int i = 0; i < 3; ++i) {
      const Level& l = merged.levels[m - 3 + i];
      h[i] = 1.0 / l.resolution;
      slack[i] = l.slack;
      value[i] = l.value;
    }
    const double noise = kNoise * std::abs(merged.bound);
    const Extrapolation s = extrapolate(h, slack, noise);
    const Extrapolation v = extrapolate(h, value, noise);
    merged.extrapolated_slack = s.limit;
    merged.extrapolated_value = v.limit;
    merged.rate = s.rate;
    merged.inconclusive = s.inconclusive;
    if (options.expect_equality) {
      // A flat trend has already converged; its rate carries no information.
      const bool flat = s.rate == 0.0 && !s.inconclusive;
      merged.passed = merged.passed && !s.inconclusive && std::abs(s.limit) <= kEqualityLimit && (s.rate >= 1.0 || flat);
    }
    result.reports.push_back(std::move(merged));
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].profiles) result.profiles.emplace_back(levels[i], std::move(*outcomes[i].profiles));
  }
  return result;
}

void write_talenti_csv(const TalentiProfiles& profiles, std::ostream& out) {
  std::vector<double> s = profiles.u_star.nodes();
  const std::vector<double> more = profiles.v_star.nodes();
  s.insert(s.end(), more.begin(), more.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  const double total = std::min(profiles.u_star.total(), profiles.v_star.total());
  const auto precision = out.precision(17);
  out << "s,u_star,v_star\n";
  for (double x : s) {
    if (x > total) break;
    out << x << ',' << profiles.u_star(x) << ',' << profiles.v_star(x) << '\n';
  }
  out.precision(precision);
}

} // namespace symm::verify
