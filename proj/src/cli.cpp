#include "symm/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "symm/errors.hpp"
#include "symm/radial.hpp"
#include "symm/specialfn.hpp"

namespace symm::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void allow_only(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + (where.empty() ? "" : where + ".") + item.key() + "'");
  }
}

const json& require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError("missing key '" + (where.empty() ? "" : where + ".") + key + "'");
  return j.at(key);
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key + ": expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError(key + ": expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError(key + ": expected a string");
  return j.get<std::string>();
}

void read_number(const json& parent, const char* key, const std::string& where, double& out) {
  if (parent.contains(key)) out = number(parent.at(key), where + "." + key);
}

geometry::DomainSpec parse_domain(const json& j) {
  allow_only(j, "domain",
             {"kind", "shape", "width", "height", "center_offset", "r_min", "r_max", "theta_span", "alpha",
              "angular_cells"});
  geometry::DomainSpec d;
  const std::string kind = text(require(j, "domain", "kind"), "domain.kind");
  if (kind == "euclid_mask") d.kind = geometry::DomainKind::euclid_mask;
  else if (kind == "euclid_polar") d.kind = geometry::DomainKind::euclid_polar;
  else if (kind == "cone_polar") d.kind = geometry::DomainKind::cone_polar;
  else if (kind == "cone_radial") d.kind = geometry::DomainKind::cone_radial;
  else throw ConfigError("domain.kind: unknown kind '" + kind + "'");

  if (j.contains("shape")) {
    const std::string shape = text(j.at("shape"), "domain.shape");
    if (shape == "rectangle") d.shape = geometry::MaskShape::rectangle;
    else if (shape == "ellipse") d.shape = geometry::MaskShape::ellipse;
    else if (shape == "l_shape") d.shape = geometry::MaskShape::l_shape;
    else throw ConfigError("domain.shape: unknown shape '" + shape + "'");
  }
  read_number(j, "width", "domain", d.width);
  read_number(j, "height", "domain", d.height);
  read_number(j, "r_min", "domain", d.r_min);
  read_number(j, "r_max", "domain", d.r_max);
  read_number(j, "theta_span", "domain", d.theta_span);
  read_number(j, "alpha", "domain", d.alpha);
  if (j.contains("angular_cells")) d.angular_cells = integer(j.at("angular_cells"), "domain.angular_cells");
  if (j.contains("center_offset")) {
    const json& c = j.at("center_offset");
    if (!c.is_array() || c.size() != 2) throw ConfigError("domain.center_offset: expected [x, y]");
    d.center_offset = {number(c[0], "domain.center_offset"), number(c[1], "domain.center_offset")};
  }
  return d;
}

verify::CheckSpec parse_check(const json& j, std::size_t index) {
  const std::string where = "checks[" + std::to_string(index) + "]";
  verify::CheckSpec c;
  std::string name;
  const json* body = nullptr;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else if (j.is_object() && j.size() == 1) {
    name = j.begin().key();
    body = &j.begin().value();
  } else {
    throw ConfigError(where + ": expected a check name or a single-key object");
  }
  if (name == "talenti") c.kind = verify::CheckKind::talenti;
  else if (name == "faber_krahn") c.kind = verify::CheckKind::faber_krahn;
  else if (name == "hks") c.kind = verify::CheckKind::hks;
  else if (name == "moments") c.kind = verify::CheckKind::moments;
  else if (name == "chiti") c.kind = verify::CheckKind::chiti;
  else throw ConfigError(where + ": unknown check '" + name + "'");

  if (body != nullptr) {
    const std::string inner = where + "." + name;
    if (c.kind == verify::CheckKind::moments) {
      allow_only(*body, inner, {"k_max"});
      if (body->contains("k_max")) c.k_max = integer(body->at("k_max"), inner + ".k_max");
      if (c.k_max < 1 || c.k_max > 10) throw ConfigError(inner + ".k_max: must lie in [1, 10]");
    } else if (c.kind == verify::CheckKind::chiti) {
      allow_only(*body, inner, {"p", "q", "which_eigenpair"});
      read_number(*body, "p", inner, c.p);
      read_number(*body, "q", inner, c.q);
      if (body->contains("which_eigenpair")) {
        c.which_eigenpair = integer(body->at("which_eigenpair"), inner + ".which_eigenpair");
      }
      if (!(c.p > 0.0) || !(c.q >= c.p)) throw ConfigError(inner + ": need 0 < p <= q");
      if (c.which_eigenpair != 1 && c.which_eigenpair != 2) throw ConfigError(inner + ".which_eigenpair: must be 1 or 2");
    } else {
      allow_only(*body, inner, {});
    }
  }
  return c;
}

std::vector<std::pair<double, double>> read_source_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("source.path: cannot open '" + path.string() + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("r,value", 0) != 0) throw ConfigError("source.path: expected header 'r,value'");
  std::vector<std::pair<double, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double r = 0.0;
    double v = 0.0;
    char comma = 0;
    if (!(row >> r >> comma >> v) || comma != ',') throw ConfigError("source.path: bad row '" + line + "'");
    rows.emplace_back(r, v);
  }
  if (rows.empty()) throw ConfigError("source.path: no rows");
  return rows;
}

verify::SourceSpec parse_source(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("source: expected an object");
  const std::string type = text(require(j, "source", "type"), "source.type");
  verify::SourceSpec s;
  if (type == "constant") {
    allow_only(j, "source", {"type", "value"});
    s.kind = verify::SourceKind::constant;
    read_number(j, "value", "source", s.value);
  } else if (type == "radial_step") {
    allow_only(j, "source", {"type", "radius", "inner", "outer"});
    s.kind = verify::SourceKind::radial_step;
    read_number(j, "radius", "source", s.radius);
    read_number(j, "inner", "source", s.inner);
    read_number(j, "outer", "source", s.outer);
  } else if (type == "file") {
    allow_only(j, "source", {"type", "path"});
    s.kind = verify::SourceKind::tabulated;
    fs::path p = text(require(j, "source", "path"), "source.path");
    if (p.is_relative()) p = base_dir / p;
    s.table = read_source_table(p);
  } else {
    throw ConfigError("source.type: unknown type '" + type + "'");
  }
  return s;
}

std::string format_number(double x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

std::string report_name(const verify::ComparisonReport& r) {
  std::string name = verify::to_string(r.theorem);
  std::map<std::string, double> params(r.params.begin(), r.params.end());
  if (r.theorem == verify::Theorem::saint_venant_k || r.theorem == verify::Theorem::linf_moment_k) {
    name += std::to_string(static_cast<int>(params["k"]));
  }
  if (r.theorem == verify::Theorem::chiti) {
    name += "_p" + format_number(params["p"]) + "_q" + format_number(params["q"]);
    if (params["which_eigenpair"] == 2.0) name += "_second";
  }
  return name;
}

// Builds the coarsest mesh and the source on it, so that bad parameters surface as config errors.
void validate_scenario(const ScenarioConfig& config, bool need_source) {
  geometry::DomainSpec spec = config.domain;
  spec.resolution = config.levels.front();
  try {
    const geometry::Mesh mesh = geometry::build_mesh(spec);
    if (need_source) {
      const pde::Field f = verify::evaluate_source(config.source, spec, mesh);
      double peak = 0.0;
      for (double v : f.values) peak = std::max(peak, v);
      if (peak == 0.0) throw ConfigError("source: identically zero, the comparison needs a nonzero source");
    }
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  } catch (const UnsupportedGeometry& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

bool has_talenti(const ScenarioConfig& config) {
  for (const auto& c : config.checks) {
    if (c.kind == verify::CheckKind::talenti) return true;
  }
  return false;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::string profile_csv(const verify::TalentiProfiles& p) {
  std::ostringstream s;
  verify::write_talenti_csv(p, s);
  return s.str();
}

std::string format_row(const std::vector<std::string>& cells, const std::vector<int>& widths) {
  std::ostringstream s;
  for (std::size_t i = 0; i < cells.size(); ++i) s << std::left << std::setw(widths[i]) << cells[i];
  std::string line = s.str();
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line + "\n";
}

std::string scientific(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

} // namespace

ScenarioConfig parse_config(const json& j, const fs::path& base_dir) {
  allow_only(j, "", {"domain", "checks", "source", "levels", "output_dir", "seed", "equality"});
  ScenarioConfig c;
  c.domain_json = nlohmann::ordered_json::parse(require(j, "", "domain").dump());
  c.domain = parse_domain(j.at("domain"));

  const json& checks = require(j, "", "checks");
  if (!checks.is_array() || checks.empty()) throw ConfigError("checks: expected a nonempty array");
  for (std::size_t i = 0; i < checks.size(); ++i) c.checks.push_back(parse_check(checks[i], i));

  if (j.contains("source")) c.source = parse_source(j.at("source"), base_dir);

  const json& levels = require(j, "", "levels");
  if (!levels.is_array() || levels.empty()) throw ConfigError("levels: expected a nonempty array");
  for (const json& l : levels) c.levels.push_back(integer(l, "levels"));
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    if (c.levels[i] < 8) throw ConfigError("levels: resolutions must be at least 8");
    if (i > 0 && c.levels[i] <= c.levels[i - 1]) throw ConfigError("levels: must be strictly ascending");
  }

  if (j.contains("output_dir")) c.output_dir = text(j.at("output_dir"), "output_dir");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("equality")) {
    if (!j.at("equality").is_boolean()) throw ConfigError("equality: expected true or false");
    c.equality = j.at("equality").get<bool>();
  }
  return c;
}

ScenarioConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j, path.parent_path());
}

std::vector<int> parse_dimension_list(const std::string& input) {
  std::vector<int> out;
  const auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("--n: '" + input + "' is not a dimension list");
    }
    if (used != s.size()) throw ConfigError("--n: '" + input + "' is not a dimension list");
    return v;
  };
  const std::size_t range = input.find("..");
  if (range != std::string::npos) {
    const int lo = parse_int(input.substr(0, range));
    const int hi = parse_int(input.substr(range + 2));
    if (hi < lo) throw ConfigError("--n: empty range '" + input + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  } else {
    std::stringstream s(input);
    std::string item;
    while (std::getline(s, item, ',')) out.push_back(parse_int(item));
  }
  if (out.empty()) throw ConfigError("--n: no dimensions given");
  for (int n : out) {
    if (n < 2 || n > 10) throw ConfigError("--n: dimension " + std::to_string(n) + " outside [2, 10]");
  }
  return out;
}

fs::path output_directory(const ScenarioConfig& config) {
  if (const char* env = std::getenv("SYMM_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return config.output_dir;
}

int cmd_constants(const std::vector<int>& dimensions, std::ostream& out) {
  const std::vector<int> widths{4, 22, 22, 22, 22, 22, 22};
  out << format_row({"n", "omega_n", "j_{n/2-1,1}", "T1/omega_n", "1/(n(n+2))", "T2/omega_n", "4/(n^2(n+2)(n+4))"},
                    widths);
  char buf[7][32];
  for (int n : dimensions) {
    const double omega = specialfn::unit_ball_volume(n);
    const double j = specialfn::bessel_first_zero(specialfn::BesselOrder::for_dimension(n));
    const auto rows = radial::moment_sequence_ball(radial::SymmetrizationContext(n, 1.0, omega), 2);
    std::snprintf(buf[0], sizeof buf[0], "%d", n);
    std::snprintf(buf[1], sizeof buf[1], "%.16g", omega);
    std::snprintf(buf[2], sizeof buf[2], "%.16g", j);
    std::snprintf(buf[3], sizeof buf[3], "%.16g", rows[0].torsion / omega);
    std::snprintf(buf[4], sizeof buf[4], "%.16g", 1.0 / (n * (n + 2.0)));
    std::snprintf(buf[5], sizeof buf[5], "%.16g", rows[1].torsion / omega);
    std::snprintf(buf[6], sizeof buf[6], "%.16g", 4.0 / (n * n * (n + 2.0) * (n + 4.0)));
    out << format_row({buf[0], buf[1], buf[2], buf[3], buf[4], buf[5], buf[6]}, widths);
  }
  return kExitPassed;
}

int cmd_verify(const fs::path& config_path, int jobs, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = load_config(config_path);
    if (config.levels.size() < 3) throw ConfigError("levels: verify needs at least 3 resolutions");
    validate_scenario(config, has_talenti(config));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  verify::StudyOptions options;
  options.source = config.source;
  options.expect_equality = config.equality;
  options.jobs = 1;

  std::vector<verify::StudyResult> results(config.checks.size());
  try {
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t start = 0; start < config.checks.size(); start += width) {
      std::vector<std::future<verify::StudyResult>> batch;
      for (std::size_t i = start; i < std::min(config.checks.size(), start + width); ++i) {
        batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, [&, i] {
          return verify::convergence_study(config.checks[i], config.domain, config.levels, options);
        }));
      }
      for (std::size_t i = 0; i < batch.size(); ++i) results[start + i] = batch[i].get();
    }
  } catch (const std::exception& e) {
    err << "verification error: " << e.what() << "\n";
    return kExitFailed;
  }

  const fs::path dir = output_directory(config);
  fs::create_directories(dir);
  bool all_passed = true;
  const std::vector<int> widths{22, 8, 16, 16, 16, 8, 6};
  std::string summary = format_row({"report", "passed", "slack", "tolerance", "slack_0", "rate", "trend"}, widths);
  for (const verify::StudyResult& result : results) {
    for (const verify::ComparisonReport& report : result.reports) {
      nlohmann::ordered_json j = verify::to_json(report);
      j["domain"] = config.domain_json;
      j["seed"] = config.seed;
      const std::string name = report_name(report);
      write_text(dir / (name + ".json"), j.dump(2) + "\n");
      all_passed = all_passed && report.passed;
      char rate[16];
      std::snprintf(rate, sizeof rate, "%.2f", report.rate.value_or(0.0));
      summary += format_row({name, report.passed ? "yes" : "NO", scientific(report.slack), scientific(report.tolerance),
                             scientific(report.extrapolated_slack.value_or(report.slack)), rate,
                             report.inconclusive ? "flag" : "ok"},
                            widths);
    }
    for (const auto& [resolution, profiles] : result.profiles) {
      write_text(dir / ("talenti_profile_" + std::to_string(resolution) + ".csv"), profile_csv(profiles));
    }
  }
  write_text(dir / "summary.txt", summary);
  out << summary;
  return all_passed ? kExitPassed : kExitFailed;
}

int cmd_profile(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  ScenarioConfig config;
  try {
    config = load_config(config_path);
    validate_scenario(config, true);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const fs::path dir = output_directory(config);
  fs::create_directories(dir);
  try {
    for (int resolution : config.levels) {
      geometry::DomainSpec spec = config.domain;
      spec.resolution = resolution;
      const geometry::Mesh mesh = geometry::build_mesh(spec);
      const verify::TalentiResult result = verify::verify_talenti(verify::evaluate_source(config.source, spec, mesh));
      const fs::path file = dir / ("talenti_profile_" + std::to_string(resolution) + ".csv");
      write_text(file, profile_csv(result.profiles));
      out << file.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "profile error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitPassed;
}

int run(int argc, char** argv) {
  CLI::App app{"Symmetrization comparison checks on planar domains and flat cones"};
  app.require_subcommand(1);

  std::string dims = "2..10";
  CLI::App* constants = app.add_subcommand("constants", "Ball volumes, Bessel zeros and ball moment constants");
  constants->add_option("--n", dims, "Dimensions: a range like 2..10 or a list like 2,3,5");

  std::string verify_config;
  int jobs = 1;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run every check in a scenario config");
  verify_cmd->add_option("config", verify_config, "Scenario config (JSON)")->required();
  verify_cmd->add_option("--jobs", jobs, "Checks run concurrently")->check(CLI::PositiveNumber);

  std::string profile_config;
  CLI::App* profile_cmd = app.add_subcommand("profile", "Write u* and v* as CSV for each level");
  profile_cmd->add_option("config", profile_config, "Scenario config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (constants->parsed()) {
    try {
      return cmd_constants(parse_dimension_list(dims), std::cout);
    } catch (const ConfigError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  if (verify_cmd->parsed()) return cmd_verify(verify_config, jobs, std::cout, std::cerr);
  return cmd_profile(profile_config, std::cout, std::cerr);
}

} // namespace symm::cli
