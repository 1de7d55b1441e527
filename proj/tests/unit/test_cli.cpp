#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "symm/cli.hpp"

using namespace symm::cli;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "symm_cli_tests";
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const std::string& name, const json& j) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << j.dump(2);
  return path;
}

json small_square() {
  return json{{"domain", {{"kind", "euclid_mask"}, {"shape", "rectangle"}}},
              {"checks", {"talenti", "faber_krahn"}},
              {"source", {{"type", "constant"}, {"value", 1.0}}},
              {"levels", {8, 16, 24}},
              {"output_dir", (scratch_dir() / "out_small").string()}};
}

int run_args(std::vector<std::string> args) {
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int verify_exit(const json& j, const std::string& name) {
  std::ostringstream out;
  std::ostringstream err;
  return cmd_verify(write_config(name, j), 1, out, err);
}

} // namespace

TEST_CASE("dimension lists") {
  CHECK(parse_dimension_list("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_dimension_list("2,3") == std::vector<int>{2, 3});
  CHECK(parse_dimension_list("4") == std::vector<int>{4});
  CHECK_THROWS_AS(parse_dimension_list("1"), ConfigError);
  CHECK_THROWS_AS(parse_dimension_list("2..11"), ConfigError);
  CHECK_THROWS_AS(parse_dimension_list("x"), ConfigError);
}

TEST_CASE("constants table") {
  std::ostringstream out;
  CHECK(cmd_constants({2, 3}, out) == kExitPassed);
  const std::string text = out.str();
  CHECK(text.find("0.125") != std::string::npos);
  CHECK(text.find("0.04166666666666") != std::string::npos);
  CHECK(text.find("3.141592653589793") != std::string::npos);
  CHECK(run_args({"symmetrize", "constants", "--n", "1"}) == kExitConfig);
  CHECK(run_args({"symmetrize", "bogus"}) == kExitConfig);
}

TEST_CASE("strict config parsing") {
  const fs::path base = scratch_dir();
  const auto ok = parse_config(small_square(), base);
  CHECK(ok.levels == std::vector<int>{8, 16, 24});
  CHECK(ok.checks.size() == 2);
  CHECK(ok.seed == 20240917);

  auto missing = small_square();
  missing.erase("domain");
  CHECK_THROWS_WITH_AS(parse_config(missing, base), doctest::Contains("domain"), ConfigError);

  auto unknown = small_square();
  unknown["levles"] = {8, 16, 24};
  CHECK_THROWS_WITH_AS(parse_config(unknown, base), doctest::Contains("levles"), ConfigError);

  auto unknown_domain = small_square();
  unknown_domain["domain"]["radius"] = 1.0;
  CHECK_THROWS_WITH_AS(parse_config(unknown_domain, base), doctest::Contains("radius"), ConfigError);

  auto bad_check = small_square();
  bad_check["checks"] = {"faber-krahn"};
  CHECK_THROWS_AS(parse_config(bad_check, base), ConfigError);

  auto bad_levels = small_square();
  bad_levels["levels"] = {16, 8, 24};
  CHECK_THROWS_AS(parse_config(bad_levels, base), ConfigError);

  auto wrong_type = small_square();
  wrong_type["levels"] = "8,16";
  CHECK_THROWS_AS(parse_config(wrong_type, base), ConfigError);
}

TEST_CASE("verify exit codes") {
  CHECK(verify_exit(small_square(), "ok.json") == kExitPassed);
  const fs::path out = scratch_dir() / "out_small";
  CHECK(fs::exists(out / "talenti.json"));
  CHECK(fs::exists(out / "faber_krahn.json"));
  CHECK(fs::exists(out / "talenti_profile_24.csv"));
  CHECK(fs::exists(out / "summary.txt"));
  std::ifstream in(out / "talenti.json");
  const json report = json::parse(in);
  CHECK(report.at("passed") == true);
  CHECK(report.contains("domain"));

  auto zero = small_square();
  zero["source"]["value"] = 0.0;
  CHECK(verify_exit(zero, "zero.json") == kExitConfig);

  auto two_levels = small_square();
  two_levels["levels"] = {8, 16};
  CHECK(verify_exit(two_levels, "two.json") == kExitConfig);

  auto apex = small_square();
  apex["domain"] = {{"kind", "cone_polar"}, {"alpha", 0.5}, {"r_min", 0.0}};
  CHECK(verify_exit(apex, "apex.json") == kExitConfig);

  std::ostringstream sink;
  CHECK(cmd_verify(scratch_dir() / "does_not_exist.json", 1, sink, sink) == kExitConfig);
  std::ofstream(scratch_dir() / "broken.json") << "{ not json";
  CHECK(cmd_verify(scratch_dir() / "broken.json", 1, sink, sink) == kExitConfig);
}

TEST_CASE("source files resolve against the config directory") {
  std::ofstream(scratch_dir() / "table.csv") << "r,value\n0,2\n0.3,2\n0.31,0.5\n1,0.5\n";
  auto j = small_square();
  j["source"] = {{"type", "file"}, {"path", "table.csv"}};
  const auto config = parse_config(j, scratch_dir());
  CHECK(config.source.kind == symm::verify::SourceKind::tabulated);
  CHECK(config.source.table.size() == 4);
  j["source"]["path"] = "missing.csv";
  CHECK_THROWS_AS(parse_config(j, scratch_dir()), ConfigError);
}
