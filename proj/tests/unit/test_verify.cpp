#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "symm/geometry.hpp"
#include "symm/pde.hpp"
#include "symm/radial.hpp"
#include "symm/verify.hpp"

using namespace symm::verify;
using symm::geometry::DomainKind;
using symm::geometry::DomainSpec;
using symm::geometry::MaskShape;

namespace {

constexpr double pi = std::numbers::pi;

DomainSpec mask(MaskShape shape, int N) {
  DomainSpec s;
  s.shape = shape;
  s.resolution = N;
  if (shape == MaskShape::ellipse) {
    s.width = 1.4;
    s.height = 0.8;
  }
  return s;
}

DomainSpec disk(int N) {
  DomainSpec s;
  s.kind = DomainKind::euclid_polar;
  s.resolution = N;
  return s;
}

} // namespace

TEST_CASE("extrapolation") {
  const double h[3] = {1.0 / 32, 1.0 / 64, 1.0 / 128};
  double y[3];
  for (int i = 0; i < 3; ++i) y[i] = 1.5 + 3.0 * h[i] * h[i];
  auto e = extrapolate(h, y);
  CHECK(e.limit == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(e.rate == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_FALSE(e.inconclusive);

  for (int i = 0; i < 3; ++i) y[i] = -0.2 + 0.7 * h[i];
  e = extrapolate(h, y);
  CHECK(e.limit == doctest::Approx(-0.2).epsilon(1e-10));
  CHECK(e.rate == doctest::Approx(1.0).epsilon(1e-6));

  const double flat[3] = {0.25, 0.25, 0.25};
  e = extrapolate(h, flat);
  CHECK(e.rate == 0.0);
  CHECK(e.limit == 0.25);

  const double zigzag[3] = {1.0, 2.0, 1.5};
  CHECK(extrapolate(h, zigzag).inconclusive);
}

TEST_CASE("talenti on built-in domains") {
  std::mt19937_64 rng(testgen::kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const auto& spec : {mask(MaskShape::rectangle, 32), mask(MaskShape::ellipse, 32), mask(MaskShape::l_shape, 32), disk(32)}) {
    const auto mesh = symm::geometry::build_mesh(spec);
    auto r = verify_talenti(symm::pde::constant_field(mesh, 1.0));
    CHECK(r.report.passed);
    CHECK(r.report.slack >= -r.report.tolerance);
    // L-infinity endpoint: max u <= v*(0).
    CHECK(r.profiles.u_star(0.0) <= r.profiles.v_star(0.0) + r.report.tolerance);

    SourceSpec step;
    step.kind = SourceKind::radial_step;
    step.radius = 0.2 + 0.3 * unit(rng);
    step.inner = 1.0 + unit(rng);
    step.outer = unit(rng);
    const auto f = evaluate_source(step, spec, mesh);
    const auto rs = verify_talenti(f).report;
    INFO(symm::geometry::to_string(spec.kind), " ", step.radius, " ", step.inner, " ", step.outer, " slack ", rs.slack, " tol ", rs.tolerance);
    CHECK(rs.passed);
  }
}

TEST_CASE("talenti rejects a zero source") {
  const auto mesh = symm::geometry::build_mesh(mask(MaskShape::rectangle, 16));
  CHECK_THROWS_AS(verify_talenti(symm::pde::constant_field(mesh, 0.0)), std::domain_error);
}

TEST_CASE("square eigenvalue and moment reports") {
  const auto mesh = symm::geometry::build_mesh(mask(MaskShape::rectangle, 64));
  const auto pairs = symm::pde::smallest_eigenpairs(mesh, 2);
  const auto fk = verify_faber_krahn(mesh, &pairs);
  CHECK(fk.bound == doctest::Approx(pi * 5.783185962946784).epsilon(1e-12));
  CHECK(fk.slack == doctest::Approx(1.5708).epsilon(0.01));
  CHECK(fk.passed);
  const auto hks = verify_hks(mesh, &pairs);
  CHECK(hks.bound == doctest::Approx(2.0 * fk.bound).epsilon(1e-14));
  CHECK(hks.slack == doctest::Approx(13.0).epsilon(0.02));

  const auto moments = verify_moments(mesh, 1);
  REQUIRE(moments.size() == 2);
  CHECK(moments[0].theorem == Theorem::saint_venant_k);
  CHECK(moments[0].value == doctest::Approx(0.03514).epsilon(2e-3));
  CHECK(moments[0].bound == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-10));
  CHECK(moments[1].value == doctest::Approx(0.07367).epsilon(2e-3));
  CHECK(moments[1].bound == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-12));
  REQUIRE(moments[0].normalized_value.has_value());
  CHECK(*moments[0].normalized_bound == doctest::Approx(0.125));
  CHECK(*moments[0].normalized_value < 0.125);
}

TEST_CASE("chiti slack is nonnegative") {
  const auto square = symm::geometry::build_mesh(mask(MaskShape::rectangle, 32));
  const auto ell = symm::geometry::build_mesh(mask(MaskShape::l_shape, 32));
  DomainSpec sector;
  sector.kind = DomainKind::cone_polar;
  sector.alpha = 0.7;
  sector.r_min = 0.5;
  sector.r_max = 1.5;
  sector.theta_span = 3.0;
  sector.resolution = 16;
  const auto cone = symm::geometry::build_mesh(sector);
  for (const auto* mesh : {&square, &ell, &cone}) {
    const auto pairs = symm::pde::smallest_eigenpairs(*mesh, 1);
    for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 4.0}, std::pair{0.5, 1.0}}) {
      const auto r = verify_chiti(*mesh, p, q, 1, &pairs);
      CHECK(r.slack > 0.0);
      CHECK(r.passed);
    }
  }
  const auto same = verify_chiti(square, 2.0, 2.0);
  CHECK(same.value == doctest::Approx(1.0));
  CHECK(same.bound == 1.0);
}

TEST_CASE("convergence study on the square and the disk") {
  CheckSpec fk;
  fk.kind = CheckKind::faber_krahn;
  StudyOptions opts;
  const auto sq = convergence_study(fk, mask(MaskShape::rectangle, 32), {16, 32, 64}, opts);
  REQUIRE(sq.reports.size() == 1);
  CHECK(sq.reports[0].levels.size() == 3);
  CHECK(*sq.reports[0].extrapolated_slack == doctest::Approx(1.5708).epsilon(0.01));
  CHECK(sq.reports[0].passed);

  opts.expect_equality = true;
  const auto dk = convergence_study(fk, disk(32), {16, 32, 64}, opts);
  CHECK(std::abs(*dk.reports[0].extrapolated_slack) <= 1e-3);
  CHECK(*dk.reports[0].rate >= 1.0);
  CHECK(dk.reports[0].passed);

  CheckSpec tal;
  const auto t = convergence_study(tal, disk(32), {16, 32, 64}, opts);
  CHECK(t.profiles.size() == 3);
  CHECK(t.reports[0].passed);
  std::ostringstream os;
  write_talenti_csv(t.profiles.back().second, os);
  CHECK(os.str().rfind("s,u_star,v_star\n", 0) == 0);

  const auto j = to_json(t.reports[0]);
  CHECK(j.at("theorem") == "talenti");
  CHECK(j.contains("levels"));
}

TEST_CASE("disk allowances shrink under refinement") {
  CHECK(allowance::eigenvalue(64) < allowance::eigenvalue(32));
  CHECK(allowance::talenti(64) < allowance::talenti(32));
  CHECK(allowance::moments(64, 1).first < allowance::moments(32, 1).first);
}
