#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "generators.hpp"
#include "symm/geometry.hpp"
#include "symm/pde.hpp"
#include "symm/specialfn.hpp"

using namespace symm::pde;
using symm::geometry::DomainKind;
using symm::geometry::DomainSpec;

namespace {

constexpr double pi = std::numbers::pi;

DomainSpec square(int N, double side = 1.0) {
  DomainSpec s;
  s.width = side;
  s.height = side;
  s.resolution = N;
  return s;
}

DomainSpec disk(int N) {
  DomainSpec s;
  s.kind = DomainKind::euclid_polar;
  s.resolution = N;
  return s;
}

// Torsion of the unit square by the double sine series over odd m, n.
struct SquareTorsion {
  double integral = 0.0;
  double centre = 0.0;
};

SquareTorsion square_torsion_series() {
  SquareTorsion t;
  for (int m = 1; m < 2000; m += 2) {
    for (int n = 1; n < 2000; n += 2) {
      const double mm = m * m;
      const double nn = n * n;
      t.integral += 64.0 / (std::pow(pi, 6) * mm * nn * (mm + nn));
      const double sign = ((m + n) / 2 - 1) % 2 == 0 ? 1.0 : -1.0;
      t.centre += sign * 16.0 / (std::pow(pi, 4) * m * n * (mm + nn));
    }
  }
  return t;
}

double richardson(double coarse, double mid, double fine) {
  const double order = std::log2((mid - coarse) / (fine - mid));
  return fine + (fine - mid) / (std::pow(2.0, order) - 1.0);
}

} // namespace

TEST_CASE("zero source gives zero") {
  const auto mesh = symm::geometry::build_mesh(square(16));
  const auto u = poisson_solve(constant_field(mesh, 0.0));
  CHECK(*std::max_element(u.values.begin(), u.values.end()) == 0.0);
  CHECK_THROWS(make_field(mesh, std::vector<double>(3, 1.0)));
}

TEST_CASE("square torsion against the sine series") {
  const auto oracle = square_torsion_series();
  CHECK(oracle.integral == doctest::Approx(0.035144).epsilon(1e-4));
  double T[3];
  double J[3];
  int i = 0;
  for (int N : {32, 64, 128}) {
    const auto mesh = symm::geometry::build_mesh(square(N));
    const auto rows = moment_hierarchy(mesh, 1);
    CHECK(rows[0].torsion == doctest::Approx(1.0));
    CHECK(rows[0].sup == 1.0);
    T[i] = rows[1].torsion;
    J[i] = rows[1].sup;
    ++i;
  }
  CHECK(std::abs(richardson(T[0], T[1], T[2]) - oracle.integral) <= 2e-6);
  CHECK(std::abs(J[2] - oracle.centre) <= 1e-4);
  CHECK(oracle.centre == doctest::Approx(0.07367).epsilon(1e-4));
}

TEST_CASE("disk torsion") {
  const auto mesh = symm::geometry::build_mesh(disk(64));
  const auto rows = moment_hierarchy(mesh, 1);
  CHECK(rows[1].sup == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(rows[1].torsion == doctest::Approx(pi / 8.0).epsilon(1e-3));

  DomainSpec cone;
  cone.kind = DomainKind::cone_radial;
  cone.alpha = 0.5;
  cone.resolution = 400;
  const auto line = symm::geometry::build_mesh(cone);
  const auto u = poisson_solve(constant_field(line, 1.0));
  for (std::size_t k = 0; k < u.values.size(); k += 37) {
    const double r = line.centers[k][0];
    CHECK(std::abs(u.values[k] - (1.0 - r * r) / 4.0) <= 1e-5);
  }
}

TEST_CASE("eigenvalues") {
  double L1[3];
  double L2[3];
  int i = 0;
  for (int N : {32, 64, 128}) {
    const auto mesh = symm::geometry::build_mesh(square(N));
    const auto pairs = smallest_eigenpairs(mesh, 2);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].lambda < pairs[1].lambda);
    CHECK(rayleigh_quotient(pairs[0].field) == doctest::Approx(pairs[0].lambda).epsilon(1e-8));
    CHECK(eigen_residual(pairs[0].field, pairs[0].lambda) <= 1e-8);
    double norm = 0.0;
    for (std::size_t k = 0; k < mesh.cells(); ++k) norm += mesh.measures[k] * pairs[0].field.values[k] * pairs[0].field.values[k];
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*std::min_element(pairs[0].field.values.begin(), pairs[0].field.values.end()) > 0.0);
    L1[i] = pairs[0].lambda;
    L2[i] = pairs[1].lambda;
    ++i;
  }
  const double order = std::log2((L1[1] - L1[0]) / (L1[2] - L1[1]));
  CHECK(order >= 1.9);
  CHECK(richardson(L1[0], L1[1], L1[2]) == doctest::Approx(2.0 * pi * pi).epsilon(1e-4));
  CHECK(richardson(L2[0], L2[1], L2[2]) == doctest::Approx(5.0 * pi * pi).epsilon(1e-4));

  const double j0 = symm::specialfn::bessel_first_zero(symm::specialfn::BesselOrder(0.0));
  const auto d = symm::geometry::build_mesh(disk(64));
  CHECK(smallest_eigenpairs(d, 1)[0].lambda == doctest::Approx(j0 * j0).epsilon(1e-3));
  CHECK_THROWS_AS(smallest_eigenpairs(d, 3), std::domain_error);
}

TEST_CASE("domain monotonicity") {
  const auto small = symm::geometry::build_mesh(square(40));
  const auto large = symm::geometry::build_mesh(square(40, 1.1));
  CHECK(smallest_eigenpairs(small, 1)[0].lambda > smallest_eigenpairs(large, 1)[0].lambda);
}

TEST_CASE("property: discrete maximum principle") {
  std::mt19937_64 rng(testgen::kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DomainSpec ell = square(24);
  ell.shape = symm::geometry::MaskShape::l_shape;
  const auto meshes = {symm::geometry::build_mesh(square(24)), symm::geometry::build_mesh(ell),
                       symm::geometry::build_mesh(disk(16))};
  for (const auto& mesh : meshes) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<double> f(mesh.cells());
      for (auto& v : f) v = unit(rng) < 0.7 ? 0.0 : unit(rng);
      const auto u = poisson_solve(make_field(mesh, f));
      CHECK(*std::min_element(u.values.begin(), u.values.end()) >= 0.0);
    }
  }
}

TEST_CASE("determinism") {
  const auto mesh = symm::geometry::build_mesh(disk(32));
  const auto a = smallest_eigenpairs(mesh, 2);
  const auto b = smallest_eigenpairs(mesh, 2);
  CHECK(a[1].field.values == b[1].field.values);
  CHECK(poisson_solve(constant_field(mesh, 1.0)).values == poisson_solve(constant_field(mesh, 1.0)).values);
}

TEST_CASE("field to sample") {
  const auto mesh = symm::geometry::build_mesh(square(16));
  const auto s = field_to_sample(constant_field(mesh, 2.0));
  CHECK(s.total_measure() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(field_to_sample(constant_field(mesh, -1.0)), std::domain_error);
  std::ostringstream os;
  write_field_csv(constant_field(mesh, 1.0), os);
  CHECK(os.str().rfind("index,x,y,value\n", 0) == 0);
}
