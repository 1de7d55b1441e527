#include "symm/pde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "symm/errors.hpp"

namespace symm::pde {

namespace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::SparseMatrix<double>;

constexpr double kPoissonTolerance = 1e-10;
constexpr double kEigenTolerance = 1e-10;
constexpr double kEigenResidual = 1e-8;
constexpr int kEigenMaxOuter = 500;

Vector as_vector(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), static_cast<long>(v.size())); }

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

Vector mass(const Mesh& mesh) { return as_vector(mesh.measures); }

double m_dot(const Vector& m, const Vector& a, const Vector& b) { return (m.array() * a.array() * b.array()).sum(); }

void fix_sign(Vector& x) {
  const double scale = x.cwiseAbs().maxCoeff();
  for (long i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-8 * scale) {
      if (x[i] < 0.0) x = -x;
      return;
    }
  }
}

// Inverse iteration for the generalized problem A x = lambda M x,
// optionally kept M-orthogonal to `lock`.
EigenPair inverse_iteration(const Mesh& mesh, const Eigen::SimplicialLDLT<Matrix>& solver, Vector x,
                            const Vector* lock) {
  const Matrix& A = mesh.laplacian;
  const Vector m = mass(mesh);
  const auto deflate = [&](Vector& v) {
    if (lock != nullptr) v -= m_dot(m, v, *lock) * (*lock);
  };
  deflate(x);
  x /= std::sqrt(m_dot(m, x, x));
  double lambda = x.dot(A * x);
  for (int it = 0; it < kEigenMaxOuter; ++it) {
    Vector y = solver.solve(m.cwiseProduct(x));
    deflate(y);
    y /= std::sqrt(m_dot(m, y, y));
    const Vector Ay = A * y;
    const double next = y.dot(Ay);
    const Vector My = m.cwiseProduct(y);
    const double residual = (Ay - next * My).norm() / (next * My.norm());
    const bool settled = std::abs(next - lambda) <= kEigenTolerance * next;
    x = std::move(y);
    lambda = next;
    if (settled && residual <= kEigenResidual) {
      fix_sign(x);
      return {lambda, make_field(mesh, as_std(x))};
    }
  }
  throw SolverFailure("smallest_eigenpairs: inverse iteration did not converge in 500 steps");
}

} // namespace

Field make_field(const Mesh& mesh, std::vector<double> values) {
  if (values.size() != mesh.cells()) throw ContractError("make_field: one value per mesh cell required");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::domain_error("make_field: non-finite value");
  }
  return {&mesh, std::move(values)};
}

Field constant_field(const Mesh& mesh, double value) { return make_field(mesh, std::vector<double>(mesh.cells(), value)); }

Field poisson_solve(const Field& source) {
  const Mesh& mesh = *source.mesh;
  const Vector rhs = mass(mesh).cwiseProduct(as_vector(source.values));
  if (rhs.squaredNorm() == 0.0) return constant_field(mesh, 0.0);

  if (mesh.kind == geometry::DomainKind::cone_radial) {
    Eigen::SimplicialLDLT<Matrix> solver(mesh.laplacian);
    if (solver.info() != Eigen::Success) throw InternalError("poisson_solve: factorization failed");
    return make_field(mesh, as_std(solver.solve(rhs)));
  }

  Eigen::ConjugateGradient<Matrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  cg.setTolerance(kPoissonTolerance);
  cg.setMaxIterations(static_cast<long>(10 * mesh.cells()));
  cg.compute(mesh.laplacian);
  const Vector u = cg.solve(rhs);
  if (cg.info() != Eigen::Success) {
    throw SolverFailure("poisson_solve: conjugate gradients stalled after " + std::to_string(cg.iterations()) +
                        " iterations");
  }
  return make_field(mesh, as_std(u));
}

std::vector<EigenPair> smallest_eigenpairs(const Mesh& mesh, int count) {
  if (count != 1 && count != 2) throw std::domain_error("smallest_eigenpairs: count must be 1 or 2");
  if (mesh.cells() < 2 && count == 2) throw std::domain_error("smallest_eigenpairs: mesh too small");
  Eigen::SimplicialLDLT<Matrix> solver(mesh.laplacian);
  if (solver.info() != Eigen::Success) throw InternalError("smallest_eigenpairs: factorization failed");

  std::vector<EigenPair> pairs;
  pairs.push_back(inverse_iteration(mesh, solver, Vector::Ones(static_cast<long>(mesh.cells())), nullptr));
  if (count == 2) {
    // A start vector with no symmetry of its own, so no eigenspace is missed by accident.
    Vector start(static_cast<long>(mesh.cells()));
    for (long i = 0; i < start.size(); ++i) start[i] = std::sin((i + 1) * std::numbers::phi);
    const Vector first = as_vector(pairs[0].field.values);
    pairs.push_back(inverse_iteration(mesh, solver, start, &first));
    if (!(pairs[1].lambda > pairs[0].lambda * (1.0 + 1e-8))) {
      throw InternalError("smallest_eigenpairs: first eigenvalue is not simple");
    }
  }
  return pairs;
}

double rayleigh_quotient(const Field& field) {
  const Vector x = as_vector(field.values);
  return x.dot(field.mesh->laplacian * x) / m_dot(mass(*field.mesh), x, x);
}

double eigen_residual(const Field& field, double lambda) {
  const Vector x = as_vector(field.values);
  const Vector Mx = mass(*field.mesh).cwiseProduct(x);
  return (field.mesh->laplacian * x - lambda * Mx).norm() / (lambda * Mx.norm());
}

std::vector<MomentRow> moment_hierarchy(const Mesh& mesh, int k_max) {
  if (k_max < 0 || k_max > 10) throw std::domain_error("moment_hierarchy: k_max must lie in [0, 10]");
  std::vector<MomentRow> rows;
  rows.push_back({0, constant_field(mesh, 1.0), mesh.volume, 1.0});
  for (int k = 1; k <= k_max; ++k) {
    Field source = rows.back().field;
    for (double& v : source.values) v *= k;
    Field u = poisson_solve(source);
    double torsion = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) torsion += u.values[i] * mesh.measures[i];
    const double sup = *std::max_element(u.values.begin(), u.values.end());
    rows.push_back({k, std::move(u), torsion, sup});
  }
  return rows;
}

rearrange::WeightedSample field_to_sample(const Field& field) {
  std::vector<rearrange::Cell> cells;
  cells.reserve(field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    if (field.values[i] < 0.0) throw std::domain_error("field_to_sample: negative value; take |u| explicitly");
    cells.push_back({field.values[i], field.mesh->measures[i]});
  }
  return rearrange::WeightedSample(std::move(cells));
}

void write_field_csv(const Field& field, std::ostream& out) {
  const Mesh& mesh = *field.mesh;
  out << (mesh.polar() ? "index,r,theta,value\n" : "index,x,y,value\n");
  const auto precision = out.precision(17);
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    out << i << ',' << mesh.centers[i][0] << ',' << mesh.centers[i][1] << ',' << field.values[i] << '\n';
  }
  out.precision(precision);
}

} // namespace symm::pde
