#ifndef SYMM_PDE_HPP
#define SYMM_PDE_HPP

// Dirichlet problems on a Mesh: Poisson solves, the two lowest eigenpairs,
// and the Poisson hierarchy -Delta u_k = k u_{k-1} behind the moment spectra.

#include <iosfwd>
#include <vector>

#include "symm/geometry.hpp"
#include "symm/rearrange.hpp"

namespace symm::pde {

using geometry::Mesh;

/// One value per mesh cell; the boundary value 0 is implicit.
/// The mesh must outlive the field.
struct Field {
  const Mesh* mesh = nullptr;
  std::vector<double> values;
};

/// Throws ContractError if the length does not match, std::domain_error on non-finite values.
Field make_field(const Mesh& mesh, std::vector<double> values);
Field constant_field(const Mesh& mesh, double value);

/// Solves A u = M f. Planar meshes use Jacobi-preconditioned conjugate gradients to a
/// relative residual of 1e-10 and throw SolverFailure after 10 * cells iterations;
/// the 1-D radial reduction is tridiagonal and factorized directly.
Field poisson_solve(const Field& source);

struct EigenPair {
  double lambda;
  Field field; ///< sum measure * value^2 = 1, first significant entry positive
};

/// The `count` (1 or 2) lowest Dirichlet eigenpairs, ascending, by inverse iteration
/// with the second pair kept M-orthogonal to the first. Throws SolverFailure after
/// 500 outer iterations and InternalError if lambda_2 / lambda_1 <= 1 + 1e-8.
std::vector<EigenPair> smallest_eigenpairs(const Mesh& mesh, int count);

/// (x^T A x) / (x^T M x).
double rayleigh_quotient(const Field& field);
/// ||A x - lambda M x|| / (lambda ||M x||).
double eigen_residual(const Field& field, double lambda);

struct MomentRow {
  int k;
  Field field;
  double torsion; ///< T_k = sum u_k * measure
  double sup;     ///< J_k = max u_k
};

/// Rows k = 0..k_max with u_0 = 1 (so T_0 = volume, J_0 = 1). k_max <= 10.
std::vector<MomentRow> moment_hierarchy(const Mesh& mesh, int k_max);

/// One (value, measure) cell per mesh cell; every cell is an unknown, so the
/// total measure is the mesh volume. Throws std::domain_error on negative values.
rearrange::WeightedSample field_to_sample(const Field& field);

/// CSV with header "index,x,y,value" (masks) or "index,r,theta,value".
void write_field_csv(const Field& field, std::ostream& out);

} // namespace symm::pde

#endif
