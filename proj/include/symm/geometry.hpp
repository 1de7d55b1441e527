#ifndef SYMM_GEOMETRY_HPP
#define SYMM_GEOMETRY_HPP

// Cell-centred finite-volume discretizations of -Delta_g on planar domains
// and flat cones. Every cell is an unknown; Dirichlet data sits on the faces
// that separate a cell from the exterior, half a cell away from its centre.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace symm::geometry {

enum class DomainKind { euclid_mask, euclid_polar, cone_polar, cone_radial };
enum class MaskShape { rectangle, ellipse, l_shape };

std::string to_string(DomainKind kind);
std::string to_string(MaskShape shape);

struct DomainSpec {
  DomainKind kind = DomainKind::euclid_mask;

  // euclid_mask: the shape fills a width x height box centred at center_offset.
  // l_shape removes the upper right quarter of the box.
  MaskShape shape = MaskShape::rectangle;
  double width = 1.0;
  double height = 1.0;
  std::array<double, 2> center_offset{0.0, 0.0};

  // Polar and radial kinds: r in [r_min, r_max], theta in [0, theta_span].
  // A span of 2 pi means a full ring with periodic theta; anything shorter is a
  // sector with Dirichlet edges. alpha is the cone angle ratio (1 for the plane).
  double r_min = 0.0;
  double r_max = 1.0;
  double theta_span = 0.0; // 0 selects the full ring
  double alpha = 1.0;

  /// Cells per unit length along the longest axis (radial cells for polar kinds).
  int resolution = 32;
  /// Angular cells for polar kinds; 0 picks 4 * resolution per full turn.
  int angular_cells = 0;
};

struct Mesh {
  int n = 2;
  double avr = 1.0;
  DomainKind kind = DomainKind::euclid_mask;
  /// Cell measures dmu_g.
  std::vector<double> measures;
  /// Cell centres: (x, y) for masks, (r, theta) for the polar kinds, (r, 0) for cone_radial.
  std::vector<std::array<double, 2>> centers;
  /// Stiffness matrix A, symmetric positive definite: A u approximates M (-Delta_g u).
  Eigen::SparseMatrix<double> laplacian;
  /// Weight of the Dirichlet faces of each cell, already folded into the diagonal of A.
  std::vector<double> boundary_weights;
  /// Analytic perimeter, absent for mask domains.
  std::optional<double> boundary_length;
  double volume = 0.0;
  /// Mesh spacing along the first axis.
  double h = 0.0;
  int resolution = 0;

  std::size_t cells() const { return measures.size(); }
  bool polar() const { return kind != DomainKind::euclid_mask; }
};

/// Throws std::domain_error on invalid parameters or resolution < 8,
/// and UnsupportedGeometry for a cone_polar domain that reaches the apex.
Mesh build_mesh(const DomainSpec& spec);

/// |boundary| - n omega_n^{1/n} avr^{1/n} |Omega|^{(n-1)/n}.
/// Throws UnsupportedGeometry when the mesh has no analytic perimeter.
double isoperimetric_slack(const Mesh& mesh);

/// {"volume", "avr", "n", "cells", "boundary_length"} as compact JSON.
std::string mesh_statistics_json(const Mesh& mesh);

} // namespace symm::geometry

#endif
