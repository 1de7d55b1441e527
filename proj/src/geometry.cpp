#include "symm/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"

#include "symm/errors.hpp"
#include "symm/specialfn.hpp"

namespace symm::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Accumulates the stiffness form face by face.
class StencilBuilder {
public:
  explicit StencilBuilder(std::size_t cells) : diagonal_(cells, 0.0), boundary_(cells, 0.0) {}

  void interior_face(std::size_t a, std::size_t b, double w) {
    diagonal_[a] += w;
    diagonal_[b] += w;
    triplets_.emplace_back(static_cast<int>(a), static_cast<int>(b), -w);
    triplets_.emplace_back(static_cast<int>(b), static_cast<int>(a), -w);
  }

  void boundary_face(std::size_t a, double w) {
    diagonal_[a] += w;
    boundary_[a] += w;
  }

  void finish(Mesh& mesh) {
    const std::size_t cells = diagonal_.size();
    for (std::size_t i = 0; i < cells; ++i) {
      triplets_.emplace_back(static_cast<int>(i), static_cast<int>(i), diagonal_[i]);
    }
    mesh.laplacian.resize(static_cast<int>(cells), static_cast<int>(cells));
    mesh.laplacian.setFromTriplets(triplets_.begin(), triplets_.end());
    mesh.laplacian.makeCompressed();
    mesh.boundary_weights = std::move(boundary_);
  }

private:
  std::vector<double> diagonal_;
  std::vector<double> boundary_;
  std::vector<Eigen::Triplet<double>> triplets_;
};

bool inside_mask(const DomainSpec& spec, double x, double y) {
  // Coordinates relative to the shape centre.
  const double a = 0.5 * spec.width;
  const double b = 0.5 * spec.height;
  switch (spec.shape) {
  case MaskShape::rectangle: return std::abs(x) < a && std::abs(y) < b;
  case MaskShape::ellipse: return (x / a) * (x / a) + (y / b) * (y / b) < 1.0;
  case MaskShape::l_shape: return std::abs(x) < a && std::abs(y) < b && !(x > 0.0 && y > 0.0);
  }
  return false;
}

Mesh build_mask(const DomainSpec& spec) {
  if (!(spec.width > 0.0) || !(spec.height > 0.0)) throw std::domain_error("build_mesh: mask extents must be positive");
  const double h = std::max(spec.width, spec.height) / spec.resolution;
  const int nx = std::max(1, static_cast<int>(std::lround(spec.width / h)));
  const int ny = std::max(1, static_cast<int>(std::lround(spec.height / h)));

  Mesh mesh;
  mesh.kind = DomainKind::euclid_mask;
  mesh.avr = 1.0;
  mesh.h = h;
  std::vector<long> index(static_cast<std::size_t>(nx) * ny, -1);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5 - 0.5 * nx) * h;
      const double y = (j + 0.5 - 0.5 * ny) * h;
      if (!inside_mask(spec, x, y)) continue;
      index[static_cast<std::size_t>(j) * nx + i] = static_cast<long>(mesh.measures.size());
      mesh.measures.push_back(h * h);
      mesh.centers.push_back({x + spec.center_offset[0], y + spec.center_offset[1]});
    }
  }
  if (mesh.measures.empty()) throw std::domain_error("build_mesh: mask contains no cells");

  const auto at = [&](int i, int j) -> long {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return -1;
    return index[static_cast<std::size_t>(j) * nx + i];
  };
  StencilBuilder stencil(mesh.measures.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const long c = at(i, j);
      if (c < 0) continue;
      // East and north faces are owned by this cell; west and south only when they are boundary.
      const long east = at(i + 1, j);
      const long north = at(i, j + 1);
      if (east >= 0) stencil.interior_face(c, east, 1.0); else stencil.boundary_face(c, 2.0);
      if (north >= 0) stencil.interior_face(c, north, 1.0); else stencil.boundary_face(c, 2.0);
      if (at(i - 1, j) < 0) stencil.boundary_face(c, 2.0);
      if (at(i, j - 1) < 0) stencil.boundary_face(c, 2.0);
    }
  }
  stencil.finish(mesh);
  return mesh;
}

Mesh build_polar(const DomainSpec& spec, double alpha) {
  const double span = spec.theta_span;
  const bool ring = span == kTwoPi;
  const int nr = std::max(1, static_cast<int>(std::lround(spec.resolution * (spec.r_max - spec.r_min))));
  const int default_angular = std::max(8, static_cast<int>(std::lround(4.0 * spec.resolution * span / kTwoPi)));
  const int nt = spec.angular_cells > 0 ? spec.angular_cells : default_angular;
  if (nt < 3) throw std::domain_error("build_mesh: need at least 3 angular cells");
  const double dr = (spec.r_max - spec.r_min) / nr;
  const double dt = span / nt;

  Mesh mesh;
  mesh.kind = spec.kind;
  mesh.avr = alpha;
  mesh.h = dr;
  const auto id = [&](int i, int k) { return static_cast<std::size_t>(i) * nt + k; };
  for (int i = 0; i < nr; ++i) {
    const double r = spec.r_min + (i + 0.5) * dr;
    for (int k = 0; k < nt; ++k) {
      mesh.measures.push_back(alpha * r * dr * dt);
      mesh.centers.push_back({r, (k + 0.5) * dt});
    }
  }

  StencilBuilder stencil(mesh.measures.size());
  for (int i = 0; i < nr; ++i) {
    const double r = spec.r_min + (i + 0.5) * dr;
    const double r_out = spec.r_min + (i + 1) * dr;
    const double angular = dr / (alpha * r * dt);
    for (int k = 0; k < nt; ++k) {
      const std::size_t c = id(i, k);
      if (i + 1 < nr) stencil.interior_face(c, id(i + 1, k), alpha * r_out * dt / dr);
      else stencil.boundary_face(c, 2.0 * alpha * spec.r_max * dt / dr);
      if (i == 0 && spec.r_min > 0.0) stencil.boundary_face(c, 2.0 * alpha * spec.r_min * dt / dr);

      if (k + 1 < nt) stencil.interior_face(c, id(i, k + 1), angular);
      else if (ring) stencil.interior_face(c, id(i, 0), angular);
      else stencil.boundary_face(c, 2.0 * angular);
      if (k == 0 && !ring) stencil.boundary_face(c, 2.0 * angular);
    }
  }
  stencil.finish(mesh);

  if (ring) {
    mesh.boundary_length = kTwoPi * alpha * (spec.r_max + spec.r_min);
  } else {
    mesh.boundary_length = alpha * span * (spec.r_max + spec.r_min) + 2.0 * (spec.r_max - spec.r_min);
  }
  return mesh;
}

Mesh build_radial(const DomainSpec& spec) {
  const double alpha = spec.alpha;
  const int nr = std::max(1, static_cast<int>(std::lround(spec.resolution * (spec.r_max - spec.r_min))));
  const double dr = (spec.r_max - spec.r_min) / nr;

  Mesh mesh;
  mesh.kind = DomainKind::cone_radial;
  mesh.avr = alpha;
  mesh.h = dr;
  for (int i = 0; i < nr; ++i) {
    const double r = spec.r_min + (i + 0.5) * dr;
    mesh.measures.push_back(kTwoPi * alpha * r * dr);
    mesh.centers.push_back({r, 0.0});
  }
  StencilBuilder stencil(mesh.measures.size());
  for (int i = 0; i < nr; ++i) {
    if (i + 1 < nr) stencil.interior_face(i, i + 1, kTwoPi * alpha * (spec.r_min + (i + 1) * dr) / dr);
    else stencil.boundary_face(i, 2.0 * kTwoPi * alpha * spec.r_max / dr);
  }
  if (spec.r_min > 0.0) stencil.boundary_face(0, 2.0 * kTwoPi * alpha * spec.r_min / dr);
  stencil.finish(mesh);
  mesh.boundary_length = kTwoPi * alpha * (spec.r_max + spec.r_min);
  return mesh;
}

} // namespace

std::string to_string(DomainKind kind) {
  switch (kind) {
  case DomainKind::euclid_mask: return "euclid_mask";
  case DomainKind::euclid_polar: return "euclid_polar";
  case DomainKind::cone_polar: return "cone_polar";
  case DomainKind::cone_radial: return "cone_radial";
  }
  return "unknown";
}

std::string to_string(MaskShape shape) {
  switch (shape) {
  case MaskShape::rectangle: return "rectangle";
  case MaskShape::ellipse: return "ellipse";
  case MaskShape::l_shape: return "l_shape";
  }
  return "unknown";
}

Mesh build_mesh(const DomainSpec& input) {
  DomainSpec spec = input;
  if (spec.resolution < 8) throw std::domain_error("build_mesh: resolution must be at least 8");
  if (spec.kind != DomainKind::euclid_mask) {
    if (!(spec.r_min >= 0.0) || !(spec.r_max > spec.r_min)) {
      throw std::domain_error("build_mesh: need 0 <= r_min < r_max");
    }
    if (!(spec.alpha > 0.0) || spec.alpha > 1.0) throw std::domain_error("build_mesh: alpha must lie in (0, 1]");
    if (spec.theta_span == 0.0) spec.theta_span = kTwoPi;
    if (!(spec.theta_span > 0.0) || spec.theta_span > kTwoPi) {
      throw std::domain_error("build_mesh: theta_span must lie in (0, 2 pi]");
    }
    if (spec.center_offset[0] != 0.0 || spec.center_offset[1] != 0.0) {
      throw std::domain_error("build_mesh: center_offset applies to mask domains only; use r_min > 0 to leave the apex");
    }
  }

  Mesh mesh;
  switch (spec.kind) {
  case DomainKind::euclid_mask: mesh = build_mask(spec); break;
  case DomainKind::euclid_polar:
    if (spec.alpha != 1.0) throw std::domain_error("build_mesh: euclid_polar requires alpha = 1");
    mesh = build_polar(spec, 1.0);
    break;
  case DomainKind::cone_polar:
    if (spec.r_min == 0.0) {
      throw UnsupportedGeometry("build_mesh: cone_polar domain contains the apex; use cone_radial");
    }
    mesh = build_polar(spec, spec.alpha);
    break;
  case DomainKind::cone_radial:
    if (spec.theta_span != kTwoPi) throw std::domain_error("build_mesh: cone_radial is rotationally symmetric");
    mesh = build_radial(spec);
    break;
  }
  mesh.resolution = spec.resolution;
  double volume = 0.0;
  for (double m : mesh.measures) volume += m;
  mesh.volume = volume;
  return mesh;
}

double isoperimetric_slack(const Mesh& mesh) {
  if (!mesh.boundary_length) throw UnsupportedGeometry("isoperimetric_slack: mask domains carry no analytic perimeter");
  const int n = mesh.n;
  const double bound = n * std::pow(specialfn::unit_ball_volume(n) * mesh.avr, 1.0 / n) *
                       std::pow(mesh.volume, (n - 1.0) / n);
  return *mesh.boundary_length - bound;
}

std::string mesh_statistics_json(const Mesh& mesh) {
  nlohmann::ordered_json j;
  j["volume"] = mesh.volume;
  j["avr"] = mesh.avr;
  j["n"] = mesh.n;
  j["cells"] = mesh.cells();
  if (mesh.boundary_length) j["boundary_length"] = *mesh.boundary_length;
  else j["boundary_length"] = nullptr;
  return j.dump();
}

} // namespace symm::geometry
