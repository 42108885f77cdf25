#include "plateslip/fe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plateslip/errors.hpp"

namespace plateslip {

std::string to_string(Side side) {
  switch (side) {
    case Side::Left:
      return "left";
    case Side::Right:
      return "right";
    case Side::Bottom:
      return "bottom";
    case Side::Top:
      return "top";
  }
  return "?";
}

Side side_from_string(const std::string& name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  if (name == "bottom") return Side::Bottom;
  if (name == "top") return Side::Top;
  throw ConfigError("unknown box side '" + name + "'");
}

double Box::measure() const {
  double m = hi[0] - lo[0];
  if (dim == 2) m *= hi[1] - lo[1];
  return m;
}

bool Box::contains(const Point& p, double tol) const {
  for (int d = 0; d < dim; ++d) {
    if (p[d] < lo[d] - tol || p[d] > hi[d] + tol) return false;
  }
  return true;
}

Mesh build_box_mesh(int dim, std::array<int, 2> divisions, const std::vector<Side>& dirichlet_sides,
                    const Box& box) {
  if (dim != 1 && dim != 2) throw ConfigError("only n = 1 and n = 2 meshes are supported");
  if (divisions[0] < 1 || (dim == 2 && divisions[1] < 1)) {
    throw ConfigError("mesh divisions must be at least 1 per axis");
  }
  if (dirichlet_sides.empty()) throw ConfigError("the Dirichlet boundary part must be nonempty");
  for (Side s : dirichlet_sides) {
    if (dim == 1 && (s == Side::Bottom || s == Side::Top)) {
      throw ConfigError("a 1D mesh only has left and right sides");
    }
  }
  for (int d = 0; d < dim; ++d) {
    if (!(box.hi[d] > box.lo[d])) throw ConfigError("degenerate box");
  }

  Mesh mesh;
  mesh.dim = dim;
  mesh.box = box;
  mesh.box.dim = dim;
  mesh.divisions = divisions;
  if (dim == 1) mesh.divisions[1] = 0;
  mesh.dirichlet_sides = dirichlet_sides;

  auto tag_of = [&](Side s) {
    return std::find(dirichlet_sides.begin(), dirichlet_sides.end(), s) != dirichlet_sides.end()
               ? BoundaryTag::Dirichlet
               : BoundaryTag::Neumann;
  };

  const int nx = divisions[0];
  const double hx = (box.hi[0] - box.lo[0]) / nx;
  if (dim == 1) {
    for (int i = 0; i <= nx; ++i) mesh.vertices.push_back({box.lo[0] + i * hx, 0.0});
    for (int i = 0; i < nx; ++i) mesh.cells.push_back({i, i + 1, -1});
    mesh.boundary.push_back({{0, -1}, Side::Left, tag_of(Side::Left)});
    mesh.boundary.push_back({{nx, -1}, Side::Right, tag_of(Side::Right)});
    return mesh;
  }

  const int ny = divisions[1];
  const double hy = (box.hi[1] - box.lo[1]) / ny;
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Exact endpoints so that side membership tests are not affected by rounding.
      const double x = i == nx ? box.hi[0] : box.lo[0] + i * hx;
      const double y = j == ny ? box.hi[1] : box.lo[1] + j * hy;
      mesh.vertices.push_back({x, y});
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      mesh.cells.push_back({v00, v10, v11});
      mesh.cells.push_back({v00, v11, v01});
    }
  }
  for (int i = 0; i < nx; ++i) {
    mesh.boundary.push_back({{id(i, 0), id(i + 1, 0)}, Side::Bottom, tag_of(Side::Bottom)});
    mesh.boundary.push_back({{id(i, ny), id(i + 1, ny)}, Side::Top, tag_of(Side::Top)});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary.push_back({{id(0, j), id(0, j + 1)}, Side::Left, tag_of(Side::Left)});
    mesh.boundary.push_back({{id(nx, j), id(nx, j + 1)}, Side::Right, tag_of(Side::Right)});
  }
  return mesh;
}

Mesh build_box_mesh(int dim, std::array<int, 2> divisions, const std::vector<Side>& dirichlet_sides) {
  Box box;
  box.dim = dim;
  return build_box_mesh(dim, divisions, dirichlet_sides, box);
}

std::span<const QuadraturePoint> quadrature_rule(int dim) {
  static const double xi = 0.5 * (1.0 - 1.0 / std::numbers::sqrt3);
  static const std::array<QuadraturePoint, 2> gauss1{
      {{{1.0 - xi, xi, 0.0}, 0.5}, {{xi, 1.0 - xi, 0.0}, 0.5}}};
  static const std::array<QuadraturePoint, 3> gauss2{{
      {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
      {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
  }};
  if (dim == 1) return gauss1;
  return gauss2;
}

FESpace::FESpace(Mesh mesh) : mesh_(std::move(mesh)) {
  const int nn = num_nodes();
  const int nc = num_cells();
  geometry_.resize(nc);
  lumped_.assign(nn, 0.0);
  dirichlet_.assign(nn, 0);

  for (int c = 0; c < nc; ++c) {
    auto nodes = cell_nodes(c);
    CellGeometry& g = geometry_[c];
    if (mesh_.dim == 1) {
      const double h = vertex(nodes[1])[0] - vertex(nodes[0])[0];
      if (!(h > 0.0)) throw DiscretizationError("non-positive cell measure");
      g.measure = h;
      g.grad[0] = {-1.0 / h, 0.0};
      g.grad[1] = {1.0 / h, 0.0};
      g.centroid = {0.5 * (vertex(nodes[0])[0] + vertex(nodes[1])[0]), 0.0};
    } else {
      const Point& p0 = vertex(nodes[0]);
      const Point& p1 = vertex(nodes[1]);
      const Point& p2 = vertex(nodes[2]);
      const double a = p1[0] - p0[0], b = p2[0] - p0[0];
      const double c2 = p1[1] - p0[1], d = p2[1] - p0[1];
      const double det = a * d - b * c2;
      if (!(det > 0.0)) throw DiscretizationError("non-positive cell measure");
      g.measure = 0.5 * det;
      // Rows of J^{-T} are the gradients of the barycentric coordinates 1 and 2.
      g.grad[1] = {d / det, -b / det};
      g.grad[2] = {-c2 / det, a / det};
      g.grad[0] = {-g.grad[1][0] - g.grad[2][0], -g.grad[1][1] - g.grad[2][1]};
      g.centroid = {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
    }
    measure_ += g.measure;
    for (int a : nodes) lumped_[a] += g.measure / (mesh_.dim + 1);
  }

  for (const BoundaryFacet& f : mesh_.boundary) {
    if (f.tag != BoundaryTag::Dirichlet) continue;
    dirichlet_[f.nodes[0]] = 1;
    if (mesh_.dim == 2) dirichlet_[f.nodes[1]] = 1;
  }
  for (int a = 0; a < nn; ++a) {
    (dirichlet_[a] ? dirichlet_nodes_ : free_nodes_).push_back(a);
  }
  if (dirichlet_nodes_.empty()) throw ConfigError("the Dirichlet node set is empty");
}

Point FESpace::map_to_cell(int cell, const std::array<double, 3>& bary) const {
  Point p{0.0, 0.0};
  auto nodes = cell_nodes(cell);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    p[0] += bary[a] * vertex(nodes[a])[0];
    p[1] += bary[a] * vertex(nodes[a])[1];
  }
  return p;
}

Box FESpace::interior_subdomain() const {
  Box sub = mesh_.box;
  for (int d = 0; d < mesh_.dim; ++d) {
    const double h = (mesh_.box.hi[d] - mesh_.box.lo[d]) / mesh_.divisions[d];
    sub.lo[d] += h;
    sub.hi[d] -= h;
  }
  return sub;
}

double FESpace::mesh_size() const {
  double h = 0.0;
  for (int d = 0; d < mesh_.dim; ++d) {
    h = std::max(h, (mesh_.box.hi[d] - mesh_.box.lo[d]) / mesh_.divisions[d]);
  }
  return h;
}

FEField::FEField(SpacePtr space, int components)
    : space_(std::move(space)), components_(components),
      coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_->num_nodes()) * components)) {}

FEField::FEField(SpacePtr space, int components, Eigen::VectorXd coeffs)
    : space_(std::move(space)), components_(components), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<Eigen::Index>(space_->num_nodes()) * components_) {
    throw DiscretizationError("coefficient length does not match node count x components");
  }
}

SmallVec FEField::node_value(int node) const {
  SmallVec v(components_);
  for (int c = 0; c < components_; ++c) v[c] = at(node, c);
  return v;
}

SmallMat FEField::cell_gradient(int cell) const {
  const int n = space_->dim();
  const CellGeometry& g = space_->geometry(cell);
  auto nodes = space_->cell_nodes(cell);
  SmallMat grad = SmallMat::Zero(components_, n);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int c = 0; c < components_; ++c) {
      for (int d = 0; d < n; ++d) grad(c, d) += at(nodes[a], c) * g.grad[a][d];
    }
  }
  return grad;
}

SmallVec FEField::value_at(int cell, const std::array<double, 3>& bary) const {
  SmallVec v = SmallVec::Zero(components_);
  auto nodes = space_->cell_nodes(cell);
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (int c = 0; c < components_; ++c) v[c] += bary[a] * at(nodes[a], c);
  }
  return v;
}

bool FEField::compatible(const FEField& other) const {
  return space_ == other.space_ && components_ == other.components_;
}

FEField& FEField::operator+=(const FEField& other) {
  if (!compatible(other)) throw DiscretizationError("fields live on different spaces");
  coeffs_ += other.coeffs_;
  return *this;
}

FEField& FEField::operator-=(const FEField& other) {
  if (!compatible(other)) throw DiscretizationError("fields live on different spaces");
  coeffs_ -= other.coeffs_;
  return *this;
}

FEField& FEField::operator*=(double s) {
  coeffs_ *= s;
  return *this;
}

FEField interpolate(const FieldFunction& f, SpacePtr space, int components) {
  FEField field(space, components);
  for (int a = 0; a < space->num_nodes(); ++a) {
    const auto v = f(space->vertex(a));
    for (int c = 0; c < components; ++c) field.at(a, c) = v[c];
  }
  return field;
}

double l2_norm(const FEField& f) {
  const FESpace& space = f.space();
  const int np = space.dim() + 1;
  const double denom = (np) * (np + 1);
  double sum = 0.0;
  for (int c = 0; c < space.num_cells(); ++c) {
    auto nodes = space.cell_nodes(c);
    const double m = space.geometry(c).measure / denom;
    for (int a = 0; a < np; ++a) {
      for (int b = 0; b < np; ++b) {
        const double w = m * (a == b ? 2.0 : 1.0);
        for (int k = 0; k < f.components(); ++k) sum += w * f.at(nodes[a], k) * f.at(nodes[b], k);
      }
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double semi_h1(const FEField& f) {
  double sum = 0.0;
  for (int c = 0; c < f.space().num_cells(); ++c) {
    sum += f.space().geometry(c).measure * f.cell_gradient(c).squaredNorm();
  }
  return std::sqrt(sum);
}

double h1_norm(const FEField& f) { return std::hypot(l2_norm(f), semi_h1(f)); }

double sym_grad_l2(const FEField& v) {
  if (v.components() != v.space().dim()) throw DiscretizationError("sym_grad_l2 needs a vector field");
  double sum = 0.0;
  for (int c = 0; c < v.space().num_cells(); ++c) {
    const SmallMat g = v.cell_gradient(c);
    const SmallMat e = 0.5 * (g + g.transpose());
    sum += v.space().geometry(c).measure * e.squaredNorm();
  }
  return std::sqrt(sum);
}

double holder_seminorm(const FEField& f, double alpha, const Box& subdomain) {
  const FESpace& space = f.space();
  std::vector<int> inside;
  for (int a = 0; a < space.num_nodes(); ++a) {
    if (subdomain.contains(space.vertex(a))) inside.push_back(a);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < inside.size(); ++i) {
    const Point& x = space.vertex(inside[i]);
    const SmallVec fx = f.node_value(inside[i]);
    for (std::size_t j = i + 1; j < inside.size(); ++j) {
      const Point& y = space.vertex(inside[j]);
      const double dist = std::hypot(x[0] - y[0], x[1] - y[1]);
      const double diff = (fx - f.node_value(inside[j])).norm();
      best = std::max(best, diff / std::pow(dist, alpha));
    }
  }
  return best;
}

double max_norm(const FEField& f) {
  double best = 0.0;
  for (int a = 0; a < f.num_nodes(); ++a) best = std::max(best, f.node_value(a).norm());
  return best;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

Eigen::SparseMatrix<double> from_triplets(Eigen::Index size, const Triplets& t) {
  Eigen::SparseMatrix<double> m(size, size);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace

Eigen::SparseMatrix<double> assemble_mass(const FESpace& space, int components) {
  const int np = space.dim() + 1;
  const double denom = np * (np + 1);
  Triplets t;
  for (int c = 0; c < space.num_cells(); ++c) {
    auto nodes = space.cell_nodes(c);
    const double m = space.geometry(c).measure / denom;
    for (int a = 0; a < np; ++a) {
      for (int b = 0; b < np; ++b) {
        for (int k = 0; k < components; ++k) {
          t.emplace_back(nodes[a] * components + k, nodes[b] * components + k, m * (a == b ? 2.0 : 1.0));
        }
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(space.num_nodes()) * components, t);
}

Eigen::SparseMatrix<double> assemble_grad_gram(const FESpace& space, int components) {
  const int n = space.dim();
  Triplets t;
  for (int c = 0; c < space.num_cells(); ++c) {
    auto nodes = space.cell_nodes(c);
    const CellGeometry& g = space.geometry(c);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        double dot = 0.0;
        for (int d = 0; d < n; ++d) dot += g.grad[a][d] * g.grad[b][d];
        for (int k = 0; k < components; ++k) {
          t.emplace_back(nodes[a] * components + k, nodes[b] * components + k, g.measure * dot);
        }
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(space.num_nodes()) * components, t);
}

Eigen::SparseMatrix<double> assemble_sym_grad_gram(const FESpace& space) {
  const int n = space.dim();
  Triplets t;
  for (int c = 0; c < space.num_cells(); ++c) {
    auto nodes = space.cell_nodes(c);
    const CellGeometry& g = space.geometry(c);
    // e(N_a e_i) : e(N_b e_j) = (delta_ij grad_a . grad_b + grad_a[j] grad_b[i]) / 2
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        double dot = 0.0;
        for (int d = 0; d < n; ++d) dot += g.grad[a][d] * g.grad[b][d];
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const double v = 0.5 * ((i == j ? dot : 0.0) + g.grad[a][j] * g.grad[b][i]);
            t.emplace_back(nodes[a] * n + i, nodes[b] * n + j, g.measure * v);
          }
        }
      }
    }
  }
  return from_triplets(static_cast<Eigen::Index>(space.num_nodes()) * n, t);
}

std::string to_string(Profile profile) { return profile == Profile::Ramp ? "ramp" : "cyclic"; }

Profile profile_from_string(const std::string& name) {
  if (name == "ramp") return Profile::Ramp;
  if (name == "cyclic") return Profile::Cyclic;
  throw ConfigError("unknown loading profile '" + name + "'");
}

LoadingProgram::LoadingProgram(Profile profile, double amplitude, double horizon, FEField shape,
                               double period)
    : profile_(profile), amplitude_(amplitude), horizon_(horizon), period_(period),
      shape_(std::move(shape)) {
  if (!(horizon_ > 0.0)) throw ConfigError("time horizon must be positive");
  if (profile_ == Profile::Cyclic && !(period_ > 0.0)) throw ConfigError("cyclic period must be positive");
  if (shape_.components() != shape_.space().dim()) {
    throw ConfigError("boundary shape must be a vector field");
  }
}

double LoadingProgram::schedule(double t) const {
  const double r = t / horizon_;
  if (profile_ == Profile::Ramp) return amplitude_ * r;
  return amplitude_ * r * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * t / period_));
}

double LoadingProgram::schedule_rate(double t) const {
  if (profile_ == Profile::Ramp) return amplitude_ / horizon_;
  const double omega = 2.0 * std::numbers::pi / period_;
  return amplitude_ / horizon_ * 0.5 * (1.0 - std::cos(omega * t)) +
         amplitude_ * (t / horizon_) * 0.5 * omega * std::sin(omega * t);
}

FEField LoadingProgram::w(double t) const { return schedule(t) * shape_; }

FEField LoadingProgram::w_dot(double t) const { return schedule_rate(t) * shape_; }

bool LoadingProgram::is_zero() const { return amplitude_ == 0.0 || shape_.coeffs().isZero(0.0); }

FEField lift_dirichlet(const FEField& field, const LoadingProgram& program, double t) {
  if (!field.compatible(program.shape())) throw DiscretizationError("field and loading shape differ");
  FEField out = field;
  const double s = program.schedule(t);
  for (int a : field.space().dirichlet_nodes()) {
    for (int c = 0; c < field.components(); ++c) out.at(a, c) = s * program.shape().at(a, c);
  }
  return out;
}

}  // namespace plateslip
