#pragma once

// P1 finite elements on structured simplicial meshes of boxes (n = 1, 2).

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace plateslip {

using Point = std::array<double, 2>;  // second coordinate is 0 when n = 1

/// Small vector / matrix types sized for n <= 2.
using SmallVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2, 1>;
using SmallMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 2, 2>;

enum class Side { Left, Right, Bottom, Top };
enum class BoundaryTag { Dirichlet, Neumann };

std::string to_string(Side side);
Side side_from_string(const std::string& name);

struct Box {
  int dim = 2;
  Point lo{0.0, 0.0};
  Point hi{1.0, 1.0};

  [[nodiscard]] double measure() const;
  [[nodiscard]] bool contains(const Point& p, double tol = 1e-12) const;
};

struct BoundaryFacet {
  std::array<int, 2> nodes{};  // only nodes[0] is used when n = 1
  Side side = Side::Left;
  BoundaryTag tag = BoundaryTag::Neumann;
};

struct Mesh {
  int dim = 2;
  Box box;
  std::array<int, 2> divisions{1, 1};
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;  // first dim + 1 entries used
  std::vector<BoundaryFacet> boundary;
  std::vector<Side> dirichlet_sides;

  [[nodiscard]] int nodes_per_cell() const { return dim + 1; }
};

/// Structured mesh of `box`; for n = 2 every square is split into two triangles
/// along its lower-left to upper-right diagonal.
Mesh build_box_mesh(int dim, std::array<int, 2> divisions, const std::vector<Side>& dirichlet_sides,
                    const Box& box);
Mesh build_box_mesh(int dim, std::array<int, 2> divisions, const std::vector<Side>& dirichlet_sides);

struct QuadraturePoint {
  std::array<double, 3> bary{};  // barycentric coordinates in the cell
  double weight = 0.0;           // fraction of the cell measure; weights sum to 1
};

/// 2-point Gauss (n = 1) or 3-point degree-2 rule (n = 2).
std::span<const QuadraturePoint> quadrature_rule(int dim);

struct CellGeometry {
  double measure = 0.0;
  std::array<std::array<double, 2>, 3> grad{};  // gradients of the barycentric basis
  Point centroid{};
};

/// Immutable P1 space on a mesh: geometry cache, lumped masses, Dirichlet bookkeeping.
class FESpace {
 public:
  explicit FESpace(Mesh mesh);

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] int dim() const { return mesh_.dim; }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(mesh_.vertices.size()); }
  [[nodiscard]] int num_cells() const { return static_cast<int>(mesh_.cells.size()); }
  [[nodiscard]] const Point& vertex(int node) const { return mesh_.vertices[node]; }
  [[nodiscard]] std::span<const int> cell_nodes(int cell) const {
    return {mesh_.cells[cell].data(), static_cast<std::size_t>(mesh_.dim + 1)};
  }
  [[nodiscard]] const CellGeometry& geometry(int cell) const { return geometry_[cell]; }
  [[nodiscard]] Point map_to_cell(int cell, const std::array<double, 3>& bary) const;

  /// Row sums of the scalar mass matrix; nodal quadrature weights.
  [[nodiscard]] const std::vector<double>& lumped_mass() const { return lumped_; }
  [[nodiscard]] double domain_measure() const { return measure_; }

  [[nodiscard]] bool is_dirichlet(int node) const { return dirichlet_[node] != 0; }
  [[nodiscard]] const std::vector<int>& dirichlet_nodes() const { return dirichlet_nodes_; }
  [[nodiscard]] const std::vector<int>& free_nodes() const { return free_nodes_; }

  /// The box shrunk by one mesh layer on every side.
  [[nodiscard]] Box interior_subdomain() const;
  /// Largest side of the structured cells.
  [[nodiscard]] double mesh_size() const;

 private:
  Mesh mesh_;
  std::vector<CellGeometry> geometry_;
  std::vector<double> lumped_;
  std::vector<char> dirichlet_;
  std::vector<int> dirichlet_nodes_;
  std::vector<int> free_nodes_;
  double measure_ = 0.0;
};

using SpacePtr = std::shared_ptr<const FESpace>;

/// Nodal coefficient vector of a scalar (components = 1) or vector (components = n) P1 field.
/// Layout is node-major: coeffs[node * components + c].
class FEField {
 public:
  FEField() = default;
  FEField(SpacePtr space, int components);
  FEField(SpacePtr space, int components, Eigen::VectorXd coeffs);

  [[nodiscard]] const FESpace& space() const { return *space_; }
  [[nodiscard]] const SpacePtr& space_ptr() const { return space_; }
  [[nodiscard]] int components() const { return components_; }
  [[nodiscard]] int num_nodes() const { return space_->num_nodes(); }

  [[nodiscard]] Eigen::VectorXd& coeffs() { return coeffs_; }
  [[nodiscard]] const Eigen::VectorXd& coeffs() const { return coeffs_; }

  [[nodiscard]] double at(int node, int comp = 0) const { return coeffs_[node * components_ + comp]; }
  double& at(int node, int comp = 0) { return coeffs_[node * components_ + comp]; }
  [[nodiscard]] SmallVec node_value(int node) const;
  /// Cellwise-constant gradient, rows = components, cols = n.
  [[nodiscard]] SmallMat cell_gradient(int cell) const;
  [[nodiscard]] SmallVec value_at(int cell, const std::array<double, 3>& bary) const;

  [[nodiscard]] bool compatible(const FEField& other) const;

  FEField& operator+=(const FEField& other);
  FEField& operator-=(const FEField& other);
  FEField& operator*=(double s);
  friend FEField operator+(FEField a, const FEField& b) { return a += b; }
  friend FEField operator-(FEField a, const FEField& b) { return a -= b; }
  friend FEField operator*(double s, FEField a) { return a *= s; }

 private:
  SpacePtr space_;
  int components_ = 0;
  Eigen::VectorXd coeffs_;
};

using FieldFunction = std::function<std::array<double, 2>(const Point&)>;

/// Nodal interpolant of an analytic function.
FEField interpolate(const FieldFunction& f, SpacePtr space, int components);

double l2_norm(const FEField& f);
double semi_h1(const FEField& f);
double h1_norm(const FEField& f);
/// ||e(v)||_{L2} for a vector field.
double sym_grad_l2(const FEField& v);
/// Largest |f(x) - f(y)| / |x - y|^alpha over node pairs inside `subdomain`.
double holder_seminorm(const FEField& f, double alpha, const Box& subdomain);
/// Largest nodal magnitude |f(x)|.
double max_norm(const FEField& f);

/// Consistent mass (L2 Gram) matrix of a field with the given number of components.
Eigen::SparseMatrix<double> assemble_mass(const FESpace& space, int components);
/// Gram matrix of grad u : grad v.
Eigen::SparseMatrix<double> assemble_grad_gram(const FESpace& space, int components);
/// Gram matrix of e(u) : e(v) for vector fields.
Eigen::SparseMatrix<double> assemble_sym_grad_gram(const FESpace& space);

enum class Profile { Ramp, Cyclic };

std::string to_string(Profile profile);
Profile profile_from_string(const std::string& name);

/// Boundary datum w(t) = s(t) g with a scalar schedule s.
///
/// Ramp:    s(t) = amplitude t / T.
/// Cyclic:  s(t) = amplitude (t / T) (1 - cos(2 pi t / period)) / 2, a load-unload cycle whose
///          peaks grow linearly, so every reload eventually exceeds the previous maximum.
class LoadingProgram {
 public:
  LoadingProgram(Profile profile, double amplitude, double horizon, FEField shape, double period = 0.0);

  [[nodiscard]] Profile profile() const { return profile_; }
  [[nodiscard]] double amplitude() const { return amplitude_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  [[nodiscard]] double period() const { return period_; }
  [[nodiscard]] const FEField& shape() const { return shape_; }

  [[nodiscard]] double schedule(double t) const;
  [[nodiscard]] double schedule_rate(double t) const;
  [[nodiscard]] FEField w(double t) const;
  [[nodiscard]] FEField w_dot(double t) const;
  [[nodiscard]] bool is_zero() const;

 private:
  Profile profile_;
  double amplitude_;
  double horizon_;
  double period_;
  FEField shape_;
};

/// Copy of `field` whose Dirichlet nodes carry w(t).
FEField lift_dirichlet(const FEField& field, const LoadingProgram& program, double t);

}  // namespace plateslip
