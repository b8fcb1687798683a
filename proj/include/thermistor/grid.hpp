#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace thermistor {

/// Uniform tensor grid on (0, lx) or (0, lx) x (0, ly). Nodes sit at
/// multiples of the spacing; only the interior nodes carry unknowns, the
/// boundary nodes hold the homogeneous Dirichlet value.
class Grid {
 public:
  static Grid interval(double length, int cells);
  static Grid rectangle(double length_x, double length_y, int cells_x,
                        int cells_y);

  int dim() const noexcept { return dim_; }
  int cells(int axis) const noexcept { return cells_[axis]; }
  double spacing(int axis) const noexcept { return spacing_[axis]; }
  double extent(int axis) const noexcept { return extent_[axis]; }

  /// Interior nodes along an axis (cells - 1; 1 for the unused y axis in 1D).
  int interior(int axis) const noexcept {
    return axis < dim_ ? cells_[axis] - 1 : 1;
  }
  std::size_t interior_count() const noexcept {
    return static_cast<std::size_t>(interior(0)) *
           static_cast<std::size_t>(interior(1));
  }

  /// |Omega|.
  double measure() const noexcept;
  /// Quadrature weight of one interior node (h or hx*hy).
  double node_weight() const noexcept;
  /// Coordinate of node index i (0..cells) along an axis.
  double coord(int axis, int i) const noexcept { return i * spacing_[axis]; }
  /// Flat index of interior node (i, j), with 1 <= i < cells_x and
  /// 1 <= j < cells_y (j = 1 in 1D).
  std::size_t index(int i, int j = 1) const noexcept {
    return static_cast<std::size_t>(j - 1) *
               static_cast<std::size_t>(interior(0)) +
           static_cast<std::size_t>(i - 1);
  }

  bool operator==(const Grid&) const = default;

 private:
  Grid() = default;

  int dim_ = 1;
  std::array<int, 2> cells_{3, 1};
  std::array<double, 2> spacing_{1.0, 1.0};
  std::array<double, 2> extent_{1.0, 1.0};
};

/// Discrete state: one value per interior node, zero on the boundary.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(const Grid& g) : grid(g), values(g.interior_count(), 0.0) {}
  Field(const Grid& g, std::vector<double> v);

  std::size_t size() const noexcept { return values.size(); }
  double& operator[](std::size_t k) { return values[k]; }
  double operator[](std::size_t k) const { return values[k]; }

  /// Node value including boundary nodes (0 there).
  double at(int i, int j = 1) const noexcept;
};

/// Samples a function of the node coordinates onto the interior nodes.
template <class Fn>
Field sample(const Grid& grid, Fn&& fn) {
  Field out(grid);
  for (int j = 1; j <= grid.interior(1); ++j) {
    for (int i = 1; i <= grid.interior(0); ++i) {
      const double x = grid.coord(0, i);
      const double y = grid.dim() == 2 ? grid.coord(1, j) : 0.0;
      out[grid.index(i, j)] = fn(x, y);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Face-centred gradient data.
//
// One entry per cell face carrying a flux: the face-normal two-point
// difference and the squared gradient magnitude on that face. In 2D the
// magnitude adds the tangential derivative averaged from centred differences
// at the two adjacent nodes.

struct FaceSet {
  int axis = 0;
  int count_i = 0;  // faces along the normal axis (cells)
  int count_j = 0;  // rows along the other axis (interior nodes, 1 in 1D)
  std::vector<double> normal;     // normal difference quotient
  std::vector<double> magnitude2; // |grad v|^2 on the face
};

/// Face data for axis 0 (and axis 1 in 2D).
std::vector<FaceSet> face_gradients(const Field& field);

/// Weight of a face in the face-based quadrature (h in 1D, hx*hy in 2D).
double face_weight(const Grid& grid) noexcept;

/// Face diffusion coefficient (|g|^2 + r)^{(m-2)/2}; degenerate value 0 when
/// the base vanishes and m > 2.
double face_coefficient(double magnitude2, double m, double r) noexcept;

/// Flux-form regularised m-Laplacian div((|grad v|^2 + r)^{(m-2)/2} grad v).
Field m_laplacian_apply(const Field& field, double m, double r);

/// -integral of m_laplacian_apply(v) * v, summed face by face:
/// sum_faces w * k * g_normal^2 >= 0.
double dissipation(const Field& field, double m, double r);

// ---------------------------------------------------------------------------
// Quadrature and norms.

/// Trapezoidal cell quadrature over Omega of node samples whose interior
/// values are given and whose boundary nodes all carry boundary_value.
/// Weights sum to |Omega|.
double integrate(const Grid& grid, std::span<const double> interior,
                 double boundary_value = 0.0);

/// (integral |v|^p)^{1/p}.
double lp_norm(const Field& field, double p);

/// integral |grad v|^m over faces (no m-th root). In 2D the two face
/// families are averaged.
double w1m_seminorm(const Field& field, double m);

/// Exponents reported by Norms::lp.
inline constexpr std::array<double, 5> kMoserExponents{2.0, 4.0, 8.0, 16.0,
                                                       32.0};

struct Norms {
  double linf = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  std::array<double, 5> lp{};  // at kMoserExponents
  double lp_max = 0.0;
  double w1m_seminorm = 0.0;
};

Norms norms(const Field& field, double m);

/// Gradient of w1m_seminorm with respect to the interior values.
std::vector<double> w1m_seminorm_gradient(const Field& field, double m);

// ---------------------------------------------------------------------------
// Discrete Poincare constant.

struct PoincareOptions {
  int max_iterations = 2000;
  double tolerance = 1e-10;
  int random_starts = 3;
  unsigned long long seed = 12345;
};

struct PoincareResult {
  double value = 0.0;
  int iterations = 0;
  double last_change = 0.0;
};

/// Largest C with C * integral |v|^m <= integral |grad v|^m on the discrete
/// space. m = 2 uses inverse power iteration on the discrete Dirichlet
/// Laplacian; other m minimise the Rayleigh quotient by Laplacian-
/// preconditioned descent from the m = 2 eigenvector and random starts.
PoincareResult poincare_constant(const Grid& grid, double m,
                                 const PoincareOptions& options = {});

}  // namespace thermistor
