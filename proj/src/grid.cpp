#include "thermistor/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermistor/error.hpp"

namespace thermistor {

Grid Grid::interval(double length, int cells) {
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "interval length must be positive");
  if (cells < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  Grid g;
  g.dim_ = 1;
  g.cells_ = {cells, 1};
  g.extent_ = {length, 1.0};
  g.spacing_ = {length / cells, 1.0};
  return g;
}

Grid Grid::rectangle(double length_x, double length_y, int cells_x, int cells_y) {
  if (!(length_x > 0.0 && length_y > 0.0))
    throw Error(ErrorCode::InvalidArgument, "rectangle extents must be positive");
  if (cells_x < 2 || cells_y < 2)
    throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  Grid g;
  g.dim_ = 2;
  g.cells_ = {cells_x, cells_y};
  g.extent_ = {length_x, length_y};
  g.spacing_ = {length_x / cells_x, length_y / cells_y};
  return g;
}

double Grid::measure() const noexcept {
  return dim_ == 1 ? extent_[0] : extent_[0] * extent_[1];
}

double Grid::node_weight() const noexcept {
  return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1];
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != g.interior_count())
    throw Error(ErrorCode::InvalidArgument,
                "field length " + std::to_string(values.size()) +
                    " does not match interior node count " +
                    std::to_string(g.interior_count()));
}

double Field::at(int i, int j) const noexcept {
  if (i <= 0 || i >= grid.cells(0)) return 0.0;
  if (grid.dim() == 2 && (j <= 0 || j >= grid.cells(1))) return 0.0;
  return values[grid.index(i, grid.dim() == 2 ? j : 1)];
}

// ---------------------------------------------------------------------------

std::vector<FaceSet> face_gradients(const Field& field) {
  const Grid& g = field.grid;
  std::vector<FaceSet> sets;
  if (g.dim() == 1) {
    const int n = g.cells(0);
    const double h = g.spacing(0);
    FaceSet fs;
    fs.axis = 0;
    fs.count_i = n;
    fs.count_j = 1;
    fs.normal.resize(n);
    fs.magnitude2.resize(n);
    for (int f = 0; f < n; ++f) {
      const double gn = (field.at(f + 1) - field.at(f)) / h;
      fs.normal[f] = gn;
      fs.magnitude2[f] = gn * gn;
    }
    sets.push_back(std::move(fs));
    return sets;
  }

  const int nx = g.cells(0), ny = g.cells(1);
  const double hx = g.spacing(0), hy = g.spacing(1);

  FaceSet xf;
  xf.axis = 0;
  xf.count_i = nx;
  xf.count_j = ny - 1;
  xf.normal.resize(static_cast<std::size_t>(nx) * (ny - 1));
  xf.magnitude2.resize(xf.normal.size());
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t f = static_cast<std::size_t>(j - 1) * nx + i;
      const double gn = (field.at(i + 1, j) - field.at(i, j)) / hx;
      const double gt = 0.5 *
                        ((field.at(i, j + 1) - field.at(i, j - 1)) +
                         (field.at(i + 1, j + 1) - field.at(i + 1, j - 1))) /
                        (2.0 * hy);
      xf.normal[f] = gn;
      xf.magnitude2[f] = gn * gn + gt * gt;
    }
  }

  FaceSet yf;
  yf.axis = 1;
  yf.count_i = ny;
  yf.count_j = nx - 1;
  yf.normal.resize(static_cast<std::size_t>(ny) * (nx - 1));
  yf.magnitude2.resize(yf.normal.size());
  for (int i = 1; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t f = static_cast<std::size_t>(i - 1) * ny + j;
      const double gn = (field.at(i, j + 1) - field.at(i, j)) / hy;
      const double gt = 0.5 *
                        ((field.at(i + 1, j) - field.at(i - 1, j)) +
                         (field.at(i + 1, j + 1) - field.at(i - 1, j + 1))) /
                        (2.0 * hx);
      yf.normal[f] = gn;
      yf.magnitude2[f] = gn * gn + gt * gt;
    }
  }
  sets.push_back(std::move(xf));
  sets.push_back(std::move(yf));
  return sets;
}

double face_weight(const Grid& grid) noexcept { return grid.node_weight(); }

double face_coefficient(double magnitude2, double m, double r) noexcept {
  if (m == 2.0) return 1.0;
  const double base = magnitude2 + r;
  if (base <= 0.0) return 0.0;
  return std::pow(base, 0.5 * (m - 2.0));
}

Field m_laplacian_apply(const Field& field, double m, double r) {
  const Grid& g = field.grid;
  Field out(g);
  const auto sets = face_gradients(field);
  if (g.dim() == 1) {
    const auto& fs = sets[0];
    const double h = g.spacing(0);
    std::vector<double> flux(fs.count_i);
    for (int f = 0; f < fs.count_i; ++f)
      flux[f] = face_coefficient(fs.magnitude2[f], m, r) * fs.normal[f];
    for (int i = 1; i < g.cells(0); ++i)
      out[g.index(i)] = (flux[i] - flux[i - 1]) / h;
    return out;
  }

  const int nx = g.cells(0), ny = g.cells(1);
  const double hx = g.spacing(0), hy = g.spacing(1);
  std::vector<double> fx(sets[0].normal.size()), fy(sets[1].normal.size());
  for (std::size_t f = 0; f < fx.size(); ++f)
    fx[f] = face_coefficient(sets[0].magnitude2[f], m, r) * sets[0].normal[f];
  for (std::size_t f = 0; f < fy.size(); ++f)
    fy[f] = face_coefficient(sets[1].magnitude2[f], m, r) * sets[1].normal[f];
  for (int j = 1; j < ny; ++j) {
    for (int i = 1; i < nx; ++i) {
      const std::size_t xr = static_cast<std::size_t>(j - 1) * nx + i;
      const std::size_t yu = static_cast<std::size_t>(i - 1) * ny + j;
      out[g.index(i, j)] = (fx[xr] - fx[xr - 1]) / hx + (fy[yu] - fy[yu - 1]) / hy;
    }
  }
  return out;
}

double dissipation(const Field& field, double m, double r) {
  const double w = face_weight(field.grid);
  double total = 0.0;
  for (const auto& fs : face_gradients(field)) {
    for (std::size_t f = 0; f < fs.normal.size(); ++f)
      total += w * face_coefficient(fs.magnitude2[f], m, r) * fs.normal[f] * fs.normal[f];
  }
  return total;
}

// ---------------------------------------------------------------------------

double integrate(const Grid& grid, std::span<const double> interior,
                 double boundary_value) {
  const double w = grid.node_weight();
  double sum = 0.0;
  for (double v : interior) sum += v;
  const double interior_measure = w * static_cast<double>(interior.size());
  return w * sum + boundary_value * (grid.measure() - interior_measure);
}

double lp_norm(const Field& field, double p) {
  // Scale by the max to keep |v|^p finite for large p.
  double vmax = 0.0;
  for (double v : field.values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return 0.0;
  std::vector<double> powered(field.size());
  for (std::size_t k = 0; k < field.size(); ++k)
    powered[k] = std::pow(std::abs(field[k]) / vmax, p);
  return vmax * std::pow(integrate(field.grid, powered), 1.0 / p);
}

double w1m_seminorm(const Field& field, double m) {
  const double w = face_weight(field.grid);
  const double family_weight = field.grid.dim() == 1 ? 1.0 : 0.5;
  double total = 0.0;
  for (const auto& fs : face_gradients(field)) {
    for (double g2 : fs.magnitude2) total += w * std::pow(g2, 0.5 * m);
  }
  return family_weight * total;
}

Norms norms(const Field& field, double m) {
  Norms out;
  std::vector<double> absval(field.size()), sq(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) {
    absval[k] = std::abs(field[k]);
    sq[k] = field[k] * field[k];
    out.linf = std::max(out.linf, absval[k]);
  }
  out.l1 = integrate(field.grid, absval);
  out.l2 = std::sqrt(integrate(field.grid, sq));
  for (std::size_t q = 0; q < kMoserExponents.size(); ++q) {
    out.lp[q] = lp_norm(field, kMoserExponents[q]);
    out.lp_max = std::max(out.lp_max, out.lp[q]);
  }
  out.w1m_seminorm = w1m_seminorm(field, m);
  return out;
}

std::vector<double> w1m_seminorm_gradient(const Field& field, double m) {
  const Grid& g = field.grid;
  const double w = face_weight(g);
  std::vector<double> grad(field.size(), 0.0);
  auto add = [&](int i, int j, double value) {
    if (i <= 0 || i >= g.cells(0)) return;
    if (g.dim() == 2 && (j <= 0 || j >= g.cells(1))) return;
    grad[g.index(i, g.dim() == 2 ? j : 1)] += value;
  };
  // d/dmag2 of w * c * mag2^{m/2}
  auto outer = [&](double mag2, double c) {
    if (mag2 <= 0.0) return m == 2.0 ? w * c : 0.0;
    return w * c * 0.5 * m * std::pow(mag2, 0.5 * m - 1.0);
  };

  const auto sets = face_gradients(field);
  if (g.dim() == 1) {
    const auto& fs = sets[0];
    const double h = g.spacing(0);
    for (int f = 0; f < fs.count_i; ++f) {
      const double d = outer(fs.magnitude2[f], 1.0) * 2.0 * fs.normal[f] / h;
      add(f + 1, 1, d);
      add(f, 1, -d);
    }
    return grad;
  }

  const int nx = g.cells(0), ny = g.cells(1);
  const double hx = g.spacing(0), hy = g.spacing(1);
  const auto& xf = sets[0];
  for (int j = 1; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t f = static_cast<std::size_t>(j - 1) * nx + i;
      const double o = outer(xf.magnitude2[f], 0.5);
      const double gn = xf.normal[f];
      const double gts = 0.5 *
                         ((field.at(i, j + 1) - field.at(i, j - 1)) +
                          (field.at(i + 1, j + 1) - field.at(i + 1, j - 1))) /
                         (2.0 * hy);
      const double dn = o * 2.0 * gn / hx;
      add(i + 1, j, dn);
      add(i, j, -dn);
      const double dt = o * 2.0 * gts / (4.0 * hy);
      add(i, j + 1, dt);
      add(i, j - 1, -dt);
      add(i + 1, j + 1, dt);
      add(i + 1, j - 1, -dt);
    }
  }
  const auto& yf = sets[1];
  for (int i = 1; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const std::size_t f = static_cast<std::size_t>(i - 1) * ny + j;
      const double o = outer(yf.magnitude2[f], 0.5);
      const double gn = yf.normal[f];
      const double gts = 0.5 *
                         ((field.at(i + 1, j) - field.at(i - 1, j)) +
                          (field.at(i + 1, j + 1) - field.at(i - 1, j + 1))) /
                         (2.0 * hx);
      const double dn = o * 2.0 * gn / hy;
      add(i, j + 1, dn);
      add(i, j, -dn);
      const double dt = o * 2.0 * gts / (4.0 * hx);
      add(i + 1, j, dt);
      add(i - 1, j, -dt);
      add(i + 1, j + 1, dt);
      add(i - 1, j + 1, -dt);
    }
  }
  return grad;
}

}  // namespace thermistor
