#include "susyspin/qmcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace susyspin {

SpinOperators make_spin_operators() {
  const cplx i{0.0, 1.0};
  SpinOperators s;
  s.x << 0.0, 0.5, 0.5, 0.0;
  s.y << 0.0, -0.5 * i, 0.5 * i, 0.0;
  s.z << 0.5, 0.0, 0.0, -0.5;
  return s;
}

SpinMatrix spin_dot(const Vec3& v) {
  const cplx i{0.0, 1.0};
  SpinMatrix m;
  m << 0.5 * v.z(), 0.5 * (v.x() - i * v.y()), 0.5 * (v.x() + i * v.y()), -0.5 * v.z();
  return m;
}

std::string to_string(Sector s) { return s == Sector::Plus ? "plus" : "minus"; }

Sector parse_sector(const std::string& text) {
  if (text == "plus" || text == "+") return Sector::Plus;
  if (text == "minus" || text == "-") return Sector::Minus;
  throw std::invalid_argument("sector must be 'plus' or 'minus', got '" + text + "'");
}

SuperpotentialSpec SuperpotentialSpec::tabulated(std::vector<double> z, std::vector<double> w,
                                                 double w_minus_inf, double w_plus_inf) {
  return SuperpotentialSpec(Tabulated{std::move(z), std::move(w), w_minus_inf, w_plus_inf});
}

namespace {

// Index of the segment [z_i, z_{i+1}] containing x; requires z.front() <= x <= z.back().
std::size_t segment_of(const std::vector<double>& z, double x) {
  auto it = std::upper_bound(z.begin(), z.end(), x);
  std::size_t i = static_cast<std::size_t>(it - z.begin());
  i = i == 0 ? 0 : i - 1;
  return std::min(i, z.size() - 2);
}

}  // namespace

double SuperpotentialSpec::value(double z) const {
  return std::visit(
      [z](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Tanh>) {
          return v.alpha * std::tanh(z);
        } else {
          if (z < v.z.front()) return v.w_minus_inf;
          if (z > v.z.back()) return v.w_plus_inf;
          const std::size_t i = segment_of(v.z, z);
          const double t = (z - v.z[i]) / (v.z[i + 1] - v.z[i]);
          return (1.0 - t) * v.w[i] + t * v.w[i + 1];
        }
      },
      variant_);
}

double SuperpotentialSpec::table_derivative_at_sample(std::size_t i) const {
  const auto& t = std::get<Tabulated>(variant_);
  const std::size_t last = t.z.size() - 1;
  if (i == 0) return (t.w[1] - t.w[0]) / (t.z[1] - t.z[0]);
  if (i == last) return (t.w[last] - t.w[last - 1]) / (t.z[last] - t.z[last - 1]);
  return (t.w[i + 1] - t.w[i - 1]) / (t.z[i + 1] - t.z[i - 1]);
}

double SuperpotentialSpec::derivative(double z) const {
  if (is_zero()) return 0.0;
  if (const auto* t = std::get_if<Tanh>(&variant_)) {
    const double c = std::cosh(z);
    return t->alpha / (c * c);
  }
  const auto& t = std::get<Tabulated>(variant_);
  if (z < t.z.front() || z > t.z.back()) return 0.0;
  const std::size_t i = segment_of(t.z, z);
  const double s = (z - t.z[i]) / (t.z[i + 1] - t.z[i]);
  return (1.0 - s) * table_derivative_at_sample(i) + s * table_derivative_at_sample(i + 1);
}

double SuperpotentialSpec::grid_derivative(double z, double h) const {
  if (std::holds_alternative<Tabulated>(variant_)) return derivative(z);
  return (value(z + h) - value(z - h)) / (2.0 * h);
}

std::pair<double, double> SuperpotentialSpec::asymptotes() const {
  return std::visit(
      [](const auto& v) -> std::pair<double, double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Zero>) {
          return {0.0, 0.0};
        } else if constexpr (std::is_same_v<T, Tanh>) {
          return {-v.alpha, v.alpha};
        } else {
          return {v.w_minus_inf, v.w_plus_inf};
        }
      },
      variant_);
}

std::vector<std::string> SuperpotentialSpec::violations() const {
  std::vector<std::string> out;
  if (const auto* t = std::get_if<Tanh>(&variant_)) {
    if (!(t->alpha > 0.0) || !std::isfinite(t->alpha)) out.emplace_back("alpha must be positive");
  } else if (const auto* t = std::get_if<Tabulated>(&variant_)) {
    if (t->z.size() < 2) out.emplace_back("tabulated superpotential needs at least two samples");
    if (t->z.size() != t->w.size()) out.emplace_back("tabulated z and W sample counts differ");
    for (std::size_t i = 1; i < t->z.size(); ++i) {
      if (!(t->z[i] > t->z[i - 1])) {
        out.emplace_back("tabulated z samples must be strictly increasing");
        break;
      }
    }
    if (!std::isfinite(t->w_minus_inf) || !std::isfinite(t->w_plus_inf))
      out.emplace_back("tabulated asymptotes must be finite");
  }
  return out;
}

ValidationResult validate_model(const ModelSpec& spec) {
  ValidationResult r;
  if (spec.field.k == 0.0) r.violations.emplace_back("k must be nonzero");
  if (!std::isfinite(spec.field.k)) r.violations.emplace_back("k must be finite");
  if (!std::isfinite(spec.field.b0)) r.violations.emplace_back("b0 must be finite");
  for (auto& v : spec.w.violations()) r.violations.push_back(std::move(v));
  return r;
}

Grid::Grid(int n, double length, Boundary b, double origin)
    : n_(n), length_(length), boundary_(b), origin_(origin) {
  if (n < 8) throw std::invalid_argument("grid needs at least 8 points");
  if (!(length > 0.0) || !std::isfinite(length))
    throw std::invalid_argument("grid length must be positive");
}

Grid Grid::ring(int n, double length) { return Grid(n, length, Boundary::Ring, 0.0); }

Grid Grid::box(int n, double length) {
  return Grid(n, length, Boundary::Box, -0.5 * length + 0.5 * length / n);
}

Grid Grid::box_links(const Grid& sites) {
  if (sites.boundary() != Boundary::Box) throw std::invalid_argument("link grid needs a Box grid");
  const double h = sites.spacing();
  return Grid(sites.n() + 1, (sites.n() + 1) * h, Boundary::Box, -0.5 * sites.length());
}

std::vector<double> Grid::points() const {
  std::vector<double> z(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) z[static_cast<std::size_t>(j)] = this->z(j);
  return z;
}

SpinorField::SpinorField(Grid g, Eigen::VectorXcd u, Eigen::VectorXcd d)
    : grid(std::move(g)), up(std::move(u)), down(std::move(d)) {
  if (up.size() != grid.n() || down.size() != grid.n())
    throw std::invalid_argument("spinor component length must equal the grid size");
}

SpinorField SpinorField::zeros(const Grid& g) {
  return SpinorField(g, Eigen::VectorXcd::Zero(g.n()), Eigen::VectorXcd::Zero(g.n()));
}

SpinorField SpinorField::constant(const Grid& g, const Spinor& chi) {
  return SpinorField(g, Eigen::VectorXcd::Constant(g.n(), chi(0)),
                     Eigen::VectorXcd::Constant(g.n(), chi(1)));
}

Eigen::VectorXcd SpinorField::interleaved() const {
  Eigen::VectorXcd v(2 * grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    v(2 * j) = up(j);
    v(2 * j + 1) = down(j);
  }
  return v;
}

SpinorField SpinorField::from_interleaved(const Grid& g, const Eigen::VectorXcd& v) {
  if (v.size() != 2 * g.n()) throw std::invalid_argument("interleaved vector has the wrong size");
  SpinorField f = zeros(g);
  for (int j = 0; j < g.n(); ++j) {
    f.up(j) = v(2 * j);
    f.down(j) = v(2 * j + 1);
  }
  return f;
}

double SpinorField::norm() const {
  return std::sqrt(grid.spacing() * (up.squaredNorm() + down.squaredNorm()));
}

SpinorField SpinorField::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm))
    throw std::domain_error("cannot normalize a zero or non-finite spinor field");
  return SpinorField(grid, up / nrm, down / nrm);
}

}  // namespace susyspin
