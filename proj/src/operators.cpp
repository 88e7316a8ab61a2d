#include "susyspin/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace susyspin {

namespace {

using Triplet = Eigen::Triplet<cplx>;

void require_pitch(const FieldConfig& field) {
  if (field.k == 0.0) throw std::invalid_argument("k must be nonzero");
}

void add_block(std::vector<Triplet>& t, int row, int col, const SpinMatrix& m) {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      if (m(a, b) != cplx{0.0, 0.0}) t.emplace_back(2 * row + a, 2 * col + b, m(a, b));
}

void add_identity(std::vector<Triplet>& t, int row, int col, double value) {
  t.emplace_back(2 * row, 2 * col, value);
  t.emplace_back(2 * row + 1, 2 * col + 1, value);
}

}  // namespace

Vec3 rotating_field(const FieldConfig& field, Sector sector, double z) {
  const double s = -sector_sign(sector);
  return {s * field.b0 * std::cos(field.k * z), s * field.b0 * std::sin(field.k * z), 0.0};
}

Vec3 vector_superpotential(const FieldConfig& field, double z) {
  require_pitch(field);
  const double a = field.b0 / field.k;
  return {-a * std::sin(field.k * z), a * std::cos(field.k * z), 0.0};
}

Vec3 vector_superpotential_derivative(const FieldConfig& field, double z) {
  require_pitch(field);
  return {-field.b0 * std::cos(field.k * z), -field.b0 * std::sin(field.k * z), 0.0};
}

InducedPotentials induced_potentials(const SuperpotentialSpec& w, const FieldConfig& field,
                                     double z, Sector sector) {
  const double s = sector_sign(sector);
  const double wz = w.value(z);
  const Vec3 v = vector_superpotential(field, z);
  InducedPotentials out;
  out.scalar = wz * wz + s * w.derivative(z) + 0.25 * v.squaredNorm();
  out.field = 2.0 * wz * v + s * vector_superpotential_derivative(field, z);
  return out;
}

SpinMatrix ladder_coupling_block(const ModelSpec& spec, double z) {
  return spec.w.value(z) * SpinMatrix::Identity() +
         spin_dot(vector_superpotential(spec.field, z));
}

void check_grid_rule(const FieldConfig& field, const Grid& grid) {
  require_pitch(field);
  if (grid.boundary() != Boundary::Ring || field.b0 == 0.0) return;
  const double periods = grid.length() * std::abs(field.k) / (4.0 * std::numbers::pi);
  const double m = std::round(periods);
  if (m < 1.0 || std::abs(periods - m) > 1e-9 * std::max(1.0, periods)) {
    throw std::invalid_argument("ring length must be L = 4*pi*m/|k| for a positive integer m (got L*|k|/(4*pi) = " +
                                std::to_string(periods) + ")");
  }
}

LadderMatrices build_ladder_matrices(const ModelSpec& spec, const Grid& grid) {
  if (auto v = validate_model(spec); !v.ok()) throw std::invalid_argument(v.violations.front());
  check_grid_rule(spec.field, grid);

  const int n = grid.n();
  const double inv_h = 1.0 / grid.spacing();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * 10);

  SparseMatrix a_minus;
  if (grid.boundary() == Boundary::Ring) {
    for (int j = 0; j < n; ++j) {
      add_block(t, j, j, ladder_coupling_block(spec, grid.z(j)) - inv_h * SpinMatrix::Identity());
      add_identity(t, j, (j + 1) % n, inv_h);
    }
    a_minus.resize(2 * n, 2 * n);
  } else {
    // Link row 0 carries the left ghost: (psi_0 - 0)/h.
    add_identity(t, 0, 0, inv_h);
    for (int j = 0; j < n; ++j) {
      add_block(t, j + 1, j, ladder_coupling_block(spec, grid.z(j)) - inv_h * SpinMatrix::Identity());
      if (j + 1 < n) add_identity(t, j + 1, j + 1, inv_h);
    }
    a_minus.resize(2 * (n + 1), 2 * n);
  }
  a_minus.setFromTriplets(t.begin(), t.end());
  a_minus.makeCompressed();

  SparseMatrix a_plus = a_minus.adjoint();
  a_plus.makeCompressed();
  return {std::move(a_minus), std::move(a_plus), grid};
}

PartnerHamiltonians build_partner_hamiltonians(const LadderMatrices& l) {
  SparseMatrix hm = (l.a_plus * l.a_minus).pruned();
  SparseMatrix hp = (l.a_minus * l.a_plus).pruned();
  hm.makeCompressed();
  hp.makeCompressed();
  const Grid plus_grid = l.grid.boundary() == Boundary::Box ? Grid::box_links(l.grid) : l.grid;
  return {HamiltonianMatrix{std::move(hm), Sector::Minus, l.grid},
          HamiltonianMatrix{std::move(hp), Sector::Plus, plus_grid}};
}

HamiltonianMatrix build_direct_hamiltonian(const ModelSpec& spec, const Grid& grid) {
  if (auto v = validate_model(spec); !v.ok()) throw std::invalid_argument(v.violations.front());
  check_grid_rule(spec.field, grid);

  const int n = grid.n();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double s = sector_sign(spec.sector);
  const bool ring = grid.boundary() == Boundary::Ring;

  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * 10);
  for (int j = 0; j < n; ++j) {
    const double z = grid.z(j);
    const double wz = spec.w.value(z);
    const Vec3 v = vector_superpotential(spec.field, z);
    const Vec3 dv = (vector_superpotential(spec.field, z + h) - vector_superpotential(spec.field, z - h)) / (2.0 * h);
    const double scalar = wz * wz + s * spec.w.grid_derivative(z, h) + 0.25 * v.squaredNorm();
    const Vec3 b = 2.0 * wz * v + s * dv;

    add_block(t, j, j, (2.0 * inv_h2 + scalar) * SpinMatrix::Identity() + spin_dot(b));
    if (ring || j + 1 < n) add_identity(t, j, (j + 1) % n, -inv_h2);
    if (ring || j > 0) add_identity(t, j, (j + n - 1) % n, -inv_h2);
  }
  SparseMatrix hm(2 * n, 2 * n);
  hm.setFromTriplets(t.begin(), t.end());
  hm.makeCompressed();
  return {std::move(hm), spec.sector, grid};
}

SpinorField gauge_transform(const SpinorField& psi, double k, GaugeDirection direction) {
  const double sign = direction == GaugeDirection::Forward ? 1.0 : -1.0;
  SpinorField out = psi;
  for (int j = 0; j < psi.grid.n(); ++j) {
    const double phase = 0.5 * sign * k * psi.grid.z(j);
    out.up(j) *= std::polar(1.0, phase);
    out.down(j) *= std::polar(1.0, -phase);
  }
  return out;
}

SpinMatrix transformed_hamiltonian(double q, const FieldConfig& field, Sector sector) {
  require_pitch(field);
  const double shift = field.b0 * field.b0 / (4.0 * field.k * field.k);
  const double off = -sector_sign(sector) * 0.5 * field.b0;
  const double dm = q - 0.5 * field.k;
  const double dp = q + 0.5 * field.k;
  SpinMatrix m;
  m << dm * dm + shift, off, off, dp * dp + shift;
  return m;
}

double max_entry_difference(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix shapes differ");
  const SparseMatrix d = a - b;
  double worst = 0.0;
  for (int c = 0; c < d.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(d, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double probe_discrepancy(const HamiltonianMatrix& a, const HamiltonianMatrix& b) {
  if (a.grid.boundary() != Boundary::Ring || !(a.grid == b.grid))
    throw std::invalid_argument("probe discrepancy needs two operators on the same Ring grid");
  const Grid& g = a.grid;
  const double p = 2.0 * std::numbers::pi / g.length();
  const cplx i{0.0, 1.0};
  const double r = 1.0 / std::sqrt(2.0);

  std::vector<SpinorField> probes(3, SpinorField::zeros(g));
  for (int j = 0; j < g.n(); ++j) {
    const double z = g.z(j);
    probes[0].up(j) = std::exp(i * p * z);
    probes[1].down(j) = std::cos(2.0 * p * z);
    probes[2].up(j) = r * std::sin(p * z);
    probes[2].down(j) = r * std::exp(-3.0 * i * p * z);
  }
  const SparseMatrix d = a.h - b.h;
  double worst = 0.0;
  for (const auto& phi : probes) {
    const Eigen::VectorXcd r_vec = d * phi.interleaved();
    worst = std::max(worst, r_vec.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace susyspin
