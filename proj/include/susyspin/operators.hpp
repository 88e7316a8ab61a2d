#pragma once

/// Ladder operators A^{+-} = -+ d/dz + W(z) + V(z).S and the partner
/// Hamiltonians, pointwise and as finite matrices on a grid.

#include <utility>

#include <Eigen/Sparse>

#include "susyspin/qmcore.hpp"

namespace susyspin {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

/// Magnetic field seen by the given sector: (-+B0 cos kz, -+B0 sin kz, 0).
Vec3 rotating_field(const FieldConfig& field, Sector sector, double z);

/// Vector superpotential V(z) = (-(B0/k) sin kz, (B0/k) cos kz, 0).
Vec3 vector_superpotential(const FieldConfig& field, double z);
/// dV/dz = (-B0 cos kz, -B0 sin kz, 0).
Vec3 vector_superpotential_derivative(const FieldConfig& field, double z);

struct InducedPotentials {
  double scalar = 0.0;  ///< W^2 +- W' + V^2/4
  Vec3 field = Vec3::Zero();  ///< 2 W V +- V'
};

InducedPotentials induced_potentials(const SuperpotentialSpec& w, const FieldConfig& field,
                                     double z, Sector sector);

/// Discrete A^- and A^+ = (A^-)^dagger in the site-major spinor layout.
///
/// Ring: both are 2n x 2n, A^- = D_f + M with a cyclic forward difference.
/// Box: A^- maps the n sites to the n + 1 links (2(n+1) x 2n); the first
/// row enforces the left Dirichlet ghost and the rest are (psi_{j+1} - psi_j)/h
/// + M_j psi_j with psi_n = 0. H^- = A^+ A^- is then the Dirichlet operator on
/// the sites and H^+ = A^- A^+ lives on Grid::box_links.
struct LadderMatrices {
  SparseMatrix a_minus;
  SparseMatrix a_plus;
  Grid grid;
};

struct HamiltonianMatrix {
  SparseMatrix h;
  Sector sector;
  Grid grid;  ///< lattice the matrix acts on (link grid for the Box H+)
};

/// Per-site coupling block W(z) I + V(z).S.
SpinMatrix ladder_coupling_block(const ModelSpec& spec, double z);

/// Throws std::invalid_argument unless a Ring grid length is 4 pi m / |k|
/// for a positive integer m (only enforced when B0 != 0).
void check_grid_rule(const FieldConfig& field, const Grid& grid);

LadderMatrices build_ladder_matrices(const ModelSpec& spec, const Grid& grid);

struct PartnerHamiltonians {
  HamiltonianMatrix minus;
  HamiltonianMatrix plus;
};

/// H^- = A^+ A^-, H^+ = A^- A^+ as exact sparse products.
PartnerHamiltonians build_partner_hamiltonians(const LadderMatrices& l);

/// Direct discretization of -d^2/dz^2 + V_+-(z) + B_+-(z).S with a 3-point
/// Laplacian and central differences for W' and V'. Always acts on the sites.
HamiltonianMatrix build_direct_hamiltonian(const ModelSpec& spec, const Grid& grid);

enum class GaugeDirection { Forward, Inverse };

/// Forward multiplies (up, down) by (e^{ikz/2}, e^{-ikz/2}), i.e. applies e^{ikzS_z}.
SpinorField gauge_transform(const SpinorField& psi, double k, GaugeDirection direction);

/// (q - k S_z)^2 -+ B0 S_x + B0^2/(4k^2): the rotated-frame Hamiltonian for a
/// plane wave e^{iqz}.
SpinMatrix transformed_hamiltonian(double q, const FieldConfig& field, Sector sector);

/// Largest |entry| of a - b.
double max_entry_difference(const SparseMatrix& a, const SparseMatrix& b);

/// Consistency gap between two discretizations on a Ring grid: the largest
/// max-norm of (a - b) phi over a fixed set of smooth periodic unit-amplitude
/// probe spinors. Scales like the truncation order of the pair.
double probe_discrepancy(const HamiltonianMatrix& a, const HamiltonianMatrix& b);

}  // namespace susyspin
