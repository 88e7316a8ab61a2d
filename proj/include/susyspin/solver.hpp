#pragma once

/// Numerical spectra of the discretized partner Hamiltonians.
///
/// Eigenvalues come from LAPACK band solvers (the grid operators are
/// banded, and ring operators become banded under a folded ordering);
/// eigenvectors from shift-invert subspace iteration. Small matrices go
/// through the dense Hermitian solver.

#include <optional>
#include <string>
#include <vector>

#include "susyspin/operators.hpp"

namespace susyspin {

struct EigenDecomposition {
  Eigen::VectorXd values;  ///< ascending
  std::optional<Eigen::MatrixXcd> vectors;  ///< orthonormal columns
};

/// Full spectrum of a dense Hermitian matrix (symmetrized as (H + H^dagger)/2).
/// Rejects non-square input and Hermiticity violations above 1e-8 ||H||.
EigenDecomposition eigen_hermitian(const Eigen::MatrixXcd& h, bool want_vectors);

/// Lowest `count` eigenpairs of a sparse Hermitian matrix; count <= 0 asks for
/// the whole spectrum (vectors are then only available for small matrices).
EigenDecomposition eigen_hermitian(const SparseMatrix& h, int count, bool want_vectors);

struct SpectrumResult {
  std::vector<double> eigenvalues;
  std::optional<Eigen::MatrixXcd> eigenvectors;
  Grid grid;
  Sector sector;
  std::vector<std::string> warnings;

  /// Eigenvector i as a spinor field on `grid`.
  SpinorField state(int i) const;
};

SpectrumResult spectrum_of(const HamiltonianMatrix& h, int count, bool want_vectors);

struct PartnerSpectra {
  SpectrumResult minus;
  SpectrumResult plus;
};

/// Both factorized partners of one LadderMatrices.
PartnerSpectra partner_spectra(const LadderMatrices& l, int count, bool want_vectors);

/// Ring of length 4 pi m / |k| with n points.
Grid ring_grid(const FieldConfig& field, int periods, int n);

/// Lowest `count` levels of the factorized ring Hamiltonian for spec.sector;
/// spec.w must be Zero.
SpectrumResult ring_spectrum(const ModelSpec& spec, int periods, int n, int count,
                             bool want_vectors = false);
PartnerSpectra ring_spectra(const FieldConfig& field, int periods, int n, int count,
                            bool want_vectors = false);

/// Lowest `count` levels of the factorized Box Hamiltonian on [-L/2, L/2].
/// The H- ground state is always computed for the edge-amplitude check,
/// which adds a warning when the edge amplitude exceeds 1e-8 of the peak.
SpectrumResult bound_spectrum(const ModelSpec& spec, double length, int n, int count,
                              bool want_vectors = false);
PartnerSpectra bound_spectra(const ModelSpec& spec, double length, int n, int count,
                             bool want_vectors = false);

/// sqrt(h sum_j |up_j|^2 + |down_j|^2).
double l2_norm(const SpinorField& psi);

/// Least-squares slope of log|psi| over the trailing `window` fraction of the
/// grid. Returns 0 for a flat amplitude; throws on zeros inside the window.
double tail_decay_fit(const SpinorField& psi, double window);

/// max(|psi| at the two end points) / max |psi|.
double edge_amplitude_ratio(const SpinorField& psi);

/// An eigenvalue is a numerical zero mode iff it lies below max(1e-6, 10 h^2 k^2).
double zero_mode_threshold(const Grid& grid, double k);

int count_below(const std::vector<double>& values, double threshold);

}  // namespace susyspin
