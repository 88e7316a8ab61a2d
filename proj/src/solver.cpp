#include "susyspin/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/SparseLU>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace susyspin {

namespace {

constexpr int kDenseCutoff = 400;

Eigen::VectorXd dense_values(Eigen::MatrixXcd a, bool want_vectors, Eigen::MatrixXcd* vectors) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U', n,
                                         a.data(), n, w.data());
  if (info != 0) throw NumericError("zheevd failed with info = " + std::to_string(info));
  if (want_vectors && vectors) *vectors = std::move(a);
  return w;
}

double max_abs_column_sum(const SparseMatrix& h) {
  double best = 0.0;
  for (int c = 0; c < h.outerSize(); ++c) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(h, c); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

// Position of each index in the band ordering. The folded ordering
// 0, N-1, 1, N-2, ... turns a cyclic band into an ordinary one.
struct BandOrdering {
  std::vector<int> position;
  int kd = 0;
};

BandOrdering band_ordering(const SparseMatrix& h) {
  const int n = static_cast<int>(h.rows());
  auto bandwidth = [&](const std::vector<int>& pos) {
    int kd = 0;
    for (int c = 0; c < h.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(h, c); it; ++it)
        kd = std::max(kd, std::abs(pos[static_cast<std::size_t>(it.row())] - pos[static_cast<std::size_t>(it.col())]));
    return kd;
  };
  std::vector<int> identity(static_cast<std::size_t>(n));
  std::vector<int> folded(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    identity[static_cast<std::size_t>(i)] = i;
    folded[static_cast<std::size_t>(i)] = 2 * i < n ? 2 * i : 2 * (n - 1 - i) + 1;
  }
  const int kd_id = bandwidth(identity);
  const int kd_fold = bandwidth(folded);
  if (kd_fold < kd_id) return {std::move(folded), kd_fold};
  return {std::move(identity), kd_id};
}

// Eigenvalues of the Hermitian band form of h (upper storage), lowest
// `count` or all of them.
Eigen::VectorXd band_values(const SparseMatrix& h, int count) {
  const int n = static_cast<int>(h.rows());
  const BandOrdering ord = band_ordering(h);
  const int kd = ord.kd;
  const int ldab = kd + 1;
  std::vector<cplx> ab(static_cast<std::size_t>(ldab) * static_cast<std::size_t>(n), cplx{0.0, 0.0});
  for (int c = 0; c < h.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(h, c); it; ++it) {
      const int i = ord.position[static_cast<std::size_t>(it.row())];
      const int j = ord.position[static_cast<std::size_t>(it.col())];
      if (i > j) continue;
      ab[static_cast<std::size_t>(kd + i - j) + static_cast<std::size_t>(j) * ldab] = it.value();
    }
  }

  if (count <= 0 || count >= n) {
    Eigen::VectorXd w(n);
    cplx dummy{};
    const lapack_int info = LAPACKE_zhbevd(LAPACK_COL_MAJOR, 'N', 'U', n, kd, ab.data(), ldab,
                                           w.data(), &dummy, 1);
    if (info != 0) throw NumericError("zhbevd failed with info = " + std::to_string(info));
    return w;
  }

  Eigen::VectorXd w(n);
  cplx q_dummy{};
  cplx z_dummy{};
  std::vector<lapack_int> ifail(static_cast<std::size_t>(n));
  lapack_int found = 0;
  const double abstol = 2.0 * LAPACKE_dlamch('S');
  const lapack_int info =
      LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', n, kd, ab.data(), ldab, &q_dummy, 1, 0.0, 0.0,
                     1, count, abstol, &found, w.data(), &z_dummy, 1, ifail.data());
  if (info != 0 || found != count)
    throw NumericError("zhbevx failed with info = " + std::to_string(info));
  return w.head(count);
}

// Lowest `count` eigenvectors by shift-invert block iteration with a
// Rayleigh-Ritz step per sweep. `lowest` is the known smallest eigenvalue.
Eigen::MatrixXcd subspace_vectors(const SparseMatrix& h, int count, double lowest) {
  const int n = static_cast<int>(h.rows());
  const int guard = std::max(6, count / 2);
  const int p = std::min(n, count + guard);
  const double scale = std::max(1.0, max_abs_column_sum(h));
  const double shift = lowest - 1e-8 * scale;
  const double tol = 1e-10 * scale;

  SparseMatrix shifted = h;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) throw NumericError("shifted factorization failed");

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd x(n, p);
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < n; ++r) x(r, c) = cplx{normal(rng), normal(rng)};

  for (int sweep = 0; sweep < 500; ++sweep) {
    Eigen::MatrixXcd y = lu.solve(x);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
    const Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, p);
    const Eigen::MatrixXcd hq = h * q;
    Eigen::MatrixXcd t = q.adjoint() * hq;
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ritz(t);
    x = q * ritz.eigenvectors();
    const Eigen::MatrixXcd hx = hq * ritz.eigenvectors();

    bool converged = true;
    for (int c = 0; c < count && converged; ++c)
      converged = (hx.col(c) - ritz.eigenvalues()(c) * x.col(c)).norm() < tol;
    if (converged) return x.leftCols(count);
  }
  throw NumericError("subspace iteration did not converge");
}

void check_square(const SparseMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
}

}  // namespace

EigenDecomposition eigen_hermitian(const Eigen::MatrixXcd& h, bool want_vectors) {
  if (h.rows() != h.cols()) throw std::invalid_argument("matrix must be square");
  const double scale = h.cwiseAbs().maxCoeff();
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * std::max(scale, std::numeric_limits<double>::min()))
    throw std::invalid_argument("matrix is not Hermitian");
  EigenDecomposition out;
  if (h.rows() == 0) {
    out.values.resize(0);
    return out;
  }
  Eigen::MatrixXcd sym = 0.5 * (h + h.adjoint());
  Eigen::MatrixXcd vecs;
  out.values = dense_values(std::move(sym), want_vectors, &vecs);
  if (want_vectors) out.vectors = std::move(vecs);
  return out;
}

EigenDecomposition eigen_hermitian(const SparseMatrix& h, int count, bool want_vectors) {
  check_square(h);
  const int n = static_cast<int>(h.rows());
  const bool all = count <= 0 || count >= n;
  if (n <= kDenseCutoff) {
    EigenDecomposition d = eigen_hermitian(Eigen::MatrixXcd(h), want_vectors);
    if (!all) {
      d.values = d.values.head(count).eval();
      if (d.vectors) d.vectors = d.vectors->leftCols(count).eval();
    }
    return d;
  }
  if (want_vectors && all) throw std::invalid_argument("full eigenvector sets are limited to small matrices");
  EigenDecomposition d;
  d.values = band_values(h, all ? 0 : count);
  if (want_vectors) d.vectors = subspace_vectors(h, count, d.values(0));
  return d;
}

SpinorField SpectrumResult::state(int i) const {
  if (!eigenvectors) throw std::logic_error("spectrum was computed without eigenvectors");
  if (i < 0 || i >= eigenvectors->cols()) throw std::out_of_range("eigenvector index out of range");
  SpinorField f = SpinorField::from_interleaved(grid, eigenvectors->col(i));
  const double nrm = f.norm();
  return SpinorField(grid, f.up / nrm, f.down / nrm);
}

SpectrumResult spectrum_of(const HamiltonianMatrix& h, int count, bool want_vectors) {
  EigenDecomposition d = eigen_hermitian(h.h, count, want_vectors);
  SpectrumResult r{std::vector<double>(d.values.data(), d.values.data() + d.values.size()),
                   std::move(d.vectors), h.grid, h.sector, {}};
  return r;
}

PartnerSpectra partner_spectra(const LadderMatrices& l, int count, bool want_vectors) {
  const PartnerHamiltonians hp = build_partner_hamiltonians(l);
  return {spectrum_of(hp.minus, count, want_vectors), spectrum_of(hp.plus, count, want_vectors)};
}

Grid ring_grid(const FieldConfig& field, int periods, int n) {
  if (field.k == 0.0) throw std::invalid_argument("k must be nonzero");
  if (periods < 1) throw std::invalid_argument("periods must be a positive integer");
  return Grid::ring(n, 4.0 * std::numbers::pi * periods / std::abs(field.k));
}

PartnerSpectra ring_spectra(const FieldConfig& field, int periods, int n, int count, bool want_vectors) {
  const ModelSpec spec{field, SuperpotentialSpec::zero(), Sector::Minus};
  return partner_spectra(build_ladder_matrices(spec, ring_grid(field, periods, n)), count, want_vectors);
}

SpectrumResult ring_spectrum(const ModelSpec& spec, int periods, int n, int count, bool want_vectors) {
  if (!spec.w.is_zero()) throw std::invalid_argument("ring spectra are defined for W = 0");
  const LadderMatrices l = build_ladder_matrices(spec, ring_grid(spec.field, periods, n));
  const PartnerHamiltonians hp = build_partner_hamiltonians(l);
  return spectrum_of(spec.sector == Sector::Minus ? hp.minus : hp.plus, count, want_vectors);
}

namespace {

void edge_check(SpectrumResult& minus, const HamiltonianMatrix& h) {
  SpinorField ground = minus.eigenvectors ? minus.state(0) : [&] {
    const EigenDecomposition d = eigen_hermitian(h.h, 1, true);
    return SpinorField::from_interleaved(h.grid, d.vectors->col(0));
  }();
  const double ratio = edge_amplitude_ratio(ground);
  if (ratio > 1e-8) {
    std::ostringstream msg;
    msg << "box edge amplitude of the H- ground state is " << std::setprecision(3) << ratio
        << " of its peak (> 1e-8); the box may be too short";
    minus.warnings.push_back(msg.str());
  }
}

}  // namespace

PartnerSpectra bound_spectra(const ModelSpec& spec, double length, int n, int count, bool want_vectors) {
  const Grid grid = Grid::box(n, length);
  const PartnerHamiltonians hp = build_partner_hamiltonians(build_ladder_matrices(spec, grid));
  PartnerSpectra out{spectrum_of(hp.minus, count, want_vectors), spectrum_of(hp.plus, count, want_vectors)};
  edge_check(out.minus, hp.minus);
  return out;
}

SpectrumResult bound_spectrum(const ModelSpec& spec, double length, int n, int count, bool want_vectors) {
  const Grid grid = Grid::box(n, length);
  const PartnerHamiltonians hp = build_partner_hamiltonians(build_ladder_matrices(spec, grid));
  if (spec.sector == Sector::Plus) return spectrum_of(hp.plus, count, want_vectors);
  SpectrumResult r = spectrum_of(hp.minus, count, want_vectors);
  edge_check(r, hp.minus);
  return r;
}

double l2_norm(const SpinorField& psi) { return psi.norm(); }

double tail_decay_fit(const SpinorField& psi, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("window must lie in (0, 1]");
  const int n = psi.grid.n();
  const int m = std::max(2, static_cast<int>(std::ceil(window * n)));
  const int first = n - std::min(m, n);

  std::vector<double> z;
  std::vector<double> y;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int j = first; j < n; ++j) {
    const double a = std::sqrt(std::norm(psi.up(j)) + std::norm(psi.down(j)));
    if (!(a > 0.0)) throw std::domain_error("|psi| vanishes inside the fit window");
    lo = std::min(lo, a);
    hi = std::max(hi, a);
    z.push_back(psi.grid.z(j));
    y.push_back(std::log(a));
  }
  if (hi - lo <= 1e-15 * hi) return 0.0;

  const double count = static_cast<double>(z.size());
  double zm = 0.0;
  double ym = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    zm += z[i];
    ym += y[i];
  }
  zm /= count;
  ym /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    sxy += (z[i] - zm) * (y[i] - ym);
    sxx += (z[i] - zm) * (z[i] - zm);
  }
  return sxy / sxx;
}

double edge_amplitude_ratio(const SpinorField& psi) {
  const int n = psi.grid.n();
  auto amp = [&](int j) { return std::sqrt(std::norm(psi.up(j)) + std::norm(psi.down(j))); };
  double peak = 0.0;
  for (int j = 0; j < n; ++j) peak = std::max(peak, amp(j));
  if (peak == 0.0) return 0.0;
  return std::max(amp(0), amp(n - 1)) / peak;
}

double zero_mode_threshold(const Grid& grid, double k) {
  const double h = grid.spacing();
  return std::max(1e-6, 10.0 * h * h * k * k);
}

int count_below(const std::vector<double>& values, double threshold) {
  return static_cast<int>(std::count_if(values.begin(), values.end(), [&](double v) { return v < threshold; }));
}

}  // namespace susyspin
