#include "susyspin/analytic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

namespace susyspin {

std::string to_string(SusyPhase p) { return p == SusyPhase::Unbroken ? "Unbroken" : "Broken"; }

namespace {

void require_pitch(const FieldConfig& field) {
  if (field.k == 0.0) throw std::invalid_argument("k must be nonzero");
}

// B0^2 / k^4 - 1, the decay-rate radicand; the zero-mode radicand is its negative.
double breaking_radicand(const FieldConfig& field) {
  const double k2 = field.k * field.k;
  return field.b0 * field.b0 / (k2 * k2) - 1.0;
}

// log cosh z without overflow.
double log_cosh(double z) {
  const double a = std::abs(z);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

Spinor fix_phase(Spinor v) {
  v.normalize();
  const int big = std::abs(v(1)) > std::abs(v(0)) ? 1 : 0;
  const cplx ph = std::abs(v(big)) > 0.0 ? std::conj(v(big)) / std::abs(v(big)) : cplx{1.0, 0.0};
  return v * ph;
}

}  // namespace

BandEnergies dispersion(double q, const FieldConfig& field) {
  require_pitch(field);
  const double k = field.k;
  const double b0 = field.b0;
  const double base = q * q + 0.25 * k * k + b0 * b0 / (4.0 * k * k);
  const double split = std::sqrt(q * q * k * k + 0.25 * b0 * b0);
  return {base - split, base + split};
}

BandSpectrum band_spectrum(const FieldConfig& field, double q_min, double q_max, int steps) {
  require_pitch(field);
  if (steps < 1) throw std::invalid_argument("q-steps must be at least 1");
  if (q_max < q_min) throw std::invalid_argument("q-max must not be below q-min");
  BandSpectrum out;
  out.field = field;
  const double dq = steps > 1 ? (q_max - q_min) / (steps - 1) : 0.0;
  for (int j = 0; j < steps; ++j) {
    const double q = j + 1 == steps && steps > 1 ? q_max : q_min + j * dq;
    const BandEnergies e = dispersion(q, field);
    out.q_values.push_back(q);
    out.e1.push_back(e.e1);
    out.e2.push_back(e.e2);
  }
  return out;
}

std::optional<double> zero_mode_wavevector(const FieldConfig& field) {
  require_pitch(field);
  const double r = -breaking_radicand(field);
  if (r < 0.0) return std::nullopt;
  return 0.5 * std::abs(field.k) * std::sqrt(r);
}

SusyPhase susy_phase_free(const FieldConfig& field) {
  require_pitch(field);
  const double k2 = field.k * field.k;
  return field.b0 * field.b0 <= k2 * k2 ? SusyPhase::Unbroken : SusyPhase::Broken;
}

double band_minimum(const FieldConfig& field) {
  if (susy_phase_free(field) == SusyPhase::Unbroken) return 0.0;
  const double k = std::abs(field.k);
  const double d = 0.5 * k - std::abs(field.b0) / (2.0 * k);
  return d * d;
}

SpinMatrix zero_mode_matrix(double q, const FieldConfig& field, Sector sector) {
  require_pitch(field);
  const auto s = make_spin_operators();
  const cplx i{0.0, 1.0};
  const double sg = sector_sign(sector);
  return -sg * i * q * SpinMatrix::Identity() + sg * i * field.k * s.z + (field.b0 / field.k) * s.y;
}

Spinor zero_mode_spinor(double q, const FieldConfig& field, Sector sector) {
  const SpinMatrix m = zero_mode_matrix(q, field, sector);
  Eigen::JacobiSVD<SpinMatrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(1) > 1e-9 * std::max(1.0, sv(0)))
    throw std::domain_error("zero-mode matrix is nonsingular at q = " + std::to_string(q));
  return fix_phase(svd.matrixV().col(1));
}

DecayRate decay_rate(const FieldConfig& field) {
  require_pitch(field);
  const double r = breaking_radicand(field);
  const double half_k = 0.5 * std::abs(field.k);
  if (r > 0.0) return {cplx{half_k * std::sqrt(r), 0.0}};
  if (r < 0.0) return {cplx{0.0, half_k * std::sqrt(-r)}};
  return {cplx{0.0, 0.0}};
}

SusyPhase susy_phase_asymptotic(const FieldConfig& field, double w0) {
  if (w0 < 0.0) throw std::invalid_argument("asymptotic superpotential value must be non-negative");
  const DecayRate l = decay_rate(field);
  return l.is_real() && l.value.real() > w0 ? SusyPhase::Broken : SusyPhase::Unbroken;
}

std::array<LambdaPair, 2> spin_lambda_eigenpairs(const FieldConfig& field) {
  require_pitch(field);
  const cplx i{0.0, 1.0};
  const double k = field.k;
  const cplx b = field.b0 / (2.0 * k);
  const cplx lam = decay_rate(field).value;

  // Null vector of N - mu with N = [[-ik/2, -i b], [i b, ik/2]], taken from
  // whichever row is nonzero.
  auto eigvec = [&](cplx mu) -> Spinor {
    Spinor from_row0(-i * b, 0.5 * i * k + mu);
    Spinor from_row1(0.5 * i * k - mu, -i * b);
    return fix_phase(from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1);
  };
  return {LambdaPair{lam, eigvec(lam)}, LambdaPair{-lam, eigvec(-lam)}};
}

std::optional<SpinorField> tanh_ground_state(double alpha, const FieldConfig& field,
                                             Sector sector, const Grid& grid) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (grid.boundary() != Boundary::Box) throw std::invalid_argument("tanh ground state needs a Box grid");
  if (sector == Sector::Plus) return std::nullopt;

  const auto pair = spin_lambda_eigenpairs(field)[0];
  if (alpha <= pair.lambda.real()) return std::nullopt;

  const int n = grid.n();
  std::vector<cplx> expo(static_cast<std::size_t>(n));
  double top = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double z = grid.z(j);
    expo[static_cast<std::size_t>(j)] = -alpha * log_cosh(z) - pair.lambda * z;
    top = std::max(top, expo[static_cast<std::size_t>(j)].real());
  }
  SpinorField psi = SpinorField::zeros(grid);
  for (int j = 0; j < n; ++j) {
    const cplx f = std::exp(expo[static_cast<std::size_t>(j)] - top);
    psi.up(j) = pair.chi(0) * f;
    psi.down(j) = pair.chi(1) * f;
  }
  return psi.normalized();
}

ZeroModeFamilies asymptotic_zero_mode_families(const FieldConfig& field, double w_minus,
                                               double w_plus) {
  const double lr = decay_rate(field).value.real();
  ZeroModeFamilies out;
  for (double mu : {lr, -lr}) {
    if (w_plus + mu > 0.0 && w_minus + mu < 0.0) out.minus = 1;
    if (w_plus + mu < 0.0 && w_minus + mu > 0.0) out.plus = 1;
  }
  return out;
}

double breaking_threshold(double k, double w0) {
  if (k == 0.0) throw std::invalid_argument("k must be nonzero");
  const double k2 = k * k;
  return std::sqrt(k2 * k2 + 4.0 * k2 * w0 * w0);
}

}  // namespace susyspin
