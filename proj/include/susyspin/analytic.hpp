#pragma once

/// Closed-form results: two-band dispersion, zero modes, decay rates and
/// the SUSY phase conditions for the free and asymptotically constant W cases.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "susyspin/qmcore.hpp"

namespace susyspin {

enum class SusyPhase { Unbroken, Broken };
std::string to_string(SusyPhase p);

struct BandEnergies {
  double e1 = 0.0;
  double e2 = 0.0;
};

/// E_{1,2}(q) = q^2 + k^2/4 -+ sqrt(q^2 k^2 + B0^2/4) + B0^2/(4k^2), sorted.
BandEnergies dispersion(double q, const FieldConfig& field);

struct BandSpectrum {
  std::vector<double> q_values;
  std::vector<double> e1;
  std::vector<double> e2;
  FieldConfig field;
};

/// Samples the dispersion on `steps` evenly spaced wavevectors in
/// [q_min, q_max]; steps == 1 gives the single point q_min.
BandSpectrum band_spectrum(const FieldConfig& field, double q_min, double q_max, int steps);

/// |q0| = (|k|/2) sqrt(1 - B0^2/k^4); zero modes sit at +-|q0|. Empty when
/// the radicand is negative.
std::optional<double> zero_mode_wavevector(const FieldConfig& field);

/// Unbroken iff B0^2 <= k^4 (the threshold itself counts as unbroken).
SusyPhase susy_phase_free(const FieldConfig& field);

/// Global minimum of E_1 over q: 0 when unbroken, (|k|/2 - |B0|/(2|k|))^2 otherwise.
double band_minimum(const FieldConfig& field);

/// -+iq +- ik S_z + (B0/k) S_y: the plane-wave zero-mode operator.
SpinMatrix zero_mode_matrix(double q, const FieldConfig& field, Sector sector);

/// Unit null vector of zero_mode_matrix. The phase is fixed so that the
/// larger component is real and positive. Throws std::domain_error when q
/// is not a zero-mode wavevector.
Spinor zero_mode_spinor(double q, const FieldConfig& field, Sector sector);

/// lambda = (|k|/2) sqrt(B0^2/k^4 - 1): non-negative real above threshold,
/// positive imaginary below, 0 at threshold.
DecayRate decay_rate(const FieldConfig& field);

/// W(+-inf) = +-w0 case: Broken iff lambda is real and exceeds w0.
SusyPhase susy_phase_asymptotic(const FieldConfig& field, double w0);

struct LambdaPair {
  cplx lambda;
  Spinor chi;
};

/// Eigenpairs of -ik S_z + (B0/k) S_y, representative (+lambda) first. At the
/// threshold the operator is a Jordan block and both entries coincide.
std::array<LambdaPair, 2> spin_lambda_eigenpairs(const FieldConfig& field);

/// Zero-energy state of the rotated-frame H- for W = alpha tanh z,
/// chi (cosh z)^{-alpha} e^{-lambda z} with the +Re(lambda) branch,
/// sampled on a Box grid and L2-normalized. Empty for the Plus sector and
/// when alpha <= Re(lambda). Apply gauge_transform(Inverse) to get the
/// original-frame state.
std::optional<SpinorField> tanh_ground_state(double alpha, const FieldConfig& field,
                                             Sector sector, const Grid& grid);

/// Count of zero-mode families (each +-q0 or +-lambda pair counted once)
/// for W with asymptotes (w_minus, w_plus), per sector. A family exists for
/// H- iff some branch mu in {+Re lambda, -Re lambda} has w_plus + mu > 0
/// and w_minus + mu < 0; for H+ the inequalities are reversed.
struct ZeroModeFamilies {
  int minus = 0;
  int plus = 0;
};
ZeroModeFamilies asymptotic_zero_mode_families(const FieldConfig& field, double w_minus,
                                               double w_plus);

/// B0 at which SUSY breaks: |k|^2 for W = 0, sqrt(k^4 + 4 k^2 w0^2) otherwise.
double breaking_threshold(double k, double w0);

}  // namespace susyspin
