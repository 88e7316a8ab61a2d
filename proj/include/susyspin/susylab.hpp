#pragma once

/// SUSY diagnostics combining the closed forms with numerical spectra:
/// phase classification, partner pairing, zero-mode census and threshold scans.

#include <optional>
#include <string>
#include <vector>

#include "susyspin/analytic.hpp"
#include "susyspin/solver.hpp"

namespace susyspin {

enum class Method { Analytic, Numeric, Both };
std::string to_string(Method m);

/// Grid settings for the numerical cross-check: a ring of `periods` field
/// periods for W = 0, a box of `length` otherwise; `n` points either way.
struct NumericSettings {
  int n = 1024;
  int periods = 2;
  double length = 40.0;
};

struct SusyReport {
  SusyPhase phase = SusyPhase::Broken;  ///< always the analytic verdict
  Method method = Method::Analytic;
  double ground_energy_minus = 0.0;  ///< numeric when computed, else closed form (NaN if none)
  double ground_energy_plus = 0.0;
  int zero_modes_minus = 0;  ///< zero-mode families (each +-q0 or +-lambda pair once)
  int zero_modes_plus = 0;
  double pairing_max_gap = 0.0;
  std::string details;

  std::optional<double> q0;  ///< |q0| when W = 0 and unbroken
  DecayRate lambda{};
  double threshold_b0 = 0.0;
  std::optional<SusyPhase> numeric_phase;
  std::optional<int> numeric_levels_minus;  ///< raw levels below the zero-mode threshold
  std::optional<int> numeric_levels_plus;
  std::optional<int> witten_index;
  std::optional<double> zero_threshold;
};

struct PairingReport {
  double max_gap = 0.0;
  int unpaired_minus = 0;
  int unpaired_plus = 0;
};

/// Drops eigenvalues below the threshold from both spectra and matches the
/// rest in sorted order.
PairingReport pairing_report(const SpectrumResult& minus, const SpectrumResult& plus,
                             double zero_threshold);

struct ZeroModeCensus {
  int total = 0;  ///< levels below threshold
  int bulk = 0;  ///< dimension of the bulk-localized part of that subspace
  int edge = 0;
};

/// Ring spectra: every level below threshold is bulk. Box spectra need
/// eigenvectors for all levels below threshold; the near-zero subspace is
/// split by its weight in the outer `edge_fraction` of the grid on each side
/// (eigenvalues of V^dagger P_edge V above 1/2 count as edge modes).
ZeroModeCensus zero_mode_census(const SpectrumResult& s, double zero_threshold,
                                double edge_fraction = 0.1);

/// Bulk zero-mode count of H- minus that of H+.
int witten_index_estimate(const SpectrumResult& minus, const SpectrumResult& plus,
                          double zero_threshold);

SusyReport classify(const ModelSpec& spec, const std::optional<NumericSettings>& numeric = std::nullopt);

struct ThresholdScanRow {
  double b0 = 0.0;
  SusyPhase phase = SusyPhase::Unbroken;
  double e_min = 0.0;  ///< closed-form lowest band energy for W = 0, NaN otherwise
};

struct ThresholdScan {
  double threshold = 0.0;  ///< bisection of the analytic phase condition
  double closed_form = 0.0;  ///< sqrt(k^4 + 4 k^2 W0^2)
  std::vector<ThresholdScanRow> rows;
};

/// Analytic phase over `steps` evenly spaced B0 in [lo, hi], plus the
/// breaking threshold located by bisection (bracket grown as needed).
ThresholdScan breaking_threshold_scan(double k, double lo, double hi, int steps,
                                      const SuperpotentialSpec& w);

/// Analytic phase for any model: free rule for W = 0, asymptotic rule otherwise.
SusyPhase analytic_phase(const ModelSpec& spec);

}  // namespace susyspin
