#include "susyspin/susylab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace susyspin {

std::string to_string(Method m) {
  switch (m) {
    case Method::Analytic: return "Analytic";
    case Method::Numeric: return "Numeric";
    case Method::Both: return "Both";
  }
  return "Analytic";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_model_grid(const Grid& minus, const Grid& plus) {
  if (minus == plus) return true;
  return minus.boundary() == Boundary::Box && plus == Grid::box_links(minus);
}

std::vector<double> above(const std::vector<double>& v, double threshold) {
  std::vector<double> out;
  std::copy_if(v.begin(), v.end(), std::back_inserter(out), [&](double x) { return x >= threshold; });
  std::sort(out.begin(), out.end());
  return out;
}

bool symmetric_asymptotes(const SuperpotentialSpec& w) {
  const auto [wm, wp] = w.asymptotes();
  return wm == -wp && wp >= 0.0;
}

// Lowest `needed` eigenpairs, values from the full spectrum already at hand.
SpectrumResult with_vectors(const HamiltonianMatrix& h, const SpectrumResult& values, int needed) {
  SpectrumResult r = values;
  if (needed > 0) r.eigenvectors = eigen_hermitian(h.h, needed, true).vectors;
  return r;
}

}  // namespace

PairingReport pairing_report(const SpectrumResult& minus, const SpectrumResult& plus, double zero_threshold) {
  if (!same_model_grid(minus.grid, plus.grid))
    throw std::invalid_argument("pairing needs spectra from the same grid");
  const auto a = above(minus.eigenvalues, zero_threshold);
  const auto b = above(plus.eigenvalues, zero_threshold);
  PairingReport r;
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i) r.max_gap = std::max(r.max_gap, std::abs(a[i] - b[i]));
  r.unpaired_minus = static_cast<int>(a.size() - common);
  r.unpaired_plus = static_cast<int>(b.size() - common);
  return r;
}

ZeroModeCensus zero_mode_census(const SpectrumResult& s, double zero_threshold, double edge_fraction) {
  ZeroModeCensus c;
  c.total = count_below(s.eigenvalues, zero_threshold);
  if (s.grid.boundary() == Boundary::Ring || c.total == 0) {
    c.bulk = c.total;
    return c;
  }
  if (!s.eigenvectors || s.eigenvectors->cols() < c.total)
    throw std::invalid_argument("box zero-mode census needs eigenvectors for every near-zero level");

  const int n = s.grid.n();
  const int width = std::max(1, static_cast<int>(std::ceil(edge_fraction * n)));
  const Eigen::MatrixXcd v = s.eigenvectors->leftCols(c.total);
  Eigen::MatrixXcd pv = Eigen::MatrixXcd::Zero(v.rows(), v.cols());
  for (int j = 0; j < n; ++j) {
    if (j < width || j >= n - width) pv.middleRows(2 * j, 2) = v.middleRows(2 * j, 2);
  }
  Eigen::MatrixXcd weight = v.adjoint() * pv;
  weight = 0.5 * (weight + weight.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(weight);
  for (int i = 0; i < c.total; ++i) (es.eigenvalues()(i) > 0.5 ? c.edge : c.bulk) += 1;
  return c;
}

int witten_index_estimate(const SpectrumResult& minus, const SpectrumResult& plus, double zero_threshold) {
  if (!same_model_grid(minus.grid, plus.grid))
    throw std::invalid_argument("witten index needs spectra from the same grid");
  return zero_mode_census(minus, zero_threshold).bulk - zero_mode_census(plus, zero_threshold).bulk;
}

SusyPhase analytic_phase(const ModelSpec& spec) {
  if (spec.w.is_zero()) return susy_phase_free(spec.field);
  if (symmetric_asymptotes(spec.w)) return susy_phase_asymptotic(spec.field, spec.w.asymptotes().second);
  const auto [wm, wp] = spec.w.asymptotes();
  const auto fam = asymptotic_zero_mode_families(spec.field, wm, wp);
  return fam.minus + fam.plus > 0 ? SusyPhase::Unbroken : SusyPhase::Broken;
}

SusyReport classify(const ModelSpec& spec, const std::optional<NumericSettings>& numeric) {
  if (auto v = validate_model(spec); !v.ok()) throw std::invalid_argument(v.violations.front());

  SusyReport r;
  r.phase = analytic_phase(spec);
  r.method = numeric ? Method::Both : Method::Analytic;
  r.lambda = decay_rate(spec.field);
  std::ostringstream notes;

  if (spec.w.is_zero()) {
    r.q0 = zero_mode_wavevector(spec.field);
    r.threshold_b0 = breaking_threshold(spec.field.k, 0.0);
    r.ground_energy_minus = r.ground_energy_plus = band_minimum(spec.field);
    r.zero_modes_minus = r.zero_modes_plus = r.phase == SusyPhase::Unbroken ? 1 : 0;
  } else {
    const auto [wm, wp] = spec.w.asymptotes();
    r.threshold_b0 = breaking_threshold(spec.field.k, std::abs(wp));
    if (symmetric_asymptotes(spec.w)) {
      const bool unbroken = r.phase == SusyPhase::Unbroken;
      r.zero_modes_minus = unbroken && wp > 0.0 ? 1 : 0;
      r.zero_modes_plus = 0;
      if (wp == 0.0) r.zero_modes_minus = asymptotic_zero_mode_families(spec.field, wm, wp).minus;
    } else {
      const auto fam = asymptotic_zero_mode_families(spec.field, wm, wp);
      r.zero_modes_minus = fam.minus;
      r.zero_modes_plus = fam.plus;
    }
    r.ground_energy_minus = r.zero_modes_minus > 0 ? 0.0 : kNaN;
    r.ground_energy_plus = r.zero_modes_plus > 0 ? 0.0 : kNaN;
  }

  if (!numeric) {
    r.details = "analytic classification only";
    return r;
  }

  const bool ring = spec.w.is_zero();
  const Grid grid = ring ? ring_grid(spec.field, numeric->periods, numeric->n) : Grid::box(numeric->n, numeric->length);
  const PartnerHamiltonians hp = build_partner_hamiltonians(build_ladder_matrices(spec, grid));
  SpectrumResult minus = spectrum_of(hp.minus, 0, false);
  SpectrumResult plus = spectrum_of(hp.plus, 0, false);
  const double thr = zero_mode_threshold(grid, spec.field.k);
  r.zero_threshold = thr;

  const int below_minus = count_below(minus.eigenvalues, thr);
  const int below_plus = count_below(plus.eigenvalues, thr);
  if (!ring) {
    minus = with_vectors(hp.minus, minus, below_minus);
    plus = with_vectors(hp.plus, plus, below_plus);
  }

  r.ground_energy_minus = minus.eigenvalues.front();
  r.ground_energy_plus = plus.eigenvalues.front();
  r.numeric_levels_minus = below_minus;
  r.numeric_levels_plus = below_plus;
  r.pairing_max_gap = pairing_report(minus, plus, thr).max_gap;
  r.witten_index = witten_index_estimate(minus, plus, thr);

  const auto cm = zero_mode_census(minus, thr);
  const auto cp = zero_mode_census(plus, thr);
  r.numeric_phase = cm.bulk + cp.bulk > 0 ? SusyPhase::Unbroken : SusyPhase::Broken;

  notes << (ring ? "ring" : "box") << " n=" << grid.n() << " L=" << grid.length() << " zero threshold=" << thr
        << "; levels below threshold: minus=" << below_minus << " plus=" << below_plus;
  if (!ring) notes << " (bulk minus=" << cm.bulk << ", bulk plus=" << cp.bulk << ")";
  if (ring && r.q0) {
    const double dq = 2.0 * std::numbers::pi / grid.length();
    const double j = *r.q0 / dq;
    if (std::abs(j - std::round(j)) > 1e-9) {
      const double q_lo = std::floor(j) * dq;
      const double q_hi = std::ceil(j) * dq;
      const double e_near = std::min(dispersion(q_lo, spec.field).e1, dispersion(q_hi, spec.field).e1);
      notes << "; q0=" << *r.q0 << " is not on the ring lattice 2*pi*j/L, lowest allowed E1=" << e_near;
    } else {
      notes << "; q0 lies on the ring lattice";
    }
  }
  if (*r.numeric_phase != r.phase)
    notes << "; MISMATCH: numeric phase " << to_string(*r.numeric_phase) << " vs analytic " << to_string(r.phase);
  for (const auto& w : minus.warnings) notes << "; " << w;
  r.details = notes.str();
  return r;
}

ThresholdScan breaking_threshold_scan(double k, double lo, double hi, int steps, const SuperpotentialSpec& w) {
  if (!(lo < hi)) throw std::invalid_argument("scan range must satisfy lo < hi");
  if (steps < 3) throw std::invalid_argument("scan needs at least 3 steps");
  ModelSpec spec{FieldConfig{0.0, k}, w, Sector::Minus};
  if (auto v = validate_model(spec); !v.ok()) throw std::invalid_argument(v.violations.front());

  ThresholdScan out;
  out.closed_form = breaking_threshold(k, std::abs(w.asymptotes().second));
  for (int i = 0; i < steps; ++i) {
    spec.field.b0 = i + 1 == steps ? hi : lo + (hi - lo) * i / (steps - 1);
    const SusyPhase ph = analytic_phase(spec);
    out.rows.push_back({spec.field.b0, ph, w.is_zero() ? band_minimum(spec.field) : kNaN});
  }

  auto broken = [&](double b0) {
    spec.field.b0 = b0;
    return analytic_phase(spec) == SusyPhase::Broken;
  };
  double a = 0.0;
  double b = std::max({std::abs(lo), std::abs(hi), 1.0});
  for (int grow = 0; grow < 200 && !broken(b); ++grow) b *= 2.0;
  if (!broken(b)) throw NumericError("no breaking threshold found");
  if (broken(a)) {
    out.threshold = 0.0;
    return out;
  }
  while (b - a > 1e-13 * std::max(1.0, b)) {
    const double mid = 0.5 * (a + b);
    (broken(mid) ? b : a) = mid;
  }
  out.threshold = 0.5 * (a + b);
  return out;
}

}  // namespace susyspin
