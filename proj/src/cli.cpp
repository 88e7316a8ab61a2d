#include "susyspin/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "susyspin/susylab.hpp"

namespace susyspin::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, long long, std::string>;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_number(v));
}

json to_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return round12(*d);
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string to_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

// Everything a subcommand produces, rendered as CSV or JSON.
struct Document {
  std::string command;
  std::string flags;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;  // trailing '#' lines in CSV
  std::vector<std::string> messages;  // free text lines (CSV) / "messages" (JSON)

  std::string render(const std::string& format) const {
    std::ostringstream os;
    if (format == "json") {
      json j;
      j["command"] = command;
      j["version"] = SUSYSPIN_VERSION;
      j["flags"] = flags;
      if (!columns.empty()) {
        json arr = json::array();
        for (const auto& r : rows) {
          json o;
          for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = to_json(r[i]);
          arr.push_back(std::move(o));
        }
        j["rows"] = std::move(arr);
      }
      for (const auto& [k, v] : summary) j[k] = to_json(v);
      if (!messages.empty()) j["messages"] = messages;
      os << j.dump(2) << '\n';
      return os.str();
    }
    os << "# susyspin " << command << " v" << SUSYSPIN_VERSION << " flags: " << flags << '\n';
    for (const auto& m : messages) os << m << '\n';
    if (!columns.empty()) {
      for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
      os << '\n';
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << to_text(r[i]);
        os << '\n';
      }
    }
    for (const auto& [k, v] : summary) os << "# " << k << '=' << to_text(v) << '\n';
    return os.str();
  }
};

struct Output {
  std::string format = "csv";
  std::string path;
};

void add_output_flags(CLI::App* sub, Output& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.path, "Output file (default stdout)");
}

struct ModelFlags {
  double k = 1.0;
  double b0 = 0.0;
  std::string w = "zero";
  double alpha = 0.0;
};

void add_model_flags(CLI::App* sub, ModelFlags& m, bool with_w) {
  sub->add_option("--k", m.k, "Field pitch k")->required();
  sub->add_option("--b0", m.b0, "Field strength B0")->required();
  if (with_w) {
    sub->add_option("--w", m.w, "Superpotential")->check(CLI::IsMember({"zero", "tanh"}));
    sub->add_option("--alpha", m.alpha, "tanh amplitude alpha");
  }
}

ModelSpec model_from(const ModelFlags& m, Sector sector = Sector::Minus) {
  ModelSpec spec{FieldConfig{m.b0, m.k},
                 m.w == "tanh" ? SuperpotentialSpec::tanh(m.alpha) : SuperpotentialSpec::zero(), sector};
  if (auto v = validate_model(spec); !v.ok()) throw UsageError(v.violations.front());
  return spec;
}

int integer_flag(double v, const char* name) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
    throw UsageError(std::string(name) + " must be a positive integer");
  return static_cast<int>(v);
}

std::string join(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

std::string phase_name(SusyPhase p) { return to_string(p); }

// ---------------------------------------------------------------------------
// bands

Document cmd_bands(const ModelFlags& m, double q_min, double q_max, int steps) {
  const ModelSpec spec = model_from(m);
  if (steps < 1) throw UsageError("--q-steps must be at least 1");
  if (q_max < q_min) throw UsageError("--q-max must not be below --q-min");
  const BandSpectrum bs = band_spectrum(spec.field, q_min, q_max, steps);
  Document d;
  d.columns = {"q", "E1", "E2"};
  for (std::size_t i = 0; i < bs.q_values.size(); ++i) d.rows.push_back({bs.q_values[i], bs.e1[i], bs.e2[i]});
  return d;
}

// ---------------------------------------------------------------------------
// classify

std::string lambda_text(const DecayRate& l) {
  if (l.is_imaginary()) return format_number(l.value.imag()) + "i";
  return format_number(l.value.real());
}

Document cmd_classify(const ModelFlags& m, bool numeric, int n, double periods, double length) {
  const ModelSpec spec = model_from(m);
  std::optional<NumericSettings> settings;
  if (numeric) {
    if (n < 8) throw UsageError("--n must be at least 8");
    settings = NumericSettings{n, integer_flag(periods, "--periods"), length};
  }
  const SusyReport r = classify(spec, settings);

  Document d;
  d.columns = {"field", "value"};
  auto add = [&](std::string key, Cell v) { d.rows.push_back({std::move(key), std::move(v)}); };
  add("phase", phase_name(r.phase));
  add("method", to_string(r.method));
  if (spec.w.is_zero()) {
    add("q0", r.q0 ? "±" + format_number(*r.q0) : std::string("none"));
  }
  add("lambda", lambda_text(r.lambda));
  add("threshold_b0", r.threshold_b0);
  add("ground_energy_minus", r.ground_energy_minus);
  add("ground_energy_plus", r.ground_energy_plus);
  add("zero_modes_minus", static_cast<long long>(r.zero_modes_minus));
  add("zero_modes_plus", static_cast<long long>(r.zero_modes_plus));
  if (r.numeric_phase) {
    add("numeric_phase", phase_name(*r.numeric_phase));
    add("zero_threshold", *r.zero_threshold);
    add("numeric_levels_minus", static_cast<long long>(*r.numeric_levels_minus));
    add("numeric_levels_plus", static_cast<long long>(*r.numeric_levels_plus));
    add("witten_index", static_cast<long long>(*r.witten_index));
    add("pairing_max_gap", r.pairing_max_gap);
  }
  add("details", r.details);
  return d;
}

// ---------------------------------------------------------------------------
// ring / bound

struct SpectrumFlags {
  int levels = 1;
  std::string sector = "both";
  std::string dump_path;
};

void dump_states(const std::string& path, const std::vector<const SpectrumResult*>& spectra, int levels) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open dump file " + path);
  f << "sector,level,z,re_up,im_up,re_down,im_down\n";
  for (const SpectrumResult* s : spectra) {
    for (int i = 0; i < levels; ++i) {
      const SpinorField psi = s->state(i);
      for (int j = 0; j < psi.grid.n(); ++j) {
        f << to_string(s->sector) << ',' << i << ',' << format_number(psi.grid.z(j)) << ','
          << format_number(psi.up(j).real()) << ',' << format_number(psi.up(j).imag()) << ','
          << format_number(psi.down(j).real()) << ',' << format_number(psi.down(j).imag()) << '\n';
      }
    }
  }
}

Document spectrum_document(const PartnerSpectra& ps, const SpectrumFlags& sf, std::ostream& err) {
  const bool want_minus = sf.sector != "plus";
  const bool want_plus = sf.sector != "minus";
  Document d;
  d.columns = {"index"};
  if (want_minus) d.columns.emplace_back("E_minus");
  if (want_plus) d.columns.emplace_back("E_plus");
  for (int i = 0; i < sf.levels; ++i) {
    std::vector<Cell> row{static_cast<long long>(i)};
    if (want_minus) row.emplace_back(ps.minus.eigenvalues[static_cast<std::size_t>(i)]);
    if (want_plus) row.emplace_back(ps.plus.eigenvalues[static_cast<std::size_t>(i)]);
    d.rows.push_back(std::move(row));
  }
  for (const auto& w : ps.minus.warnings) err << "warning: " << w << '\n';
  if (!sf.dump_path.empty()) {
    std::vector<const SpectrumResult*> which;
    if (want_minus) which.push_back(&ps.minus);
    if (want_plus) which.push_back(&ps.plus);
    dump_states(sf.dump_path, which, sf.levels);
  }
  return d;
}

Document cmd_ring(const ModelFlags& m, double periods, int n, const SpectrumFlags& sf, std::ostream& err) {
  const ModelSpec spec = model_from(m);
  const int p = integer_flag(periods, "--periods");
  if (sf.levels < 1) throw UsageError("--levels must be at least 1");
  if (n < 8) throw UsageError("--n must be at least 8");
  if (sf.levels > 2 * n) throw UsageError("--levels exceeds the matrix size");
  const PartnerSpectra ps = ring_spectra(spec.field, p, n, sf.levels, !sf.dump_path.empty());
  return spectrum_document(ps, sf, err);
}

Document cmd_bound(const ModelFlags& m, double length, int n, const SpectrumFlags& sf, std::ostream& err) {
  if (m.w != "tanh") throw UsageError("bound needs a non-constant superpotential (--w tanh)");
  const ModelSpec spec = model_from(m);
  if (sf.levels < 1) throw UsageError("--levels must be at least 1");
  if (n < 8) throw UsageError("--n must be at least 8");
  if (sf.levels > 2 * n) throw UsageError("--levels exceeds the matrix size");
  if (!(length > 0.0)) throw UsageError("--length must be positive");
  const PartnerSpectra ps = bound_spectra(spec, length, n, sf.levels, !sf.dump_path.empty());
  return spectrum_document(ps, sf, err);
}

// ---------------------------------------------------------------------------
// sweep

Document cmd_sweep(const ModelFlags& m, const std::string& param, double from, double to, int steps, int n,
                   double length) {
  if (param != "b0") throw UsageError("only --param b0 is supported");
  if (!(from < to) || steps < 3) throw UsageError("empty sweep range: need --from < --to and --steps >= 3");
  const ModelSpec base = model_from(m);
  const ThresholdScan scan = breaking_threshold_scan(base.field.k, from, to, steps, base.w);

  std::vector<double> e_min(scan.rows.size());
  if (base.w.is_zero()) {
    for (std::size_t i = 0; i < scan.rows.size(); ++i) e_min[i] = scan.rows[i].e_min;
  } else {
    // Independent diagonalizations; assembled by sample index.
    auto lowest = [&](std::size_t i) {
      ModelSpec s = base;
      s.field.b0 = scan.rows[i].b0;
      return bound_spectrum(s, length, n, 1).eigenvalues.front();
    };
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < scan.rows.size(); start += workers) {
      std::vector<std::future<double>> jobs;
      for (std::size_t i = start; i < std::min(scan.rows.size(), start + workers); ++i)
        jobs.push_back(std::async(std::launch::async, lowest, i));
      for (std::size_t i = 0; i < jobs.size(); ++i) e_min[start + i] = jobs[i].get();
    }
  }

  Document d;
  d.columns = {"b0", "phase", "E1_min", "analytic_threshold"};
  for (std::size_t i = 0; i < scan.rows.size(); ++i)
    d.rows.push_back({scan.rows[i].b0, phase_name(scan.rows[i].phase), e_min[i], scan.closed_form});
  d.summary.emplace_back("threshold", scan.closed_form);
  d.summary.emplace_back("threshold_bisection", scan.threshold);
  return d;
}

// ---------------------------------------------------------------------------
// zeromode

Document cmd_zeromode(const ModelFlags& m, const std::string& sector_text) {
  const ModelSpec spec = model_from(m);
  const Sector sector = parse_sector(sector_text);
  Document d;
  const auto q0 = zero_mode_wavevector(spec.field);
  if (!q0) {
    d.messages.emplace_back("none: SUSY broken");
    return d;
  }
  d.columns = {"q0", "chi1_re", "chi1_im", "chi2_re", "chi2_im", "ratio_re", "ratio_im", "residual"};
  std::vector<double> roots{*q0};
  if (*q0 > 0.0) roots.push_back(-*q0);
  for (double q : roots) {
    const Spinor chi = zero_mode_spinor(q, spec.field, sector);
    const double residual = (zero_mode_matrix(q, spec.field, sector) * chi).norm();
    const cplx ratio = std::abs(chi(0)) > 0.0 ? chi(1) / chi(0) : cplx{std::numeric_limits<double>::infinity(), 0.0};
    d.rows.push_back({q, chi(0).real(), chi(0).imag(), chi(1).real(), chi(1).imag(), ratio.real(), ratio.imag(), residual});
  }
  return d;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin-1/2 supersymmetric quantum mechanics in a rotating magnetic field", "susyspin"};
  app.require_subcommand(1);

  Output o;
  ModelFlags m;
  double q_min = 0.0, q_max = 0.0;
  int q_steps = 0;
  bool numeric = false;
  int n = 1024;
  double periods = 2.0;
  double length = 40.0;
  SpectrumFlags sf;
  std::string param = "b0";
  double from = 0.0, to = 0.0;
  int steps = 0;
  std::string sector = "minus";

  auto* bands = app.add_subcommand("bands", "Two-band dispersion E1(q), E2(q)");
  add_model_flags(bands, m, false);
  bands->add_option("--q-min", q_min)->required();
  bands->add_option("--q-max", q_max)->required();
  bands->add_option("--q-steps", q_steps)->required();
  add_output_flags(bands, o);

  auto* cls = app.add_subcommand("classify", "SUSY phase, thresholds and ground energies");
  add_model_flags(cls, m, true);
  cls->add_flag("--numeric", numeric, "Cross-check with a diagonalization");
  cls->add_option("--n", n);
  cls->add_option("--periods", periods);
  cls->add_option("--length", length);
  add_output_flags(cls, o);

  auto* ring = app.add_subcommand("ring", "Factorized ring spectra for W = 0");
  add_model_flags(ring, m, false);
  ring->add_option("--periods", periods)->required();
  ring->add_option("--n", n)->required();
  ring->add_option("--levels", sf.levels)->required();
  ring->add_option("--sector", sf.sector)->check(CLI::IsMember({"plus", "minus", "both"}));
  ring->add_option("--dump-states", sf.dump_path, "CSV file for the eigenvectors");
  add_output_flags(ring, o);

  auto* bound = app.add_subcommand("bound", "Factorized box spectra for a non-constant W");
  add_model_flags(bound, m, true);
  bound->add_option("--length", length)->required();
  bound->add_option("--n", n)->required();
  bound->add_option("--levels", sf.levels)->required();
  bound->add_option("--sector", sf.sector)->check(CLI::IsMember({"plus", "minus", "both"}));
  bound->add_option("--dump-states", sf.dump_path, "CSV file for the eigenvectors");
  add_output_flags(bound, o);

  auto* sweep = app.add_subcommand("sweep", "Phase and lowest energy versus B0");
  sweep->add_option("--param", param);
  sweep->add_option("--from", from)->required();
  sweep->add_option("--to", to)->required();
  sweep->add_option("--steps", steps)->required();
  sweep->add_option("--k", m.k)->required();
  sweep->add_option("--w", m.w)->check(CLI::IsMember({"zero", "tanh"}));
  sweep->add_option("--alpha", m.alpha);
  sweep->add_option("--n", n);
  sweep->add_option("--length", length);
  add_output_flags(sweep, o);

  auto* zm = app.add_subcommand("zeromode", "Zero-mode wavevector and spinor");
  add_model_flags(zm, m, false);
  zm->add_option("--sector", sector)->required()->check(CLI::IsMember({"plus", "minus"}));
  add_output_flags(zm, o);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    Document d;
    std::string cmd;
    if (bands->parsed()) {
      cmd = "bands";
      d = cmd_bands(m, q_min, q_max, q_steps);
    } else if (cls->parsed()) {
      cmd = "classify";
      d = cmd_classify(m, numeric, n, periods, length);
    } else if (ring->parsed()) {
      cmd = "ring";
      d = cmd_ring(m, periods, n, sf, err);
    } else if (bound->parsed()) {
      cmd = "bound";
      d = cmd_bound(m, length, n, sf, err);
    } else if (sweep->parsed()) {
      cmd = "sweep";
      if (sweep->count("--n") == 0) n = 800;
      d = cmd_sweep(m, param, from, to, steps, n, length);
    } else {
      cmd = "zeromode";
      d = cmd_zeromode(m, sector);
    }
    d.command = cmd;
    d.flags = join(args);
    const std::string text = d.render(o.format);
    if (o.path.empty()) {
      out << text;
    } else {
      std::ofstream f(o.path, std::ios::binary);
      if (!f) throw UsageError("cannot open output file " + o.path);
      f << text;
    }
    return kSuccess;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  }
}

}  // namespace susyspin::cli
