#pragma once

/// Shared domain types: spin-1/2 algebra, field and superpotential
/// descriptions, grids and spinor fields.
///
/// Units: hbar = 1, 2m = 1, so the kinetic term is -d^2/dz^2. The
/// gyromagnetic factor is absorbed into B0, which carries energy units.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace susyspin {

using cplx = std::complex<double>;
using SpinMatrix = Eigen::Matrix2cd;
using Spinor = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;

/// Raised when an iterative or LAPACK-backed computation fails to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpinOperators {
  SpinMatrix x;
  SpinMatrix y;
  SpinMatrix z;
};

/// (S_x, S_y, S_z) = (sigma_x, sigma_y, sigma_z) / 2.
SpinOperators make_spin_operators();

/// v . S for a real 3-vector.
SpinMatrix spin_dot(const Vec3& v);

/// Rotating-field parameters: strength b0 (any sign) and pitch k (nonzero).
struct FieldConfig {
  double b0 = 0.0;
  double k = 1.0;
};

enum class Sector { Plus, Minus };

/// +1 for Plus, -1 for Minus: the upper/lower sign in the paired formulas.
constexpr double sector_sign(Sector s) { return s == Sector::Plus ? 1.0 : -1.0; }
std::string to_string(Sector s);
Sector parse_sector(const std::string& text);

/// Scalar superpotential W(z).
///
/// Tabulated values are interpolated linearly and clamped to the declared
/// asymptotes outside the sampled range; their derivative is the
/// central difference on the sample grid, interpolated the same way.
class SuperpotentialSpec {
 public:
  struct Zero {};
  struct Tanh {
    double alpha = 1.0;
  };
  struct Tabulated {
    std::vector<double> z;
    std::vector<double> w;
    double w_minus_inf = 0.0;
    double w_plus_inf = 0.0;
  };
  using Variant = std::variant<Zero, Tanh, Tabulated>;

  SuperpotentialSpec() = default;
  static SuperpotentialSpec zero() { return SuperpotentialSpec(Zero{}); }
  static SuperpotentialSpec tanh(double alpha) { return SuperpotentialSpec(Tanh{alpha}); }
  static SuperpotentialSpec tabulated(std::vector<double> z, std::vector<double> w,
                                      double w_minus_inf, double w_plus_inf);

  const Variant& variant() const { return variant_; }
  bool is_zero() const { return std::holds_alternative<Zero>(variant_); }

  double value(double z) const;
  double derivative(double z) const;
  /// Derivative used by grid discretizations: central difference with step h
  /// for closed-form variants, sample-grid central difference for tables.
  double grid_derivative(double z, double h) const;
  /// (W(-inf), W(+inf)).
  std::pair<double, double> asymptotes() const;

  /// Empty when the variant invariants hold.
  std::vector<std::string> violations() const;

 private:
  explicit SuperpotentialSpec(Variant v) : variant_(std::move(v)) {}
  double table_derivative_at_sample(std::size_t i) const;

  Variant variant_ = Zero{};
};

struct ModelSpec {
  FieldConfig field;
  SuperpotentialSpec w;
  Sector sector = Sector::Minus;
};

struct ValidationResult {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationResult validate_model(const ModelSpec& spec);

enum class Boundary { Ring, Box };

/// Uniform 1-D grid. Ring points sit at z_j = j h; Box points at
/// z_j = -L/2 + (j + 1/2) h with zero Dirichlet ghosts one step outside.
/// The spacing is always derived as length / n.
class Grid {
 public:
  static Grid ring(int n, double length);
  static Grid box(int n, double length);
  /// The n + 1 link points of a box (midpoints between sites and ghosts),
  /// at -L/2 + j h. This is the lattice the Box H+ acts on.
  static Grid box_links(const Grid& sites);

  int n() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }
  Boundary boundary() const { return boundary_; }
  double z(int j) const { return origin_ + j * spacing(); }
  std::vector<double> points() const;

  bool operator==(const Grid&) const = default;

 private:
  Grid(int n, double length, Boundary b, double origin);
  int n_ = 0;
  double length_ = 0.0;
  Boundary boundary_ = Boundary::Ring;
  double origin_ = 0.0;
};

/// Two complex components per grid point.
struct SpinorField {
  Grid grid;
  Eigen::VectorXcd up;
  Eigen::VectorXcd down;

  SpinorField(Grid g, Eigen::VectorXcd u, Eigen::VectorXcd d);
  static SpinorField zeros(const Grid& g);
  static SpinorField constant(const Grid& g, const Spinor& chi);

  /// Site-major layout [up_0, down_0, up_1, down_1, ...] used by the matrices.
  Eigen::VectorXcd interleaved() const;
  static SpinorField from_interleaved(const Grid& g, const Eigen::VectorXcd& v);

  double norm() const;
  /// Unit L2 norm; throws std::domain_error on the zero field.
  SpinorField normalized() const;
};

/// Complex decay rate of the spin part of a zero mode; always purely real
/// or purely imaginary.
struct DecayRate {
  cplx value;
  bool is_real() const { return value.imag() == 0.0; }
  bool is_imaginary() const { return value.real() == 0.0 && value.imag() != 0.0; }
};

}  // namespace susyspin
