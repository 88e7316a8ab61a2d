#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "susyspin/operators.hpp"
#include "susyspin/solver.hpp"

using namespace susyspin;

namespace {

constexpr double kPi = std::numbers::pi;

ModelSpec free_model(double b0, double k = 1.0, Sector s = Sector::Minus) {
  return {FieldConfig{b0, k}, SuperpotentialSpec::zero(), s};
}

Eigen::MatrixXcd dense(const SparseMatrix& m) { return Eigen::MatrixXcd(m); }

std::vector<double> sorted_values(const SparseMatrix& h) {
  const auto d = eigen_hermitian(dense(h), false);
  return {d.values.data(), d.values.data() + d.values.size()};
}

// Spectrum of the ring H- = A+ A- predicted plane wave by plane wave in the
// rotated frame, where A- becomes (e^{iqh} e^{-ikh S_z} - 1)/h + (B0/k) S_y.
std::vector<double> bloch_spectrum(const FieldConfig& f, const Grid& g) {
  const auto s = make_spin_operators();
  const double h = g.spacing();
  const cplx i{0.0, 1.0};
  std::vector<double> out;
  for (int j = 0; j < g.n(); ++j) {
    const double q = 2.0 * kPi * j / g.length();
    SpinMatrix rot = SpinMatrix::Zero();
    rot(0, 0) = std::exp(i * (q - 0.5 * f.k) * h);
    rot(1, 1) = std::exp(i * (q + 0.5 * f.k) * h);
    const SpinMatrix a = (rot - SpinMatrix::Identity()) / h + (f.b0 / f.k) * s.y;
    Eigen::SelfAdjointEigenSolver<SpinMatrix> es(a.adjoint() * a);
    out.push_back(es.eigenvalues()(0));
    out.push_back(es.eigenvalues()(1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double hermiticity_gap(const SparseMatrix& h) {
  return max_entry_difference(h, SparseMatrix(h.adjoint()));
}

}  // namespace

TEST_CASE("rotating field") {
  const FieldConfig f{2.0, 1.0};
  CHECK((rotating_field(f, Sector::Minus, 0.0) - Vec3(2.0, 0.0, 0.0)).norm() < 1e-15);
  CHECK((rotating_field(f, Sector::Plus, 0.0) - Vec3(-2.0, 0.0, 0.0)).norm() < 1e-15);
  for (double z : {0.0, 0.4, 3.1, -7.0})
    CHECK(rotating_field(FieldConfig{0.0, 1.0}, Sector::Minus, z).norm() == 0.0);
  CHECK(rotating_field(f, Sector::Minus, 1.3).norm() == doctest::Approx(2.0));
}

TEST_CASE("vector superpotential") {
  const FieldConfig f{2.0, 1.0};
  CHECK((vector_superpotential(f, 0.0) - Vec3(0.0, 2.0, 0.0)).norm() < 1e-15);
  CHECK((vector_superpotential(f, kPi / 2) - Vec3(-2.0, 0.0, 0.0)).norm() < 1e-15);
  for (double z : {-2.0, 0.1, 0.9, 5.5})
    CHECK(vector_superpotential(FieldConfig{-1.5, 0.5}, z).norm() == doctest::Approx(3.0));
  CHECK_THROWS_AS(vector_superpotential(FieldConfig{1.0, 0.0}, 0.0), std::invalid_argument);

  // dV/dz against a central difference.
  const double z = 0.37, d = 1e-6;
  const Vec3 fd = (vector_superpotential(f, z + d) - vector_superpotential(f, z - d)) / (2 * d);
  CHECK((vector_superpotential_derivative(f, z) - fd).norm() < 1e-8);
}

TEST_CASE("induced potentials") {
  SUBCASE("free W, rotating field, minus sector") {
    const FieldConfig f{2.0, 1.0};
    for (double z : {0.0, 0.8, -2.2}) {
      const auto p = induced_potentials(SuperpotentialSpec::zero(), f, z, Sector::Minus);
      CHECK(p.scalar == doctest::Approx(1.0));
      CHECK((p.field - Vec3(2.0 * std::cos(z), 2.0 * std::sin(z), 0.0)).norm() < 1e-14);
      CHECK((p.field - rotating_field(f, Sector::Minus, z)).norm() < 1e-14);
      const auto q = induced_potentials(SuperpotentialSpec::zero(), f, z, Sector::Plus);
      CHECK((q.field - rotating_field(f, Sector::Plus, z)).norm() < 1e-14);
    }
  }
  SUBCASE("free particle") {
    const auto p = induced_potentials(SuperpotentialSpec::zero(), FieldConfig{0.0, 1.0}, 1.0, Sector::Plus);
    CHECK(p.scalar == 0.0);
    CHECK(p.field.norm() == 0.0);
  }
  SUBCASE("tanh at the origin") {
    const auto p = induced_potentials(SuperpotentialSpec::tanh(1.0), FieldConfig{0.0, 1.0}, 0.0, Sector::Plus);
    CHECK(p.scalar == doctest::Approx(1.0));
    CHECK(p.field.norm() == 0.0);
    const auto m = induced_potentials(SuperpotentialSpec::tanh(1.0), FieldConfig{0.0, 1.0}, 0.0, Sector::Minus);
    CHECK(m.scalar == doctest::Approx(-1.0));
  }
}

TEST_CASE("ladder coupling block at the origin") {
  const SpinMatrix m = ladder_coupling_block(free_model(2.0), 0.0);
  const cplx i{0.0, 1.0};
  CHECK(std::abs(m(0, 0)) < 1e-15);
  CHECK(std::abs(m(0, 1) + i) < 1e-15);
  CHECK(std::abs(m(1, 0) - i) < 1e-15);
  CHECK(std::abs(m(1, 1)) < 1e-15);
}

TEST_CASE("grid rule") {
  const FieldConfig f{0.5, 1.0};
  CHECK_NOTHROW(check_grid_rule(f, Grid::ring(64, 8.0 * kPi)));
  CHECK_NOTHROW(check_grid_rule(FieldConfig{0.5, -2.0}, Grid::ring(64, 2.0 * kPi)));
  CHECK_THROWS_AS(check_grid_rule(f, Grid::ring(64, 6.0 * kPi)), std::invalid_argument);
  CHECK_THROWS_AS(check_grid_rule(f, Grid::ring(64, 2.0 * kPi)), std::invalid_argument);
  CHECK_NOTHROW(check_grid_rule(FieldConfig{0.0, 1.0}, Grid::ring(64, 3.0)));
  CHECK_NOTHROW(check_grid_rule(f, Grid::box(64, 3.0)));
  CHECK_THROWS_AS(build_ladder_matrices(free_model(0.5), Grid::ring(64, 5.0)), std::invalid_argument);
  CHECK_THROWS_AS(build_ladder_matrices(free_model(0.5, 0.0), Grid::box(64, 5.0)), std::invalid_argument);
}

TEST_CASE("ladder matrices") {
  SUBCASE("adjointness is exact") {
    for (const Grid& g : {Grid::ring(32, 4.0 * kPi), Grid::box(32, 10.0)}) {
      ModelSpec spec{FieldConfig{1.3, 1.0}, SuperpotentialSpec::tanh(0.7), Sector::Minus};
      const auto l = build_ladder_matrices(spec, g);
      CHECK(max_entry_difference(l.a_plus, SparseMatrix(l.a_minus.adjoint())) == 0.0);
    }
  }
  SUBCASE("shapes") {
    const auto ring = build_ladder_matrices(free_model(0.5), Grid::ring(16, 4.0 * kPi));
    CHECK(ring.a_minus.rows() == 32);
    CHECK(ring.a_minus.cols() == 32);
    const auto box = build_ladder_matrices(free_model(0.5), Grid::box(16, 4.0));
    CHECK(box.a_minus.rows() == 34);
    CHECK(box.a_minus.cols() == 32);
    CHECK(box.a_plus.rows() == 32);
  }
  SUBCASE("free ring is the cyclic forward difference") {
    const Grid g = Grid::ring(8, 2.0);
    const auto l = build_ladder_matrices(free_model(0.0), g);
    const double inv_h = 1.0 / g.spacing();
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(16, 16);
    for (int j = 0; j < 8; ++j) {
      for (int c = 0; c < 2; ++c) {
        expected(2 * j + c, 2 * j + c) = -inv_h;
        expected(2 * j + c, 2 * ((j + 1) % 8) + c) = inv_h;
      }
    }
    CHECK((dense(l.a_minus) - expected).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS(build_ladder_matrices(free_model(0.0), Grid::ring(4, 2.0)), std::invalid_argument);
  }
}

TEST_CASE("partner hamiltonians") {
  const std::vector<ModelSpec> specs = {
      free_model(0.5), free_model(2.0), free_model(-1.0, 2.0),
      {FieldConfig{2.0, 1.0}, SuperpotentialSpec::tanh(1.5), Sector::Minus},
      {FieldConfig{2.0, 1.0}, SuperpotentialSpec::tanh(0.5), Sector::Minus},
      {FieldConfig{1.0, 1.0}, SuperpotentialSpec::tabulated({-2.0, 0.0, 2.0}, {-1.0, 0.0, 1.0}, -1.0, 1.0),
       Sector::Minus},
  };
  for (const auto& spec : specs) {
    const Grid g = spec.w.is_zero() ? Grid::ring(96, 4.0 * kPi / std::abs(spec.field.k)) : Grid::box(96, 12.0);
    const auto hp = build_partner_hamiltonians(build_ladder_matrices(spec, g));
    CHECK(hermiticity_gap(hp.minus.h) <= 1e-13 * dense(hp.minus.h).cwiseAbs().maxCoeff());
    CHECK(hermiticity_gap(hp.plus.h) <= 1e-13 * dense(hp.plus.h).cwiseAbs().maxCoeff());
    const auto vm = sorted_values(hp.minus.h);
    const auto vp = sorted_values(hp.plus.h);
    CHECK(vm.front() >= -1e-10);
    CHECK(vp.front() >= -1e-10);
    CHECK(hp.minus.sector == Sector::Minus);
    CHECK(hp.plus.sector == Sector::Plus);

    // Nonzero levels pair up exactly.
    std::vector<double> am, ap;
    std::copy_if(vm.begin(), vm.end(), std::back_inserter(am), [](double x) { return x > 1e-9; });
    std::copy_if(vp.begin(), vp.end(), std::back_inserter(ap), [](double x) { return x > 1e-9; });
    REQUIRE(am.size() == ap.size());
    double gap = 0.0;
    for (std::size_t i = 0; i < am.size(); ++i) gap = std::max(gap, std::abs(am[i] - ap[i]));
    CHECK(gap < 1e-9);
  }
}

TEST_CASE("box plus partner acts on the links") {
  const Grid g = Grid::box(40, 8.0);
  const auto hp = build_partner_hamiltonians(
      build_ladder_matrices({FieldConfig{2.0, 1.0}, SuperpotentialSpec::tanh(1.5), Sector::Minus}, g));
  CHECK(hp.minus.grid == g);
  CHECK(hp.plus.grid == Grid::box_links(g));
  CHECK(hp.plus.h.rows() == 82);
  // The two extra link dimensions are exact zero modes of H+.
  const auto vp = sorted_values(hp.plus.h);
  CHECK(std::abs(vp[0]) < 1e-10);
  CHECK(std::abs(vp[1]) < 1e-10);
}

TEST_CASE("free case equals the discrete laplacian") {
  for (const Grid& g : {Grid::ring(32, 3.0), Grid::box(32, 3.0)}) {
    const auto hp = build_partner_hamiltonians(build_ladder_matrices(free_model(0.0), g));
    const auto direct = build_direct_hamiltonian(free_model(0.0), g);
    CHECK(max_entry_difference(hp.minus.h, direct.h) < 1e-13 * 2.0 / (g.spacing() * g.spacing()));
    if (g.boundary() == Boundary::Ring) {
      CHECK(max_entry_difference(hp.plus.h, direct.h) < 1e-13 * 2.0 / (g.spacing() * g.spacing()));
      const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
      CHECK(std::abs(cplx(dense(direct.h)(0, 0)) - 2.0 * inv_h2) < 1e-12 * inv_h2);
      CHECK(std::abs(cplx(dense(direct.h)(0, 2)) + inv_h2) < 1e-12 * inv_h2);
      CHECK(std::abs(cplx(dense(direct.h)(0, 62)) + inv_h2) < 1e-12 * inv_h2);
    }
  }
}

TEST_CASE("direct hamiltonian") {
  const Grid g = Grid::ring(64, 4.0 * kPi);
  for (Sector s : {Sector::Minus, Sector::Plus}) {
    const auto direct = build_direct_hamiltonian(free_model(0.5, 1.0, s), g);
    CHECK(hermiticity_gap(direct.h) < 1e-13);
    CHECK(direct.sector == s);
  }
  const auto box = build_direct_hamiltonian(
      {FieldConfig{2.0, 1.0}, SuperpotentialSpec::tanh(1.5), Sector::Plus}, Grid::box(64, 10.0));
  CHECK(hermiticity_gap(box.h) < 1e-13);
  CHECK_THROWS_AS(build_direct_hamiltonian(free_model(0.5), Grid::ring(64, 1.0)), std::invalid_argument);
}

TEST_CASE("factorized and direct hamiltonians converge at first order") {
  const ModelSpec spec = free_model(0.5);
  auto gap = [&](int n) {
    const Grid g = Grid::ring(n, 4.0 * kPi);
    const auto hp = build_partner_hamiltonians(build_ladder_matrices(spec, g));
    return probe_discrepancy(hp.minus, build_direct_hamiltonian(spec, g));
  };
  const double ratio = gap(512) / gap(1024);
  CHECK(ratio > 1.7);
  CHECK(ratio < 2.3);

  const Grid g = Grid::ring(64, 4.0 * kPi);
  const auto other = build_direct_hamiltonian(spec, Grid::ring(64, 8.0 * kPi));
  CHECK_THROWS_AS(probe_discrepancy(build_direct_hamiltonian(spec, g), other), std::invalid_argument);
}

TEST_CASE("gauge transform") {
  const Grid g = Grid::ring(50, 4.0 * kPi);
  Eigen::VectorXcd up(50), down(50);
  for (int j = 0; j < 50; ++j) {
    up(j) = cplx(std::cos(0.2 * j), 0.3);
    down(j) = cplx(-0.1 * j, std::sin(j));
  }
  const SpinorField psi(g, up, down);
  const auto fwd = gauge_transform(psi, 1.3, GaugeDirection::Forward);
  const auto back = gauge_transform(fwd, 1.3, GaugeDirection::Inverse);
  CHECK((back.up - up).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((back.down - down).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(fwd.norm() - psi.norm()) < 1e-13);

  const auto c = gauge_transform(SpinorField::constant(g, Spinor(1.0, 0.0)), 2.0, GaugeDirection::Forward);
  for (int j = 0; j < 50; ++j) {
    CHECK(std::abs(c.up(j) - std::exp(cplx(0.0, g.z(j)))) < 1e-14);
    CHECK(std::abs(c.up(j)) == doctest::Approx(1.0));
    CHECK(c.down(j) == cplx(0.0, 0.0));
  }
}

TEST_CASE("transformed hamiltonian") {
  const SpinMatrix m = transformed_hamiltonian(0.0, FieldConfig{1.0, 1.0}, Sector::Minus);
  // The minus sector carries +B0 S_x off the diagonal.
  CHECK(std::abs(m(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(m(1, 1) - 0.5) < 1e-15);
  CHECK(std::abs(m(0, 1) - 0.5) < 1e-15);
  CHECK(std::abs(m(1, 0) - 0.5) < 1e-15);
  Eigen::SelfAdjointEigenSolver<SpinMatrix> es(m);
  CHECK(std::abs(es.eigenvalues()(0)) < 1e-15);
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));

  const SpinMatrix p = transformed_hamiltonian(0.0, FieldConfig{1.0, 1.0}, Sector::Plus);
  CHECK(std::abs(p(0, 1) + 0.5) < 1e-15);

  const SpinMatrix free = transformed_hamiltonian(0.0, FieldConfig{0.0, 1.0}, Sector::Plus);
  CHECK((free - 0.25 * SpinMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  for (double q : {-1.7, -0.2, 0.0, 0.6, 2.4}) {
    for (double b0 : {0.0, 0.5, 3.0}) {
      Eigen::SelfAdjointEigenSolver<SpinMatrix> a(transformed_hamiltonian(q, FieldConfig{b0, 1.5}, Sector::Plus));
      Eigen::SelfAdjointEigenSolver<SpinMatrix> b(transformed_hamiltonian(q, FieldConfig{b0, 1.5}, Sector::Minus));
      CHECK((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff() < 1e-13);
    }
  }
  CHECK_THROWS_AS(transformed_hamiltonian(0.0, FieldConfig{1.0, 0.0}, Sector::Plus), std::invalid_argument);
}

TEST_CASE("ring spectrum equals the discrete bloch prediction") {
  for (double b0 : {0.0, 0.5, 1.0, 2.0}) {
    const FieldConfig f{b0, 1.0};
    const Grid g = Grid::ring(120, 8.0 * kPi);
    const auto hp = build_partner_hamiltonians(build_ladder_matrices(free_model(b0), g));
    const auto numeric = sorted_values(hp.minus.h);
    const auto predicted = bloch_spectrum(f, g);
    REQUIRE(numeric.size() == predicted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < numeric.size(); ++i)
      worst = std::max(worst, std::abs(numeric[i] - predicted[i]) / std::max(1.0, predicted[i]));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("ladder rejects invalid models") {
  ModelSpec bad{FieldConfig{1.0, 1.0}, SuperpotentialSpec::tanh(-2.0), Sector::Minus};
  CHECK_THROWS_WITH_AS(build_ladder_matrices(bad, Grid::box(16, 4.0)), "alpha must be positive",
                       std::invalid_argument);
}
