#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qhl/covariant_povm.hpp"
#include "qhl/naimark.hpp"

using namespace qhl;

namespace {

WaveFunction packet(const Grid& g, double center, double width,
                    double momentum) {
  VectorXcd amps(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = g.point(i);
    amps[i] = std::exp(-0.5 * (x - center) * (x - center) / (width * width)) *
              std::polar(1.0, momentum * x);
  }
  return normalize(make_state(g, amps));
}

ExtendedState random_extended(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ExtendedState s;
  s.grid = g;
  s.picture = Picture::Tensor;
  s.plus.resize(g.n);
  s.minus.resize(g.n);
  for (int i = 0; i < g.n; ++i) {
    s.plus[i] = Complex{gauss(rng), gauss(rng)};
    s.minus[i] = Complex{gauss(rng), gauss(rng)};
  }
  double nrm = ext_norm(s);
  s.plus /= nrm;
  s.minus /= nrm;
  return s;
}

}  // namespace

TEST_CASE("extended momentum doubles with opposite signs") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 64);
  DenseOperator p = momentum_operator(g, Boundary::DirichletAtZero);
  ExtendedOperator ext = extend_momentum(p);
  CHECK((ext.minus + p.mat).cwiseAbs().maxCoeff() == 0.0);
  CHECK((ext.plus - p.mat).cwiseAbs().maxCoeff() == 0.0);

  WaveFunction psi = packet(g, 8.0, 2.0, 1.0);
  ExtendedState both;
  both.grid = g;
  both.picture = Picture::Tensor;
  both.plus = psi.scalar();
  both.minus = psi.scalar();
  ExtendedState out = ext_apply(ext, both);
  VectorXcd ppsi = p.mat * psi.scalar();
  CHECK((out.plus - ppsi).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((out.minus + ppsi).cwiseAbs().maxCoeff() < 1e-14);

  DenseOperator free = momentum_operator(g, Boundary::Free);
  CHECK_THROWS_AS(extend_momentum(free), ConfigurationError);
}

TEST_CASE("embedding keeps norms and fills one block") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 64);
  WaveFunction psi = packet(g, 8.0, 2.0, -0.5);
  ExtendedState s0 = embed_halfline_state(psi, 0);
  CHECK(s0.minus.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ext_norm(s0) == doctest::Approx(1.0).epsilon(1e-13));
  ExtendedState s1 = embed_halfline_state(psi, 1);
  CHECK(s1.plus.cwiseAbs().maxCoeff() == 0.0);
  CHECK((s1.minus - psi.scalar()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(embed_halfline_state(psi, 2), InvalidParameterError);
}

TEST_CASE("the sector swap is an exactly unitary involution") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 64);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 3; ++t) {
    ExtendedState s = random_extended(g, rng);
    ExtendedState ds = pi1_transform(s);
    CHECK(ds.picture == Picture::DirectSum);
    CHECK(ext_norm(ds) == doctest::Approx(ext_norm(s)).epsilon(1e-13));
    ExtendedState back = pi1_inverse(ds);
    CHECK((back.plus - s.plus).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((back.minus - s.minus).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_THROWS_AS(pi1_transform(ds), StateError);
    CHECK_THROWS_AS(pi1_inverse(s), StateError);
  }
}

TEST_CASE("embed with spin 1 reverses under the picture change") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 64);
  WaveFunction psi = packet(g, 8.0, 2.0, 0.9);
  ExtendedState ds = pi1_transform(embed_halfline_state(psi, 1));
  for (int i = 0; i < g.n; ++i)
    CHECK(std::abs(ds.minus[i] - psi.amps(g.n - 1 - i, 0)) < 1e-15);
}

TEST_CASE("extended momentum becomes a hermitian direct sum") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 64);
  DenseOperator p = momentum_operator(g, Boundary::DirichletAtZero);
  ExtendedOperator ds = pi1_transform(extend_momentum(p));
  CHECK((ds.plus - ds.plus.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ds.minus - ds.minus.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  // Index-reversal oracle for the reflected block.
  MatrixXcd expect(g.n, g.n);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      expect(i, j) = -p.mat(g.n - 1 - i, g.n - 1 - j);
  CHECK((ds.minus - expect).cwiseAbs().maxCoeff() == 0.0);
  // The interior stencil matches the forward derivative again: the sign
  // flips of reflection and negation cancel.
  CHECK(std::abs(ds.minus(10, 11) - ds.plus(10, 11)) < 1e-14);
  // Spectra are real: eigenvalues of the Hermitian blocks.
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ds.plus, Eigen::EigenvaluesOnly);
  CHECK(es.info() == Eigen::Success);
  // Operator round trip.
  ExtendedOperator back = pi1_inverse(ds);
  CHECK((back.minus + p.mat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("extended element blocks are conjugate phase twins") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 48);
  MomentumGrid m = full_band_momentum_grid(g, 48);
  WaveFunction ground = normalize(halfline_ground_state_closed_form(g, 1.0, 1.0));
  ExtendedOperator el = extended_optimal_element(ground, m, 17);
  CovariantPovm reference = build_povm(optimal_kernel(ground), m);
  CHECK((el.plus - reference.element(17)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((el.minus - el.plus.conjugate()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(extended_optimal_element(ground, m, 48), InvalidParameterError);
}

TEST_CASE("spin reduction reproduces the half-line element for odd states") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 48);
  MomentumGrid m = full_band_momentum_grid(g, 48);
  WaveFunction ground = normalize(halfline_ground_state_closed_form(g, 1.0, 1.0));
  for (int j : {0, 11, 30}) {
    ExtendedOperator ds = pi1_transform(extended_optimal_element(ground, m, j));
    MatrixXcd reduced = partial_trace_spin(ds);
    CHECK((reduced - ds.plus).cwiseAbs().maxCoeff() < 1e-15);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(reduced, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > -1e-12);
  }
  // Completeness survives the reduction on the full band.
  MatrixXcd total = MatrixXcd::Zero(g.n, g.n);
  for (int j = 0; j < m.n; ++j)
    total += partial_trace_spin(pi1_transform(extended_optimal_element(ground, m, j)));
  CHECK((total - MatrixXcd::Identity(g.n, g.n)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spin reduction is linear and positivity preserving") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 32);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_psd = [&] {
    MatrixXcd a(g.n, g.n);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) a(i, j) = Complex{gauss(rng), gauss(rng)};
    return MatrixXcd(a * a.adjoint());
  };
  ExtendedOperator x;
  x.grid = g;
  x.picture = Picture::DirectSum;
  x.plus = random_psd();
  x.minus = random_psd();
  ExtendedOperator y = x;
  y.plus = random_psd();
  y.minus = random_psd();

  MatrixXcd lin = partial_trace_spin(x);
  ExtendedOperator sum = x;
  sum.plus = x.plus + 2.0 * y.plus;
  sum.minus = x.minus + 2.0 * y.minus;
  MatrixXcd lhs = partial_trace_spin(sum);
  MatrixXcd rhs = lin + 2.0 * partial_trace_spin(y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(lhs, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);

  ExtendedOperator tensor = x;
  tensor.picture = Picture::Tensor;
  CHECK_THROWS_AS(partial_trace_spin(tensor), StateError);
}

TEST_CASE("packed direct-sum reduction rejects cross blocks") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 32);
  MomentumGrid m = full_band_momentum_grid(g, 32);
  WaveFunction ground = normalize(halfline_ground_state_closed_form(g, 1.0, 1.0));
  ExtendedOperator ds = pi1_transform(extended_optimal_element(ground, m, 9));
  MatrixXcd packed = MatrixXcd::Zero(2 * g.n, 2 * g.n);
  packed.topLeftCorner(g.n, g.n) = ds.plus;
  packed.bottomRightCorner(g.n, g.n) = ds.minus;
  MatrixXcd reduced = partial_trace_spin(packed, g);
  CHECK((reduced - partial_trace_spin(ds)).cwiseAbs().maxCoeff() == 0.0);

  packed(0, g.n + 3) = 1e-6;
  CHECK_THROWS_AS(partial_trace_spin(packed, g), StructureError);
  CHECK_THROWS_AS(partial_trace_spin(MatrixXcd::Zero(g.n, g.n), g), ShapeError);
}

TEST_CASE("inner products across pictures are rejected") {
  Grid g = make_grid(Domain::HalfLine, 20.0, 32);
  std::mt19937_64 rng(3);
  ExtendedState a = random_extended(g, rng);
  ExtendedState b = pi1_transform(random_extended(g, rng));
  CHECK_THROWS_AS(ext_inner_product(a, b), StateError);
}
