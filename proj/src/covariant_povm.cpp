#include "qhl/covariant_povm.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace qhl {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kIndefiniteTol = 1e-6;
constexpr double kUnitDiagTol = 1e-10;
constexpr double kBoundaryFraction = 0.05;

void require_normalized_scalar(const WaveFunction& psi) {
  if (psi.fiber_dim() != 1)
    throw ShapeError("scalar kernel operations require fiber_dim == 1");
  if (std::abs(state_norm(psi) - 1.0) > 1e-8)
    throw InvalidStateError("state must be normalized");
}

}  // namespace

Complex Kernel::at(int i, int j) const {
  if (dense) return (*dense)(i, j);
  return factor->col(i).dot(factor->col(j));
}

MatrixXcd Kernel::materialize() const {
  if (dense) return *dense;
  return factor->adjoint() * (*factor);
}

double Kernel::min_eigenvalue() const {
  if (factor) {
    // Nonzero spectrum of F^H F equals that of the small Gram matrix F F^H;
    // the remaining eigenvalues are exactly zero when r < n.
    MatrixXcd small = (*factor) * factor->adjoint();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(small, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    return factor->rows() < grid.n ? std::min(lo, 0.0) : lo;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(*dense, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double Kernel::max_diagonal_deviation() const {
  double worst = 0.0;
  for (int i = 0; i < grid.n; ++i)
    worst = std::max(worst, std::abs(at(i, i) - Complex{1.0, 0.0}));
  return worst;
}

Kernel optimal_kernel(const WaveFunction& psi) {
  require_normalized_scalar(psi);
  const int n = psi.size();
  VectorXcd s(n);
  std::vector<int> singular;
  const double peak = psi.amps.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) {
    Complex a = psi.amps(i, 0);
    double r = std::abs(a);
    if (r <= 1e-300 * std::max(1.0, peak)) {
      s[i] = 0.0;  // identity-diagonal fallback handled below
      singular.push_back(i);
    } else {
      s[i] = a / r;
    }
  }
  // F rows: the phase field, plus one unit row per singular point so that
  // K(x,x) = 1 there with vanishing off-diagonal entries.
  MatrixXcd f = MatrixXcd::Zero(1 + static_cast<int>(singular.size()), n);
  f.row(0) = s.conjugate().transpose();
  for (std::size_t k = 0; k < singular.size(); ++k) f(1 + k, singular[k]) = 1.0;
  Kernel kern;
  kern.grid = psi.grid;
  kern.factor = std::move(f);
  kern.unit_diagonal = true;
  kern.singular_points = std::move(singular);
  return kern;
}

Kernel state_kernel(const WaveFunction& psi) {
  require_normalized_scalar(psi);
  Kernel kern;
  kern.grid = psi.grid;
  MatrixXcd f(1, psi.size());
  f.row(0) = psi.amps.col(0).conjugate().transpose();
  kern.factor = std::move(f);
  kern.unit_diagonal = false;
  return kern;
}

Kernel all_ones_kernel(const Grid& grid) {
  Kernel kern;
  kern.grid = grid;
  kern.factor = MatrixXcd::Ones(1, grid.n);
  kern.unit_diagonal = true;
  return kern;
}

Kernel identity_kernel(const Grid& grid) {
  Kernel kern;
  kern.grid = grid;
  kern.dense = MatrixXcd::Identity(grid.n, grid.n);
  kern.unit_diagonal = true;
  return kern;
}

Kernel random_gram_kernel(const Grid& grid, int r, std::mt19937_64& rng) {
  if (r < 1) throw InvalidParameterError("Gram rank must be >= 1");
  const int n = grid.n;
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixXcd raw(r, n);
  for (int m = 0; m < r; ++m)
    for (int i = 0; i < n; ++i) raw(m, i) = Complex{gauss(rng), gauss(rng)};

  // Moving-average smoothing keeps the unit field slowly varying.
  const int half_window = std::max(4, n / 64);
  MatrixXcd smooth = MatrixXcd::Zero(r, n);
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - half_window);
    int hi = std::min(n - 1, i + half_window);
    for (int m = 0; m < r; ++m) {
      Complex acc = 0.0;
      for (int k = lo; k <= hi; ++k) acc += raw(m, k);
      smooth(m, i) = acc;
    }
  }
  for (int i = 0; i < n; ++i) {
    double nrm = smooth.col(i).norm();
    if (nrm < 1e-12) smooth(0, i) = 1.0, nrm = 1.0;
    smooth.col(i) /= smooth.col(i).norm();
  }
  Kernel kern;
  kern.grid = grid;
  kern.factor = std::move(smooth);
  kern.unit_diagonal = true;
  return kern;
}

MatrixXcd CovariantPovm::element_at(double p) const {
  const Grid& g = kernel.grid;
  const double c = g.dx * pgrid.dp / (2.0 * kPi);
  VectorXcd phase(g.n);
  for (int i = 0; i < g.n; ++i) phase[i] = std::polar(1.0, p * g.point(i));
  MatrixXcd k = kernel.materialize();
  return c * (phase.asDiagonal() * k * phase.conjugate().asDiagonal());
}

MatrixXcd CovariantPovm::element(int j) const {
  if (j < 0 || j >= pgrid.n) throw InvalidParameterError("outcome index out of range");
  return element_at(pgrid.p(j));
}

double CovariantPovm::completeness_residual() const {
  const Grid& g = kernel.grid;
  const int n = g.n;
  const double c = g.dx * pgrid.dp / (2.0 * kPi);
  // sum_j e^{i k dx p_j} for every index offset k.
  VectorXcd phase_sum = VectorXcd::Zero(2 * n - 1);
  for (int j = 0; j < pgrid.n; ++j) {
    const Complex w = std::polar(1.0, pgrid.p(j) * g.dx);
    Complex acc = std::polar(1.0, pgrid.p(j) * g.dx * (1.0 - n));
    for (int k = -(n - 1); k <= n - 1; ++k) {
      phase_sum[k + n - 1] += acc;
      acc *= w;
    }
  }
  MatrixXcd k = kernel.materialize();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int ip = 0; ip < n; ++ip) {
      Complex v = c * k(i, ip) * phase_sum[i - ip + n - 1];
      if (i == ip) v -= 1.0;
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

CovariantPovm build_povm(Kernel kernel, const MomentumGrid& pgrid) {
  if (kernel.min_eigenvalue() < -kIndefiniteTol)
    throw InvalidKernelError("kernel is not positive semidefinite");
  if (kernel.unit_diagonal && kernel.max_diagonal_deviation() > kUnitDiagTol)
    throw InvalidKernelError("kernel diagonal deviates from identity");
  return CovariantPovm{std::move(kernel), pgrid};
}

double covariance_defect(const CovariantPovm& povm, double p) {
  const int s = povm.pgrid.shift_bins(p);
  const Grid& g = povm.kernel.grid;
  const int nb = povm.pgrid.n;
  const int excl = std::max(1, static_cast<int>(std::ceil(kBoundaryFraction * nb)));

  VectorXcd v(g.n);
  for (int i = 0; i < g.n; ++i) v[i] = std::polar(1.0, -p * g.point(i));

  // Exact by construction; a spread of interior bins suffices to certify it.
  double worst = 0.0;
  const int samples = 16;
  int checked = 0;
  for (int t = 0; t < samples; ++t) {
    int j = excl + static_cast<int>((static_cast<long long>(t) * (nb - 2 * excl)) / samples);
    int jt = j + s;
    if (j < excl || j >= nb - excl || jt < excl || jt >= nb - excl) continue;
    MatrixXcd lhs = v.conjugate().asDiagonal() * povm.element(j) * v.asDiagonal();
    worst = std::max(worst, (lhs - povm.element(jt)).cwiseAbs().maxCoeff());
    ++checked;
  }
  if (checked == 0)
    throw InvalidParameterError("shift leaves no interior bins to compare");
  return worst;
}

namespace {

// Anti-diagonal sums c_k = sum_{i - i' = k} conj(psi_i) K_{i i'} psi_{i'};
// every Born density is a 1D phase sum over these.
VectorXcd antidiagonal_sums(const WaveFunction& psi, const Kernel& kernel) {
  const int n = psi.size();
  MatrixXcd k = kernel.materialize();
  VectorXcd psi0 = psi.amps.col(0);
  VectorXcd c = VectorXcd::Zero(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    const Complex pi_conj = std::conj(psi0[i]);
    for (int ip = 0; ip < n; ++ip)
      c[i - ip + n - 1] += pi_conj * k(i, ip) * psi0[ip];
  }
  return c;
}

double density_from_sums(const VectorXcd& c, double dx, double p) {
  const int n = (static_cast<int>(c.size()) + 1) / 2;
  const Complex w = std::polar(1.0, p * dx);
  Complex acc = 0.0;
  Complex ph = std::polar(1.0, p * dx * (1.0 - n));
  for (int k = -(n - 1); k <= n - 1; ++k) {
    acc += c[k + n - 1] * ph;
    ph *= w;
  }
  return std::real(acc) * dx * dx / (2.0 * kPi);
}

}  // namespace

Eigen::VectorXd probability_distribution(const WaveFunction& psi,
                                         const CovariantPovm& povm) {
  require_normalized_scalar(psi);
  if (psi.grid != povm.kernel.grid)
    throw ShapeError("state grid does not match POVM grid");
  VectorXcd c = antidiagonal_sums(psi, povm.kernel);
  Eigen::VectorXd mu(povm.pgrid.n);
  for (int j = 0; j < povm.pgrid.n; ++j)
    mu[j] = density_from_sums(c, psi.grid.dx, povm.pgrid.p(j));
  return mu;
}

double density_at(const WaveFunction& psi, const CovariantPovm& povm, double p) {
  require_normalized_scalar(psi);
  VectorXcd c = antidiagonal_sums(psi, povm.kernel);
  return density_from_sums(c, psi.grid.dx, p);
}

Complex characteristic_function(const WaveFunction& psi,
                                const CovariantPovm& povm, double x) {
  const double steps = x / psi.grid.dx;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw InvalidParameterError("displacement must be a multiple of dx");
  Eigen::VectorXd mu = probability_distribution(psi, povm);
  Complex acc = 0.0;
  for (int j = 0; j < povm.pgrid.n; ++j)
    acc += std::polar(mu[j], x * povm.pgrid.p(j));
  return acc * povm.pgrid.dp;
}

double characteristic_envelope(const WaveFunction& psi, double x) {
  const double steps = x / psi.grid.dx;
  const double r = std::round(steps);
  if (std::abs(steps - r) > 1e-9)
    throw InvalidParameterError("displacement must be a multiple of dx");
  const int k = static_cast<int>(r);
  const int n = psi.size();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    int j = i - k;
    if (j < 0 || j >= n) continue;
    acc += std::abs(psi.amps(i, 0)) * std::abs(psi.amps(j, 0));
  }
  return acc * psi.grid.dx;
}

double DeviationSpec::deviation_function(double p) const {
  double acc = 0.0;
  for (int k = 0; k < nodes.size(); ++k)
    acc += std::cos(p * nodes[k]) * weights[k];
  return -acc;
}

DeviationSpec make_deviation(const Eigen::VectorXd& nodes,
                             const Eigen::VectorXd& weights) {
  if (nodes.size() != weights.size() || nodes.size() == 0)
    throw InvalidParameterError("deviation nodes/weights mismatch");
  // Evenness: every node must have a mirror with the same weight.
  for (int k = 0; k < nodes.size(); ++k) {
    bool found = false;
    for (int l = 0; l < nodes.size(); ++l) {
      if (std::abs(nodes[l] + nodes[k]) < 1e-12 &&
          std::abs(weights[l] - weights[k]) < 1e-12) {
        found = true;
        break;
      }
    }
    if (!found) throw InvalidDeviationError("deviation measure is not even");
  }
  return DeviationSpec{nodes, weights};
}

DeviationSpec gaussian_deviation(double sigma, double w0, double step,
                                 double extent) {
  if (sigma <= 0.0 || w0 <= 0.0 || step <= 0.0 || extent <= 0.0)
    throw InvalidParameterError("gaussian_deviation parameters must be positive");
  const int kmax = static_cast<int>(std::floor(extent / step));
  const int count = 2 * kmax + 1;
  Eigen::VectorXd nodes(count), weights(count);
  const double norm = w0 * step / (sigma * std::sqrt(2.0 * kPi));
  for (int k = -kmax; k <= kmax; ++k) {
    nodes[k + kmax] = k * step;
    weights[k + kmax] = norm * std::exp(-0.5 * (k * step) * (k * step) / (sigma * sigma));
  }
  return DeviationSpec{nodes, weights};
}

DeviationSpec point_mass_deviation(double w0) {
  Eigen::VectorXd nodes(1), weights(1);
  nodes[0] = 0.0;
  weights[0] = w0;
  return DeviationSpec{nodes, weights};
}

double risk(const CovariantPovm& povm, const WaveFunction& psi,
            const DeviationSpec& dev) {
  Eigen::VectorXd mu = probability_distribution(psi, povm);
  double direct = 0.0;
  for (int j = 0; j < povm.pgrid.n; ++j)
    direct += dev.deviation_function(povm.pgrid.p(j)) * mu[j];
  direct *= povm.pgrid.dp;

  // Characteristic-function form of the same quantity; finite sums commute,
  // so the two routes must agree.
  double via_phi = 0.0;
  for (int k = 0; k < dev.nodes.size(); ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < povm.pgrid.n; ++j)
      acc += std::polar(mu[j], dev.nodes[k] * povm.pgrid.p(j));
    via_phi -= std::real(acc) * povm.pgrid.dp * dev.weights[k];
  }
  if (std::abs(direct - via_phi) > 1e-8 * (1.0 + std::abs(direct)))
    throw NumericalFailureError("risk cross-check failed between the two forms");
  return direct;
}

double optimal_risk_bound(const WaveFunction& psi, const DeviationSpec& dev) {
  double acc = 0.0;
  for (int k = 0; k < dev.nodes.size(); ++k)
    acc -= characteristic_envelope(psi, dev.nodes[k]) * dev.weights[k];
  return acc;
}

Lemma1Report lemma1_check(const CovariantPovm& povm, const WaveFunction& psi,
                          const std::vector<int>& bins) {
  if (bins.empty()) return Lemma1Report{0.0, false};
  const int nb = povm.pgrid.n;
  const int excl = std::max(1, static_cast<int>(std::ceil(kBoundaryFraction * nb)));
  bool warn = false;
  for (int b : bins) {
    if (b < 0 || b >= nb) throw InvalidParameterError("bin index out of range");
    if (b < excl || b >= nb - excl) warn = true;
  }
  Eigen::VectorXd mu = probability_distribution(psi, povm);
  // Average the bin-set probability over every on-grid momentum shift; the
  // shifted distribution is the relabeled one, entries outside the band
  // contribute zero.
  double acc = 0.0;
  for (int s = -nb / 2; s < nb - nb / 2; ++s) {
    for (int b : bins) {
      int j = b + s;
      if (j >= 0 && j < nb) acc += mu[j];
    }
  }
  acc *= povm.pgrid.dp * povm.pgrid.dp;
  const double mes = static_cast<double>(bins.size()) * povm.pgrid.dp;
  return Lemma1Report{acc / mes, warn};
}

}  // namespace qhl
