#include "qhl/measurement_model.hpp"

#include <cmath>
#include <numbers>

namespace qhl {

namespace {

constexpr double kPi = std::numbers::pi;

double window_sigma(const ModelParams& params) {
  if (params.window.sigma > 0.0) return params.window.sigma;
  if (params.mass <= 0.0 || params.omega <= 0.0)
    throw InvalidParameterError(
        "window scale must be given explicitly when the trap is off");
  return 8.0 / std::sqrt(params.mass * params.omega);
}

// Core of the measurement pipeline: odd continuation of the bound state,
// even two-sided window on the plane wave, normalized Born density.
Eigen::VectorXd windowed_density(const WaveFunction& ground_half, double p_true,
                                 double sigma, const MomentumGrid& pgrid) {
  const Grid& half = ground_half.grid;
  if (sigma <= 0.0)
    throw InvalidParameterError("window scale must be positive");
  Grid whole = whole_line_companion(half);
  require_within_nyquist(whole, p_true);

  WaveFunction bound = odd_extension(ground_half);

  const double center = half.length / 2.0;
  VectorXcd wave(whole.n);
  for (int k = 0; k < whole.n; ++k) {
    double x = whole.point(k);
    double w = 0.5 * (std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma)) +
                      std::exp(-0.5 * (x + center) * (x + center) / (sigma * sigma)));
    wave[k] = w * std::polar(1.0, p_true * x);
  }
  WaveFunction probe_wave = normalize(make_state(whole, wave));

  CovariantPovm povm = build_povm(state_kernel(bound), pgrid);
  Eigen::VectorXd mu = probability_distribution(probe_wave, povm);
  double total = mu.sum() * pgrid.dp;
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalFailureError("measured density has no mass on the band");
  return mu / total;
}

}  // namespace

DenseOperator kick_unitary(double g, double probe_momentum, const Grid& grid) {
  const double kick = g * probe_momentum;
  require_within_nyquist(grid, kick);
  MatrixXcd m = MatrixXcd::Zero(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i)
    m(i, i) = std::polar(1.0, -kick * grid.point(i));
  return DenseOperator{std::move(m), grid, Boundary::Free, "U_kick"};
}

MatrixXcd kraus_operator(const ModelParams& params, const WaveFunction& ground,
                         double probe_momentum) {
  if (ground.fiber_dim() != 1)
    throw ShapeError("measurement model expects a scalar ground state");
  if (std::abs(state_norm(ground) - 1.0) > 1e-8)
    throw InvalidGroundError("ground state must be normalized");
  DenseOperator h =
      harmonic_hamiltonian(ground.grid, params.mass, params.omega);
  WaveFunction hpsi = apply(h, ground);
  double energy = std::real(inner_product(ground, hpsi));
  hpsi.amps -= energy * ground.amps;
  if (state_norm(hpsi) > 1e-6)
    throw InvalidGroundError("state is not an eigenstate of the trap");

  DenseOperator u = kick_unitary(params.coupling, probe_momentum, ground.grid);
  VectorXcd psi = ground.scalar();
  // Projection onto the ground state carries the quadrature weight dx.
  return ground.grid.dx * (psi * psi.adjoint()) * u.mat;
}

double KrausFamily::probe_momentum(int j) const {
  return outcome_sign * pgrid.p(j) / params.coupling;
}

MatrixXcd KrausFamily::op(int j) const {
  return kraus_operator(params, ground, probe_momentum(j));
}

KrausFamily make_kraus_family(const ModelParams& params,
                              const WaveFunction& ground,
                              const MomentumGrid& pgrid) {
  if (params.coupling == 0.0)
    throw InvalidParameterError("coupling must be nonzero");
  // Validate once up front; op(j) revalidates cheaply.
  kraus_operator(params, ground, 0.0);
  return KrausFamily{params, ground, pgrid, +1};
}

MatrixXcd kraus_povm_element(const KrausFamily& family, int j) {
  MatrixXcd a = family.op(j);
  return (a.adjoint() * a) * (family.pgrid.dp / (2.0 * kPi));
}

double kraus_completeness_residual(const KrausFamily& family) {
  const Grid& g = family.ground.grid;
  VectorXcd psi = family.ground.scalar();
  MatrixXcd total = MatrixXcd::Zero(g.n, g.n);
  const double c = g.dx * family.pgrid.dp / (2.0 * kPi);
  for (int j = 0; j < family.pgrid.n; ++j) {
    const double kick = family.params.coupling * family.probe_momentum(j);
    VectorXcd v(g.n);
    for (int i = 0; i < g.n; ++i)
      v[i] = std::polar(1.0, kick * g.point(i)) * psi[i];
    total.noalias() += c * (v * v.adjoint());
  }
  for (int i = 0; i < g.n; ++i) total(i, i) -= std::norm(psi[i]);
  return total.cwiseAbs().maxCoeff();
}

double kraus_equivalence_defect(const KrausFamily& family) {
  CovariantPovm reference = build_povm(state_kernel(family.ground), family.pgrid);
  double worst = 0.0;
  const int nb = family.pgrid.n;
  for (int j : {0, nb / 4, nb / 2, 3 * nb / 4, nb - 1}) {
    MatrixXcd diff = kraus_povm_element(family, j) - reference.element(j);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  return worst;
}

WaveFunction plane_wave_state(const ModelParams& params, const Grid& grid) {
  if (grid.domain != Domain::HalfLine)
    throw ConfigurationError("plane_wave_state expects a half-line grid");
  require_within_nyquist(grid, params.p_true);
  const double center = grid.length / 2.0;
  VectorXcd amps(grid.n);
  if (params.window.kind == WindowKind::Gaussian) {
    const double sigma = window_sigma(params);
    if (sigma >= grid.length)
      throw ConfigurationError("window wider than the domain");
    for (int i = 0; i < grid.n; ++i) {
      double x = grid.point(i);
      amps[i] = std::exp(-0.5 * (x - center) * (x - center) / (sigma * sigma)) *
                std::polar(1.0, params.p_true * x);
    }
  } else {
    const double width =
        params.window.width > 0.0 ? params.window.width : grid.length;
    if (width > grid.length)
      throw ConfigurationError("window wider than the domain");
    for (int i = 0; i < grid.n; ++i) {
      double x = grid.point(i);
      amps[i] = std::abs(x - center) < width / 2.0
                    ? std::polar(1.0, params.p_true * x)
                    : Complex{0.0, 0.0};
    }
  }
  return normalize(make_state(grid, amps));
}

WaveFunction odd_extension(const WaveFunction& half) {
  if (half.grid.domain != Domain::HalfLine)
    throw ConfigurationError("odd_extension expects a half-line state");
  if (half.fiber_dim() != 1)
    throw ShapeError("odd_extension expects a scalar state");
  Grid whole = whole_line_companion(half.grid);
  const int n = half.grid.n;
  VectorXcd amps = VectorXcd::Zero(whole.n);
  for (int i = 0; i < n; ++i) amps[n + i] = half.amps(i, 0);
  for (int i = 1; i < n; ++i) amps[n - i] = -half.amps(i, 0);
  return normalize(make_state(whole, amps));
}

std::pair<double, double> distribution_moments(const MomentumGrid& pgrid,
                                               const Eigen::VectorXd& density) {
  if (density.size() != pgrid.n) throw ShapeError("density size mismatch");
  double mass = 0.0, mean = 0.0;
  for (int j = 0; j < pgrid.n; ++j) {
    mass += density[j] * pgrid.dp;
    mean += pgrid.p(j) * density[j] * pgrid.dp;
  }
  if (mass <= 0.0) throw DegenerateStateError("density has no mass");
  mean /= mass;
  double var = 0.0;
  for (int j = 0; j < pgrid.n; ++j) {
    double d = pgrid.p(j) - mean;
    var += d * d * density[j] * pgrid.dp;
  }
  return {mean, var / mass};
}

Eigen::VectorXd measured_distribution(const ModelParams& params,
                                      const WaveFunction& ground_half,
                                      const MomentumGrid& pgrid) {
  return windowed_density(ground_half, params.p_true, window_sigma(params), pgrid);
}

double analytic_distribution(double p, const ModelParams& params) {
  if (params.omega <= 0.0 || params.mass <= 0.0)
    throw InvalidParameterError("closed form needs a positive trap frequency");
  const double a = params.mass * params.omega;
  const double q = p - params.p_true;
  return 2.0 / (std::sqrt(kPi) * std::pow(a, 1.5)) * q * q * std::exp(-q * q / a);
}

ConservationReport conservation_and_limit_check(const ModelParams& base,
                                                const std::vector<double>& omegas,
                                                int n) {
  if (omegas.size() < 2)
    throw InvalidParameterError("sweep needs at least two frequencies");
  for (std::size_t k = 0; k < omegas.size(); ++k) {
    if (omegas[k] <= 0.0)
      throw InvalidParameterError("sweep frequencies must be positive");
    if (k > 0 && omegas[k] >= omegas[k - 1])
      throw InvalidParameterError("sweep frequencies must decrease");
  }

  ConservationReport report;
  for (double omega : omegas) {
    ModelParams p = base;
    p.omega = omega;
    const double scale = std::sqrt(p.mass * omega);
    const double length = std::max(20.0, 15.0 / scale);
    Grid grid = make_grid(Domain::HalfLine, length, n);
    Grid whole = whole_line_companion(grid);
    WaveFunction ground =
        normalize(halfline_ground_state_closed_form(grid, p.mass, omega));

    const double sigma = window_sigma(p);
    if (sigma < 4.0 / scale) report.narrow_window_warning = true;

    double p_max = std::min(whole.nyquist(), std::abs(p.p_true) + 10.0 * scale);
    MomentumGrid pgrid = make_momentum_grid(whole, 2048, p_max);
    Eigen::VectorXd mu = measured_distribution(p, ground, pgrid);

    SweepPoint pt;
    pt.omega = omega;
    pt.domain_length = length;
    pt.dp = pgrid.dp;
    std::tie(pt.mean, pt.variance) = distribution_moments(pgrid, mu);
    for (int j = 0; j < pgrid.n; ++j)
      pt.max_density_error = std::max(
          pt.max_density_error,
          std::abs(mu[j] - analytic_distribution(pgrid.p(j), p)));
    report.points.push_back(pt);
  }

  // Least-squares line variance = slope * omega + intercept.
  double sw = static_cast<double>(report.points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& pt : report.points) {
    sx += pt.omega;
    sy += pt.variance;
    sxx += pt.omega * pt.omega;
    sxy += pt.omega * pt.variance;
  }
  double det = sw * sxx - sx * sx;
  report.variance_slope = (sw * sxy - sx * sy) / det;
  report.variance_intercept = (sy * sxx - sx * sxy) / det;
  return report;
}

Eigen::VectorXd convex_potential_distribution(const ModelParams& params,
                                              const Eigen::VectorXd& potential,
                                              const Grid& grid,
                                              const MomentumGrid& pgrid) {
  if (potential.size() != grid.n) throw ShapeError("potential size mismatch");
  double vscale = std::max(1.0, potential.cwiseAbs().maxCoeff());
  for (int i = 1; i + 1 < grid.n; ++i) {
    double curv = potential[i + 1] - 2.0 * potential[i] + potential[i - 1];
    if (curv < -1e-9 * vscale)
      throw InvalidParameterError("potential is not convex on the grid");
  }
  DenseOperator h = potential_hamiltonian(grid, params.mass, potential, "V");
  auto [energy, ground] = ground_state(h);
  (void)energy;
  if (params.window.sigma <= 0.0)
    throw InvalidParameterError("custom potentials need an explicit window scale");
  return windowed_density(ground, params.p_true, params.window.sigma, pgrid);
}

}  // namespace qhl
