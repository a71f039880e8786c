#include "qhl/grid.hpp"

#include <cmath>
#include <numbers>

namespace qhl {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Grid::nyquist() const { return kPi / dx; }

Eigen::VectorXd Grid::points() const {
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = point(i);
  return x;
}

Grid make_grid(Domain domain, double length, int n) {
  if (length <= 0.0) throw InvalidParameterError("grid length must be positive");
  if (n < 16) throw InvalidParameterError("grid needs at least 16 points");
  Grid g;
  g.domain = domain;
  g.length = length;
  g.n = n;
  if (domain == Domain::HalfLine) {
    g.dx = length / n;
    g.xmin = 0.0;
  } else {
    g.dx = 2.0 * length / n;
    g.xmin = -length;
  }
  return g;
}

Grid whole_line_companion(const Grid& half) {
  if (half.domain != Domain::HalfLine)
    throw ConfigurationError("whole_line_companion expects a half-line grid");
  return make_grid(Domain::WholeLine, half.length, 2 * half.n);
}

VectorXcd WaveFunction::scalar() const {
  if (fiber_dim() != 1) throw ShapeError("scalar() requires fiber_dim == 1");
  return amps.col(0);
}

WaveFunction make_state(const Grid& grid, const VectorXcd& amps) {
  if (amps.size() != grid.n) throw ShapeError("amplitude count does not match grid");
  WaveFunction psi;
  psi.grid = grid;
  psi.amps = amps;
  return psi;
}

WaveFunction make_state(const Grid& grid, const MatrixXcd& amps) {
  if (amps.rows() != grid.n || amps.cols() < 1)
    throw ShapeError("amplitude shape does not match grid");
  WaveFunction psi;
  psi.grid = grid;
  psi.amps = amps;
  return psi;
}

Complex inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  if (phi.grid != psi.grid || phi.fiber_dim() != psi.fiber_dim())
    throw ShapeError("inner_product: grid or fiber mismatch");
  Complex acc = (phi.amps.conjugate().cwiseProduct(psi.amps)).sum();
  return acc * phi.grid.dx;
}

double state_norm(const WaveFunction& psi) {
  return std::sqrt(std::real(inner_product(psi, psi)));
}

WaveFunction normalize(const WaveFunction& psi) {
  double nrm = state_norm(psi);
  if (nrm <= 0.0 || !std::isfinite(nrm))
    throw DegenerateStateError("cannot normalize a zero state");
  WaveFunction out = psi;
  out.amps /= nrm;
  return out;
}

WaveFunction fourier_synthesis(const Grid& grid, double p) {
  require_within_nyquist(grid, p);
  VectorXcd amps(grid.n);
  const double c = 1.0 / std::sqrt(2.0 * kPi);
  for (int i = 0; i < grid.n; ++i)
    amps[i] = c * std::polar(1.0, p * grid.point(i));
  return make_state(grid, amps);
}

Eigen::VectorXd MomentumGrid::points() const {
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) out[j] = p(j);
  return out;
}

int MomentumGrid::shift_bins(double shift) const {
  double s = shift / dp;
  double r = std::round(s);
  if (std::abs(s - r) > 1e-9)
    throw InvalidParameterError("shift is not a multiple of dp");
  return static_cast<int>(r);
}

MomentumGrid make_momentum_grid(const Grid& grid, int n_bins, double p_max) {
  if (n_bins < 2) throw InvalidParameterError("momentum grid needs at least 2 bins");
  if (p_max <= 0.0) throw InvalidParameterError("p_max must be positive");
  if (p_max > grid.nyquist() * (1.0 + 1e-12))
    throw AliasingError("p_max exceeds the Nyquist bound pi/dx");
  MomentumGrid m;
  m.p_max = p_max;
  m.n = n_bins;
  m.dp = 2.0 * p_max / n_bins;
  return m;
}

MomentumGrid full_band_momentum_grid(const Grid& grid, int n_bins) {
  return make_momentum_grid(grid, n_bins, grid.nyquist());
}

void require_within_nyquist(const Grid& grid, double p) {
  if (std::abs(p) > grid.nyquist() * (1.0 + 1e-12))
    throw AliasingError("momentum beyond the Nyquist bound pi/dx");
}

}  // namespace qhl
