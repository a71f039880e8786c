#ifndef QHL_GRID_HPP
#define QHL_GRID_HPP

#include <Eigen/Dense>
#include <complex>

#include "qhl/errors.hpp"

namespace qhl {

using Complex = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

enum class Domain {
  HalfLine,   // [0, L), first point at x = 0
  WholeLine,  // [-L, L), first point at x = -L
};

// Uniform spatial lattice. Left endpoint included, right endpoint excluded,
// so whole-line grids are DFT-compatible.
struct Grid {
  Domain domain;
  double length;  // L
  int n;
  double dx;
  double xmin;

  double point(int i) const { return xmin + i * dx; }
  double xmax() const { return xmin + (n - 1) * dx; }
  double nyquist() const;
  Eigen::VectorXd points() const;

  bool operator==(const Grid& o) const {
    return domain == o.domain && length == o.length && n == o.n;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }
};

Grid make_grid(Domain domain, double length, int n);

// Whole-line companion of a half-line grid: same dx, points [-L, L),
// 2n points, containing the half-line points exactly.
Grid whole_line_companion(const Grid& half);

// Complex amplitudes on a grid, optionally vector-valued with fiber
// dimension d (amps is n x d).
struct WaveFunction {
  Grid grid;
  MatrixXcd amps;

  int fiber_dim() const { return static_cast<int>(amps.cols()); }
  int size() const { return static_cast<int>(amps.rows()); }
  VectorXcd scalar() const;  // d == 1 view
};

WaveFunction make_state(const Grid& grid, const VectorXcd& amps);
WaveFunction make_state(const Grid& grid, const MatrixXcd& amps);

// Rectangle-rule sesquilinear form  sum_i conj(phi_i) . psi_i dx, summed
// over the fiber.
Complex inner_product(const WaveFunction& phi, const WaveFunction& psi);
double state_norm(const WaveFunction& psi);
WaveFunction normalize(const WaveFunction& psi);

// Discretized plane-wave analysis functional e^{ipx} / sqrt(2 pi).
// Not square-normalized.
WaveFunction fourier_synthesis(const Grid& grid, double p);

// Uniform momentum outcome bins, centers p_j = p_lo + (j + 1/2) dp over a
// band symmetric about zero.
struct MomentumGrid {
  double p_max;  // band is [-p_max, p_max)
  int n;
  double dp;

  double p(int j) const { return -p_max + (j + 0.5) * dp; }
  Eigen::VectorXd points() const;

  // Index displacement of an on-grid shift; throws if p is not a multiple
  // of dp.
  int shift_bins(double p) const;
};

MomentumGrid make_momentum_grid(const Grid& grid, int n_bins, double p_max);

// Band exactly covering [-pi/dx, pi/dx); with n_bins >= grid.n the discrete
// POVM completeness sum is exact.
MomentumGrid full_band_momentum_grid(const Grid& grid, int n_bins);

void require_within_nyquist(const Grid& grid, double p);

}  // namespace qhl

#endif  // QHL_GRID_HPP
