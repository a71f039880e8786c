#ifndef QHL_MEASUREMENT_MODEL_HPP
#define QHL_MEASUREMENT_MODEL_HPP

#include <utility>
#include <vector>

#include "qhl/covariant_povm.hpp"
#include "qhl/grid.hpp"
#include "qhl/operators.hpp"

namespace qhl {

enum class WindowKind { Gaussian, HardTruncation };

// Localization envelope for the incoming plane wave. sigma or width of 0
// selects the model default 8 / sqrt(m omega).
struct WindowSpec {
  WindowKind kind = WindowKind::Gaussian;
  double sigma = 0.0;  // Gaussian scale
  double width = 0.0;  // hard-truncation support
};

struct ModelParams {
  double mass = 1.0;
  double omega = 1.0;
  double coupling = 1.0;  // momentum-kick strength g
  double p_true = 0.0;    // incoming momentum
  WindowSpec window;
};

// Instantaneous kick exp(-i g P x): diagonal unitary on the grid.
DenseOperator kick_unitary(double g, double probe_momentum, const Grid& grid);

// Rank-one measurement operator A(P) = dx psi psi^H U_kick picked out by the
// long-time ground-state projection. Validates that ground really is the
// lowest eigenstate of the trap Hamiltonian.
MatrixXcd kraus_operator(const ModelParams& params, const WaveFunction& ground,
                         double probe_momentum);

// Family of measurement operators indexed by the outcome grid through the
// relabeling p = outcome_sign * g * probe momentum.
struct KrausFamily {
  ModelParams params;
  WaveFunction ground;
  MomentumGrid pgrid;
  int outcome_sign = +1;

  double probe_momentum(int j) const;
  MatrixXcd op(int j) const;
};

KrausFamily make_kraus_family(const ModelParams& params,
                              const WaveFunction& ground,
                              const MomentumGrid& pgrid);

// Outcome element A^H A dp / 2 pi of the measurement family.
MatrixXcd kraus_povm_element(const KrausFamily& family, int j);

// The elements sum to diag(|psi_i|^2) on a full band, not to the identity;
// the fiber norms of the ground state are kept explicit. Returns the
// max-entry distance from that diagonal.
double kraus_completeness_residual(const KrausFamily& family);

// Max-entry distance between the measurement-route elements and the
// kernel-route elements of the same ground state, sampled across the band.
double kraus_equivalence_defect(const KrausFamily& family);

// Normalized windowed plane wave N w(x) e^{i p_true x} on the half line,
// window centered at L/2.
WaveFunction plane_wave_state(const ModelParams& params, const Grid& grid);

// Odd continuation of a half-line state onto the companion whole-line grid,
// renormalized.
WaveFunction odd_extension(const WaveFunction& half);

// First and second central moments of a density on the outcome grid.
std::pair<double, double> distribution_moments(const MomentumGrid& pgrid,
                                               const Eigen::VectorXd& density);

// Outcome density of the momentum measurement on the incoming plane wave:
// the ground state is continued oddly to the whole line, the plane wave gets
// an even two-sided window, and the Born density of the rank-one covariant
// family is normalized on the band.
Eigen::VectorXd measured_distribution(const ModelParams& params,
                                      const WaveFunction& ground_half,
                                      const MomentumGrid& pgrid);

// Normalized closed form (2 / (sqrt(pi) (m w)^{3/2})) q^2 e^{-q^2/(m w)},
// q = p - p_true.
double analytic_distribution(double p, const ModelParams& params);

struct SweepPoint {
  double omega = 0.0;
  double domain_length = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double dp = 0.0;
  double max_density_error = 0.0;  // against the closed form
};

struct ConservationReport {
  std::vector<SweepPoint> points;
  double variance_slope = 0.0;      // least-squares fit variance vs omega
  double variance_intercept = 0.0;
  bool narrow_window_warning = false;
};

// Sweep over decreasing trap frequencies: per point the mean must sit at
// p_true within dp and the variances must fit (3/2) m omega with vanishing
// intercept, the delta-sharpening limit.
ConservationReport conservation_and_limit_check(const ModelParams& base,
                                                const std::vector<double>& omegas,
                                                int n);

// Same measurement pipeline with the trap replaced by an arbitrary convex
// potential sampled on the grid. Non-convex input is rejected.
Eigen::VectorXd convex_potential_distribution(const ModelParams& params,
                                              const Eigen::VectorXd& potential,
                                              const Grid& grid,
                                              const MomentumGrid& pgrid);

}  // namespace qhl

#endif  // QHL_MEASUREMENT_MODEL_HPP
