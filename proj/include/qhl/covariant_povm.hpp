#ifndef QHL_COVARIANT_POVM_HPP
#define QHL_COVARIANT_POVM_HPP

#include <optional>
#include <random>
#include <vector>

#include "qhl/grid.hpp"

namespace qhl {

// Positive-definite scalar kernel K(x, x') on a grid. Either a dense matrix
// or a Gram factor F (r x n, K = F^dagger F) is stored; the factor form keeps
// probability evaluation cheap for low-rank kernels.
struct Kernel {
  Grid grid;
  std::optional<MatrixXcd> dense;   // n x n
  std::optional<MatrixXcd> factor;  // r x n, K = factor^H factor
  bool unit_diagonal = true;        // Theorem hypothesis K(x,x) = 1 expected
  std::vector<int> singular_points; // grid indices where the normalized
                                    // kernel was undefined (psi_x = 0)

  Complex at(int i, int j) const;
  MatrixXcd materialize() const;
  double min_eigenvalue() const;
  double max_diagonal_deviation() const;  // max |K(x,x) - 1|
};

// Eq.-(23)-style normalized kernel psi_x psi_x'^* / (|psi_x| |psi_x'|).
// Grid points with psi_x = 0 fall back to an identity-diagonal row/column
// and are recorded in singular_points.
Kernel optimal_kernel(const WaveFunction& psi);

// Unnormalized rank-one Gram kernel psi_x psi_x'^* of an L2-normalized
// state. Not unit-diagonal; this is the kernel the measurement model
// produces when the fiber norms are kept explicit.
Kernel state_kernel(const WaveFunction& psi);

Kernel all_ones_kernel(const Grid& grid);
Kernel identity_kernel(const Grid& grid);

// Gram kernel of a smooth random field of unit vectors in C^r. Positive
// definite with unit diagonal by construction.
Kernel random_gram_kernel(const Grid& grid, int r, std::mt19937_64& rng);

// Covariant POVM with elements
//   M_j = (dx dp / 2 pi) D_j K D_j^dagger,  D_j = diag(e^{i p_j x}),
// acting on amplitude vectors. With a full-band momentum grid the elements
// sum to the identity exactly.
struct CovariantPovm {
  Kernel kernel;
  MomentumGrid pgrid;

  MatrixXcd element(int j) const;
  MatrixXcd element_at(double p) const;
  double completeness_residual() const;  // max-entry norm of (sum_j M_j) - I
};

CovariantPovm build_povm(Kernel kernel, const MomentumGrid& pgrid);

// max over interior bins j of the max-entry norm of
// V_p^dagger M_j V_p - M_{j + p/dp}, with V_p = e^{-i p x}.
double covariance_defect(const CovariantPovm& povm, double p);

// Born densities mu(p_j) = <psi, M_j psi> dx / dp on the outcome grid.
Eigen::VectorXd probability_distribution(const WaveFunction& psi,
                                         const CovariantPovm& povm);

// Density evaluated at an arbitrary (possibly off-grid) momentum.
double density_at(const WaveFunction& psi, const CovariantPovm& povm, double p);

// Phi(x) = sum_j e^{i x p_j} mu_j dp for x a multiple of dx.
Complex characteristic_function(const WaveFunction& psi,
                                const CovariantPovm& povm, double x);

// Upper envelope Phi_*(x) = sum_mu |psi_mu| |psi_{mu-x}| dx (off-grid
// samples treated as zero).
double characteristic_envelope(const WaveFunction& psi, double x);

// Even finite deviation measure, discretized on nodes that are multiples
// of a step. W(p) = -sum_k e^{i p x_k} w_k.
struct DeviationSpec {
  Eigen::VectorXd nodes;    // symmetric about 0
  Eigen::VectorXd weights;  // nonnegative, already include the node step

  double deviation_function(double p) const;  // W(p), real for even measures
};

// Gaussian density of scale sigma and total weight w0, sampled on
// multiples of step out to +/- extent.
DeviationSpec gaussian_deviation(double sigma, double w0, double step,
                                 double extent);

// Point mass at x = 0 with weight w0 (W is then constant -w0).
DeviationSpec point_mass_deviation(double w0);

DeviationSpec make_deviation(const Eigen::VectorXd& nodes,
                             const Eigen::VectorXd& weights);

// R_0{M} = sum_j W(p_j) mu(p_j) dp. The equivalent characteristic-function
// form -sum_k Phi(x_k) w_k is evaluated as a built-in cross-check; the two
// must agree to 1e-8.
double risk(const CovariantPovm& povm, const WaveFunction& psi,
            const DeviationSpec& dev);

// Holevo lower bound -sum_k Phi_*(x_k) w_k attained by the optimal kernel.
double optimal_risk_bound(const WaveFunction& psi, const DeviationSpec& dev);

// Shift-averaged probability of a bin set, divided by its measure |bins| dp.
// For a covariant POVM this ratio is state independent (invariant-measure
// property); boundary bins raise a warning flag in the report.
struct Lemma1Report {
  double ratio;           // shift-averaged probability / mes(bin set)
  bool boundary_warning;  // bin set touches the edge of the band
};

Lemma1Report lemma1_check(const CovariantPovm& povm, const WaveFunction& psi,
                          const std::vector<int>& bins);

}  // namespace qhl

#endif  // QHL_COVARIANT_POVM_HPP
