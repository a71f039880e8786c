#ifndef QHL_OPERATORS_HPP
#define QHL_OPERATORS_HPP

#include <string>
#include <utility>
#include <vector>

#include "qhl/grid.hpp"

namespace qhl {

enum class Boundary {
  DirichletAtZero,  // state component at x = 0 projected out
  Free,             // one-sided stencils at the edges, domain unrestricted
  Periodic,         // wrap-around stencil, whole line only
};

struct DenseOperator {
  MatrixXcd mat;  // acts on amplitude vectors; quadrature weight dx lives
                  // in the inner product, not here
  Grid grid;
  Boundary boundary;
  std::string label;

  double hermiticity_defect() const;  // max-entry norm of mat - mat^dagger
};

WaveFunction apply(const DenseOperator& op, const WaveFunction& psi);

// (1/i) d/dx with central differences; boundary rows per the Boundary tag.
DenseOperator momentum_operator(const Grid& grid, Boundary boundary);

// Diagonal multiplication by x.
DenseOperator position_operator(const Grid& grid);

// p^2/(2m) + m omega^2 x^2 / 2 with a 3-point kinetic stencil. Half-line
// grids get a Dirichlet wall at x = 0; both domains have implicit Dirichlet
// truncation at the outer edge.
DenseOperator harmonic_hamiltonian(const Grid& grid, double mass, double omega);

// Same kinetic term with an arbitrary potential sampled on the grid.
DenseOperator potential_hamiltonian(const Grid& grid, double mass,
                                    const Eigen::VectorXd& potential,
                                    const std::string& label = "H");

// max over pairs of |<phi, A psi> - <A phi, psi>|. Quantifies the
// integration-by-parts boundary term for states outside the operator domain.
double symmetry_defect(const DenseOperator& op,
                       const std::vector<std::pair<WaveFunction, WaveFunction>>& pairs);

// --- Deficiency-index analysis -------------------------------------------
//
// The symmetric/self-adjoint distinction lives in the continuum domain of
// the operator, which finite Hermitian matrices cannot express. The
// deficiency equation A^dagger psi = +/- i gamma psi is therefore solved as
// an ODE on the truncated domain and each candidate solution is classified
// as normalizable from its L^2 tail decay.

enum class OperatorKind {
  HalfLineMomentum,          // p_+ = (1/i) d/dx on [0, infinity)
  NegatedHalfLineMomentum,   // -p_+
  ExtendedMomentum,          // p_+ (x) |0><0| - p_+ (x) |1><1|
  WholeLineMomentum,         // (1/i) d/dx on the real line
};

enum class SelfAdjointness {
  SelfAdjoint,
  SelfAdjointExtendable,
  NoSelfAdjointExtension,
};

struct DeficiencyReport {
  OperatorKind op;
  int n_plus = 0;
  int n_minus = 0;
  double gamma = 0.0;
  SelfAdjointness classification;
  std::vector<double> tail_ratios;  // one per candidate solution examined
};

std::string to_string(SelfAdjointness c);
std::string to_string(OperatorKind k);

DeficiencyReport deficiency_indices(OperatorKind op, double gamma,
                                    double domain_length = 20.0,
                                    int ode_steps = 4096);

// Lowest eigenpair of a Hermitian operator. Phase fixed so the first
// amplitude above threshold is real positive.
std::pair<double, WaveFunction> ground_state(const DenseOperator& hamiltonian);

// Full ascending spectrum (used by tests and diagnostics).
Eigen::VectorXd spectrum(const DenseOperator& hamiltonian);

// Closed-form half-line harmonic ground state 2 ((m w)^3/pi)^{1/4} x e^{-m w x^2/2}.
WaveFunction halfline_ground_state_closed_form(const Grid& grid, double mass,
                                               double omega);

}  // namespace qhl

#endif  // QHL_OPERATORS_HPP
