#include "qhl/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

namespace qhl {

namespace {

constexpr Complex kMinusI{0.0, -1.0};
constexpr double kDirichletPenalty = 1e6;

int zero_index(const Grid& grid) {
  // Index of the x = 0 sample. Half-line grids start at 0; whole-line grids
  // hit it at n/2 (n even, xmin = -L, dx = 2L/n).
  if (grid.domain == Domain::HalfLine) return 0;
  int i = grid.n / 2;
  if (std::abs(grid.point(i)) > 1e-12 * grid.dx)
    throw ConfigurationError("whole-line grid does not contain x = 0");
  return i;
}

}  // namespace

double DenseOperator::hermiticity_defect() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

WaveFunction apply(const DenseOperator& op, const WaveFunction& psi) {
  if (op.grid != psi.grid) throw ShapeError("operator/state grid mismatch");
  return make_state(psi.grid, MatrixXcd(op.mat * psi.amps));
}

DenseOperator momentum_operator(const Grid& grid, Boundary boundary) {
  if (boundary == Boundary::Periodic && grid.domain != Domain::WholeLine)
    throw ConfigurationError("periodic momentum requires a whole-line grid");

  const int n = grid.n;
  const double h = 1.0 / (2.0 * grid.dx);
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (int i = 1; i + 1 < n; ++i) {
    m(i, i + 1) = kMinusI * h;
    m(i, i - 1) = -kMinusI * h;
  }
  switch (boundary) {
    case Boundary::Free:
      // One-sided edge rows; these carry the discrete boundary term.
      m(0, 0) = -kMinusI * 2.0 * h;
      m(0, 1) = kMinusI * 2.0 * h;
      m(n - 1, n - 1) = kMinusI * 2.0 * h;
      m(n - 1, n - 2) = -kMinusI * 2.0 * h;
      break;
    case Boundary::DirichletAtZero: {
      // Central stencil with zero ghosts keeps the matrix anti-symmetric;
      // the x = 0 row and column are then projected out.
      m(0, 1) = kMinusI * h;
      m(n - 1, n - 2) = -kMinusI * h;
      int z = zero_index(grid);
      m.row(z).setZero();
      m.col(z).setZero();
      break;
    }
    case Boundary::Periodic:
      m(0, 1) = kMinusI * h;
      m(0, n - 1) = -kMinusI * h;
      m(n - 1, 0) = kMinusI * h;
      m(n - 1, n - 2) = -kMinusI * h;
      break;
  }
  return DenseOperator{std::move(m), grid, boundary, "p"};
}

DenseOperator position_operator(const Grid& grid) {
  MatrixXcd m = MatrixXcd::Zero(grid.n, grid.n);
  for (int i = 0; i < grid.n; ++i) m(i, i) = grid.point(i);
  return DenseOperator{std::move(m), grid, Boundary::Free, "x"};
}

DenseOperator potential_hamiltonian(const Grid& grid, double mass,
                                    const Eigen::VectorXd& potential,
                                    const std::string& label) {
  if (mass <= 0.0) throw InvalidParameterError("mass must be positive");
  if (potential.size() != grid.n) throw ShapeError("potential size mismatch");
  const int n = grid.n;
  const double k = 1.0 / (2.0 * mass * grid.dx * grid.dx);
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * k + potential[i];
    if (i > 0) m(i, i - 1) = -k;
    if (i + 1 < n) m(i, i + 1) = -k;
  }
  if (grid.domain == Domain::HalfLine) {
    // Dirichlet wall at x = 0: decouple the sample and push it out of the
    // low part of the spectrum.
    m.row(0).setZero();
    m.col(0).setZero();
    m(0, 0) = kDirichletPenalty;
  }
  return DenseOperator{std::move(m), grid, Boundary::DirichletAtZero, label};
}

DenseOperator harmonic_hamiltonian(const Grid& grid, double mass, double omega) {
  if (mass <= 0.0) throw InvalidParameterError("mass must be positive");
  if (omega < 0.0) throw InvalidParameterError("omega must be nonnegative");
  Eigen::VectorXd v(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.point(i);
    v[i] = 0.5 * mass * omega * omega * x * x;
  }
  DenseOperator h = potential_hamiltonian(grid, mass, v, "H0");
  return h;
}

double symmetry_defect(
    const DenseOperator& op,
    const std::vector<std::pair<WaveFunction, WaveFunction>>& pairs) {
  if (pairs.empty()) throw InvalidParameterError("symmetry_defect: empty trial set");
  double worst = 0.0;
  for (const auto& [phi, psi] : pairs) {
    Complex lhs = inner_product(phi, apply(op, psi));
    Complex rhs = inner_product(apply(op, phi), psi);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::string to_string(SelfAdjointness c) {
  switch (c) {
    case SelfAdjointness::SelfAdjoint: return "self-adjoint";
    case SelfAdjointness::SelfAdjointExtendable: return "self-adjoint-extendable";
    case SelfAdjointness::NoSelfAdjointExtension: return "no-self-adjoint-extension";
  }
  return "?";
}

std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::HalfLineMomentum: return "p_plus";
    case OperatorKind::NegatedHalfLineMomentum: return "neg_p_plus";
    case OperatorKind::ExtendedMomentum: return "extended_p";
    case OperatorKind::WholeLineMomentum: return "whole_line_p";
  }
  return "?";
}

namespace {

// One first-order component of a symbolic momentum operator:
// A = direction * (1/i) d/dx on [x_lo, x_hi].
struct OdeComponent {
  double direction;
  double x_lo;
  double x_hi;
  bool two_sided;  // true when both ends run to infinity (whole line)
};

// Integrates psi' = rate * psi with RK4 and classifies the L^2 tail.
// Returns the tail ratio used for the normalizability decision.
double tail_ratio_for(const OdeComponent& c, double rate, int steps) {
  const double h = (c.x_hi - c.x_lo) / steps;
  std::vector<double> psi(steps + 1);
  psi[0] = 1.0;
  for (int i = 0; i < steps; ++i) {
    // RK4 for the linear ODE; k-stages collapse to a scalar factor.
    double a = rate * h;
    double factor = 1.0 + a + a * a / 2.0 + a * a * a / 6.0 + a * a * a * a / 24.0;
    psi[i + 1] = psi[i] * factor;
  }
  auto mass = [&](int i0, int i1) {
    double s = 0.0;
    for (int i = i0; i < i1; ++i) s += psi[i] * psi[i] * h;
    return s;
  };
  if (!c.two_sided) {
    // Decay away from the finite endpoint: outer half over inner half.
    return std::sqrt(mass(steps / 2, steps) / mass(0, steps / 2));
  }
  // Whole line: normalizable iff the mass is concentrated in the middle.
  double outer = mass(0, steps / 4) + mass(3 * steps / 4, steps);
  double inner = mass(steps / 4, 3 * steps / 4);
  return std::sqrt(outer / inner);
}

std::vector<OdeComponent> components_for(OperatorKind op, double L) {
  switch (op) {
    case OperatorKind::HalfLineMomentum:
      return {{+1.0, 0.0, L, false}};
    case OperatorKind::NegatedHalfLineMomentum:
      return {{-1.0, 0.0, L, false}};
    case OperatorKind::ExtendedMomentum:
      // p_+ on the |0> sector, -p_+ on the |1> sector.
      return {{+1.0, 0.0, L, false}, {-1.0, 0.0, L, false}};
    case OperatorKind::WholeLineMomentum:
      return {{+1.0, -L, L, true}};
  }
  throw InvalidParameterError("unknown operator kind");
}

}  // namespace

DeficiencyReport deficiency_indices(OperatorKind op, double gamma,
                                    double domain_length, int ode_steps) {
  if (gamma <= 0.0) throw InvalidParameterError("gamma must be positive");
  const double threshold = 1e-3;

  DeficiencyReport rep;
  rep.op = op;
  rep.gamma = gamma;

  for (const auto& comp : components_for(op, domain_length)) {
    for (double sigma : {+1.0, -1.0}) {
      // A^dagger psi = sigma * i * gamma * psi  with A = s (1/i) d/dx
      // gives psi' = -(sigma / s) gamma psi.
      double rate = -(sigma / comp.direction) * gamma;
      double ratio = tail_ratio_for(comp, rate, ode_steps);
      rep.tail_ratios.push_back(ratio);
      if (ratio > threshold / 10.0 && ratio < threshold * 10.0)
        throw InconclusiveClassificationError(
            "deficiency tail ratio too close to threshold; increase the domain length");
      bool normalizable = ratio < threshold;
      if (normalizable) (sigma > 0 ? rep.n_plus : rep.n_minus) += 1;
    }
  }

  if (rep.n_plus == 0 && rep.n_minus == 0)
    rep.classification = SelfAdjointness::SelfAdjoint;
  else if (rep.n_plus == rep.n_minus)
    rep.classification = SelfAdjointness::SelfAdjointExtendable;
  else
    rep.classification = SelfAdjointness::NoSelfAdjointExtension;
  return rep;
}

namespace {

Eigen::MatrixXd require_real_hermitian(const DenseOperator& h) {
  if (h.hermiticity_defect() > 1e-8)
    throw InvalidParameterError("operator is not Hermitian");
  if (h.mat.imag().cwiseAbs().maxCoeff() > 1e-12)
    throw NumericalFailureError("eigensolver path expects a real symmetric matrix");
  return h.mat.real();
}

}  // namespace

std::pair<double, WaveFunction> ground_state(const DenseOperator& hamiltonian) {
  Eigen::MatrixXd m = require_real_hermitian(hamiltonian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalFailureError("eigensolver did not converge");
  Eigen::VectorXd vec = solver.eigenvectors().col(0);
  double energy = solver.eigenvalues()[0];

  // Quadrature normalization and deterministic phase.
  vec /= std::sqrt(hamiltonian.grid.dx);
  double peak = vec.cwiseAbs().maxCoeff();
  for (int i = 0; i < vec.size(); ++i) {
    if (std::abs(vec[i]) > 1e-8 * peak) {
      if (vec[i] < 0) vec = -vec;
      break;
    }
  }
  return {energy, make_state(hamiltonian.grid, VectorXcd(vec.cast<Complex>()))};
}

Eigen::VectorXd spectrum(const DenseOperator& hamiltonian) {
  Eigen::MatrixXd m = require_real_hermitian(hamiltonian);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalFailureError("eigensolver did not converge");
  return solver.eigenvalues();
}

WaveFunction halfline_ground_state_closed_form(const Grid& grid, double mass,
                                               double omega) {
  if (grid.domain != Domain::HalfLine)
    throw ConfigurationError("closed form is defined on the half line");
  if (mass <= 0.0 || omega <= 0.0)
    throw InvalidParameterError("mass and omega must be positive");
  const double a = mass * omega;
  const double c = 2.0 * std::pow(a * a * a / std::numbers::pi, 0.25);
  VectorXcd amps(grid.n);
  for (int i = 0; i < grid.n; ++i) {
    double x = grid.point(i);
    amps[i] = c * x * std::exp(-0.5 * a * x * x);
  }
  return make_state(grid, amps);
}

}  // namespace qhl
