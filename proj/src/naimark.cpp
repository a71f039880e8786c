#include "qhl/naimark.hpp"

#include <cmath>
#include <numbers>

#include "qhl/covariant_povm.hpp"

namespace qhl {

namespace {

constexpr double kCrossBlockTol = 1e-12;

void require_picture(Picture have, Picture want, const char* what) {
  if (have != want) throw StateError(std::string(what) + ": wrong picture");
}

void require_halfline(const Grid& grid) {
  if (grid.domain != Domain::HalfLine)
    throw ConfigurationError("extended objects live over a half-line grid");
}

}  // namespace

ExtendedOperator extend_momentum(const DenseOperator& p_plus) {
  if (p_plus.boundary != Boundary::DirichletAtZero)
    throw ConfigurationError("extend_momentum expects the Dirichlet-tagged momentum");
  require_halfline(p_plus.grid);
  ExtendedOperator out;
  out.grid = p_plus.grid;
  out.picture = Picture::Tensor;
  out.plus = p_plus.mat;
  out.minus = -p_plus.mat;
  out.label = "extended_p";
  return out;
}

ExtendedState embed_halfline_state(const WaveFunction& psi_plus, int spin) {
  require_halfline(psi_plus.grid);
  if (spin != 0 && spin != 1) throw InvalidParameterError("spin must be 0 or 1");
  ExtendedState out;
  out.grid = psi_plus.grid;
  out.picture = Picture::Tensor;
  VectorXcd zero = VectorXcd::Zero(psi_plus.grid.n);
  out.plus = spin == 0 ? VectorXcd(psi_plus.scalar()) : zero;
  out.minus = spin == 1 ? VectorXcd(psi_plus.scalar()) : zero;
  return out;
}

ExtendedState ext_apply(const ExtendedOperator& op, const ExtendedState& psi) {
  if (op.grid != psi.grid) throw ShapeError("operator/state grid mismatch");
  if (op.picture != psi.picture)
    throw StateError("operator and state live in different pictures");
  ExtendedState out;
  out.grid = psi.grid;
  out.picture = psi.picture;
  out.plus = op.plus * psi.plus;
  out.minus = op.minus * psi.minus;
  return out;
}

Complex ext_inner_product(const ExtendedState& a, const ExtendedState& b) {
  if (a.grid != b.grid) throw ShapeError("inner product grid mismatch");
  if (a.picture != b.picture)
    throw StateError("inner product across pictures is undefined");
  return (a.plus.dot(b.plus) + a.minus.dot(b.minus)) * a.grid.dx;
}

double ext_norm(const ExtendedState& a) {
  return std::sqrt(std::real(ext_inner_product(a, a)));
}

ExtendedState pi1_transform(const ExtendedState& psi) {
  require_picture(psi.picture, Picture::Tensor, "pi1_transform");
  ExtendedState out = psi;
  out.picture = Picture::DirectSum;
  out.minus = psi.minus.reverse();
  return out;
}

ExtendedState pi1_inverse(const ExtendedState& psi) {
  require_picture(psi.picture, Picture::DirectSum, "pi1_inverse");
  ExtendedState out = psi;
  out.picture = Picture::Tensor;
  out.minus = psi.minus.reverse();
  return out;
}

ExtendedOperator pi1_transform(const ExtendedOperator& op) {
  require_picture(op.picture, Picture::Tensor, "pi1_transform");
  ExtendedOperator out = op;
  out.picture = Picture::DirectSum;
  out.minus = op.minus.reverse();  // R B R, both index axes flipped
  return out;
}

ExtendedOperator pi1_inverse(const ExtendedOperator& op) {
  require_picture(op.picture, Picture::DirectSum, "pi1_inverse");
  ExtendedOperator out = op;
  out.picture = Picture::Tensor;
  out.minus = op.minus.reverse();
  return out;
}

ExtendedOperator extended_optimal_element(const WaveFunction& psi,
                                          const MomentumGrid& pgrid, int j) {
  require_halfline(psi.grid);
  if (j < 0 || j >= pgrid.n) throw InvalidParameterError("outcome index out of range");
  const Grid& g = psi.grid;
  MatrixXcd k = optimal_kernel(psi).materialize();
  const double c = g.dx * pgrid.dp / (2.0 * std::numbers::pi);
  VectorXcd phase(g.n);
  for (int i = 0; i < g.n; ++i) phase[i] = std::polar(1.0, pgrid.p(j) * g.point(i));
  ExtendedOperator out;
  out.grid = g;
  out.picture = Picture::Tensor;
  out.plus = c * (phase.asDiagonal() * k * phase.conjugate().asDiagonal());
  out.minus = c * (phase.conjugate().asDiagonal() * k * phase.asDiagonal());
  out.label = "M_ext";
  return out;
}

MatrixXcd partial_trace_spin(const ExtendedOperator& m_ext) {
  require_picture(m_ext.picture, Picture::DirectSum, "partial_trace_spin");
  // Reflection plus conjugation maps the negative-axis block onto half-line
  // coordinates; the conjugation is the accompanying time reversal.
  MatrixXcd reflected = m_ext.minus.reverse().conjugate();
  return 0.5 * (m_ext.plus + reflected);
}

MatrixXcd partial_trace_spin(const MatrixXcd& m_ext, const Grid& grid) {
  const int n = grid.n;
  if (m_ext.rows() != 2 * n || m_ext.cols() != 2 * n)
    throw ShapeError("expected a 2n x 2n direct-sum matrix");
  double cross = std::max(m_ext.block(0, n, n, n).cwiseAbs().maxCoeff(),
                          m_ext.block(n, 0, n, n).cwiseAbs().maxCoeff());
  if (cross > kCrossBlockTol)
    throw StructureError("direct-sum matrix has nonzero cross blocks");
  ExtendedOperator packed;
  packed.grid = grid;
  packed.picture = Picture::DirectSum;
  packed.plus = m_ext.topLeftCorner(n, n);
  packed.minus = m_ext.bottomRightCorner(n, n);
  return partial_trace_spin(packed);
}

}  // namespace qhl
