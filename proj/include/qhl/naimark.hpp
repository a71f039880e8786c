#ifndef QHL_NAIMARK_HPP
#define QHL_NAIMARK_HPP

#include <string>

#include "qhl/grid.hpp"
#include "qhl/operators.hpp"

namespace qhl {

// Two pictures of the doubled space. Tensor: both blocks are literal
// half-line components (spin 0 / spin 1). DirectSum: the minus block
// represents the negative axis via reflection, stored ascending in the
// coordinate (index i holds position -(n-1-i) dx).
enum class Picture { Tensor, DirectSum };

struct ExtendedState {
  Grid grid;  // shared half-line grid of both blocks
  Picture picture = Picture::Tensor;
  VectorXcd plus;
  VectorXcd minus;
};

// Block-diagonal operator on the doubled space. The block-diagonal form is
// an invariant of the type; cross blocks never exist.
struct ExtendedOperator {
  Grid grid;
  Picture picture = Picture::Tensor;
  MatrixXcd plus;
  MatrixXcd minus;
  std::string label;
};

// p on block 0, -p on block 1. Requires the Dirichlet-tagged half-line
// momentum; any other boundary tag is a configuration error.
ExtendedOperator extend_momentum(const DenseOperator& p_plus);

ExtendedState embed_halfline_state(const WaveFunction& psi_plus, int spin);

ExtendedState ext_apply(const ExtendedOperator& op, const ExtendedState& psi);

// Both blocks carry full quadrature weight dx; the two summands of the
// direct sum are independent components, so no sample is double counted.
Complex ext_inner_product(const ExtendedState& a, const ExtendedState& b);
double ext_norm(const ExtendedState& a);

// The parity unitary acting on the spin-1 sector only: the minus block is
// reversed in place (states) or conjugated by the reversal permutation R
// (operators). Involution; exactly unitary in the discrete inner product.
ExtendedState pi1_transform(const ExtendedState& psi);
ExtendedState pi1_inverse(const ExtendedState& psi);
ExtendedOperator pi1_transform(const ExtendedOperator& op);
ExtendedOperator pi1_inverse(const ExtendedOperator& op);

// Outcome-j element of the phase-kernel covariant POVM lifted to the
// doubled space, in the tensor picture. The spin-1 sector measures the
// negated momentum, so its phases are conjugated:
//   plus  = (dx dp/2pi) D_j K D_j^dagger
//   minus = (dx dp/2pi) D_j^dagger K D_j
// with K the normalized phase kernel of psi.
ExtendedOperator extended_optimal_element(const WaveFunction& psi,
                                          const MomentumGrid& pgrid, int j);

// Reduction over the spin factor, direct-sum picture: the minus block is
// brought back to half-line coordinates by reflection plus conjugation
// (parity and time reversal), then averaged with the plus block. The 1/2
// keeps unit kernel diagonals; for odd real states the two terms coincide.
MatrixXcd partial_trace_spin(const ExtendedOperator& m_ext);

// Same reduction from an explicit 2n x 2n direct-sum matrix
// [plus, 0; 0, minus]. Nonzero cross blocks raise a structure error.
MatrixXcd partial_trace_spin(const MatrixXcd& m_ext, const Grid& grid);

}  // namespace qhl

#endif  // QHL_NAIMARK_HPP
