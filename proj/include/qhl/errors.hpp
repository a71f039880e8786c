#ifndef QHL_ERRORS_HPP
#define QHL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qhl {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad numeric argument (non-positive length, gamma <= 0, ...).
struct InvalidParameterError : Error {
  using Error::Error;
};

// Mismatched grids / dimensions between operands.
struct ShapeError : Error {
  using Error::Error;
};

// Incompatible boundary condition, domain kind, or run configuration.
struct ConfigurationError : Error {
  using Error::Error;
};

// Zero-norm state where a direction is required.
struct DegenerateStateError : Error {
  using Error::Error;
};

// Momentum beyond the Nyquist band of the spatial grid.
struct AliasingError : Error {
  using Error::Error;
};

// Kernel fails positive semidefiniteness (or unit diagonal where required).
struct InvalidKernelError : Error {
  using Error::Error;
};

// Operation applied in the wrong picture / object state.
struct StateError : Error {
  using Error::Error;
};

// Extended operator not block diagonal where the reduction requires it.
struct StructureError : Error {
  using Error::Error;
};

// Density operator / state fails normalization preconditions.
struct InvalidStateError : Error {
  using Error::Error;
};

// Deviation measure fails the evenness hypothesis.
struct InvalidDeviationError : Error {
  using Error::Error;
};

// Supplied "ground state" is not an eigenstate of the Hamiltonian.
struct InvalidGroundError : Error {
  using Error::Error;
};

// Eigensolver failure or other numeric breakdown, with diagnostics in what().
struct NumericalFailureError : Error {
  using Error::Error;
};

// Deficiency-index tail classification too close to the threshold.
struct InconclusiveClassificationError : Error {
  using Error::Error;
};

}  // namespace qhl

#endif  // QHL_ERRORS_HPP
