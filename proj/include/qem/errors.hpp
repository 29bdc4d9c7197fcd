// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <stdexcept>
#include <string>

namespace qem {

/// Base class for all errors raised by this library.  Every failure mode has
/// its own type so callers can react to exactly the condition they care
/// about; the message carries the offending values.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QEM_DEFINE_ERROR(NAME)          \
  class NAME : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

/// A Pauli-word, matrix, or vector index lies outside its valid range.
QEM_DEFINE_ERROR(IndexOutOfRange);
/// A probability-like amplitude lies outside [0, 1] (or [0, 1/2] where the
/// tighter bound applies).
QEM_DEFINE_ERROR(InvalidProbability);
/// A gate span does not fit inside the register it is promoted into.
QEM_DEFINE_ERROR(SpanOutOfRange);
/// Two objects that must share a dimension do not.
QEM_DEFINE_ERROR(DimensionMismatch);
/// An insertion-count partition is inconsistent with the circuit size.
QEM_DEFINE_ERROR(InvalidPartition);
/// A noise channel is singular where the construction needs to invert it.
QEM_DEFINE_ERROR(SingularNoise);
/// Two interpolation angles coincide modulo 2*pi, so the trigonometric
/// linear system cannot be solved.
QEM_DEFINE_ERROR(DegenerateAngles);
/// Two interpolation amplitudes coincide, so the amplitude-space linear
/// system cannot be solved.
QEM_DEFINE_ERROR(DegenerateAmplitudes);
/// A mitigation order outside the supported range was requested.
QEM_DEFINE_ERROR(UnsupportedOrder);
/// A pre-tailoring construction needs the two implementation angles to have
/// opposite signs.
QEM_DEFINE_ERROR(SameSignErrors);
/// An operation was asked to combine plans whose scopes are incompatible.
QEM_DEFINE_ERROR(ScopeMismatch);
/// No tabulated expression exists for the requested method/noise pair.
QEM_DEFINE_ERROR(NotTabulated);
/// A boundary or optimisation problem has no solution for the given targets.
QEM_DEFINE_ERROR(NoSolution);
/// A linear system that should determine coefficients is singular.
QEM_DEFINE_ERROR(SingularSystem);
/// A perturbation-factor set violates its sign constraints.
QEM_DEFINE_ERROR(InvalidFactors);
/// The requested working precision is below the supported minimum.
QEM_DEFINE_ERROR(InvalidPrecision);
/// A configuration file or value could not be parsed.
QEM_DEFINE_ERROR(InvalidConfig);
/// The requested operation does not support this noise family.
QEM_DEFINE_ERROR(UnsupportedNoise);

#undef QEM_DEFINE_ERROR

}  // namespace qem
