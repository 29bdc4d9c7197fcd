// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qem/precision.hpp"

namespace qem {

/// A tensor product of single-qubit Pauli factors, identified by a base-4
/// index.  Digit m-1 (with digit 0 least significant) selects the factor on
/// qubit m: 0 -> identity, 1 -> X, 2 -> Y, 3 -> Z.  Qubit 1 is therefore the
/// rightmost tensor factor.
struct PauliWord {
  std::uint64_t index = 0;
  int n_qubits = 1;

  /// The base-4 digit for `qubit` (1-based); 0..3 as above.
  int factor(int qubit) const;

  /// Human-readable form, highest qubit first, e.g. "XY" for two qubits.
  std::string to_string() const;
};

/// Builds the Pauli word for `index` on an `n_qubits` register.  Raises
/// IndexOutOfRange unless 0 <= index < 4^n_qubits and n_qubits >= 1.
PauliWord pauli_word(std::uint64_t index, int n_qubits);

/// Result of multiplying two Pauli words: the product word index and the
/// power of the imaginary unit in front of it (P_a * P_b = i^phase * P_k).
struct PauliProduct {
  std::uint64_t index;
  int phase_quarter;  // exponent of i, reduced modulo 4
};

/// Digit-wise product of two Pauli words on the same register size.
PauliProduct pauli_product(std::uint64_t a, std::uint64_t b, int n_qubits);

/// True when the two words anticommute (odd number of digit positions with
/// distinct non-identity factors).
bool anticommutes(std::uint64_t a, std::uint64_t b, int n_qubits);

/// Vector of Pauli-operator expectation values for an n-qubit state, indexed
/// by Pauli-word index.  Entry 0 is the trace (1 for a normalised state).
struct BlochVector {
  int n_qubits = 1;
  std::vector<Real> entries;

  std::size_t dim() const { return entries.size(); }
};

/// Dense real matrix acting on Bloch vectors by left multiplication.
/// Composition of two channels is the matrix product (later channel on the
/// left).  A trace-preserving channel has top row (1, 0, ..., 0); a
/// physical (CPTP) channel has all entries in [-1, 1].
struct TransferMatrix {
  int n_qubits = 1;
  std::vector<Real> entries;  // row-major, dimension 4^n_qubits

  std::size_t dim() const;
  Real& at(std::size_t row, std::size_t col);
  const Real& at(std::size_t row, std::size_t col) const;

  static TransferMatrix identity(int n_qubits);
};

/// Transfer matrix of the noisy single-qubit rotation about Pauli axis
/// `axis` (1 -> X, 2 -> Y, 3 -> Z) by channel angle `theta`, followed by a
/// stochastic application of the same Pauli with probability `p`.  Raises
/// IndexOutOfRange for an invalid axis and InvalidProbability for p outside
/// [0, 1].
TransferMatrix basis_ptm(int axis, const Real& theta, const Real& p);

/// Transfer matrix of the noisy two-qubit rotation generated by Z tensor Z,
/// with the same angle and stochastic-error conventions as basis_ptm.
TransferMatrix zz_ptm(const Real& theta, const Real& p);

/// Embeds `tm` into an `n_total`-qubit register so that its lowest qubit
/// becomes `lowest_target_qubit` (1-based) and identity acts elsewhere.
/// Raises SpanOutOfRange when the gate does not fit.
TransferMatrix promote(const TransferMatrix& tm, int lowest_target_qubit,
                       int n_total);

/// Matrix product a * b (channel b applied first).  Raises
/// DimensionMismatch when register sizes differ.
TransferMatrix compose(const TransferMatrix& a, const TransferMatrix& b);

/// Applies a transfer matrix to a Bloch vector.  Raises DimensionMismatch
/// when register sizes differ.
BlochVector apply(const TransferMatrix& tm, const BlochVector& v);

/// Bloch vector of the all-|0> product state: the tensor power of
/// (1, 0, 0, 1) per qubit, so entry i is 1 exactly when every base-4 digit
/// of i is 0 or 3.
BlochVector initial_bloch(int n_qubits);

/// Expectation values read off qubit 1 of a Bloch vector.
struct QubitReadout {
  Real x, y, z;
  Real norm;  // identity expectation; 1 for a normalised state
};

/// Reads entries 1, 2, 3 (X, Y, Z on qubit 1) and 0 (normalisation).
QubitReadout measure_qubit1(const BlochVector& v);

/// In-place application of the noisy rotation e^{i*theta/2 * P_generator}
/// with stochastic error probability `p`, directly on the Bloch vector.
/// Touches only the entries whose Pauli words anticommute with the
/// generator: each such entry pairs with its product partner and rotates in
/// that two-dimensional subspace, scaled by (1 - 2p).  Equivalent to
/// multiplying by the promoted dense matrix but costs O(4^n) per gate.
void apply_pauli_rotation(BlochVector& v, std::uint64_t generator,
                          const Real& theta, const Real& p);

/// In-place application of the stochastic channel that applies P_generator
/// with probability `p` (the rotation above with theta = 0).
void apply_stochastic_pauli(BlochVector& v, std::uint64_t generator,
                            const Real& p);

}  // namespace qem
