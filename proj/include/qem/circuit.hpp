// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qem/noise.hpp"
#include "qem/precision.hpp"

namespace qem {

/// One noisy gate: the rotation exp(i*Omega/2 * P_generator) followed by
/// its error channel.  The noise generator always equals the gate
/// generator (over-rotations are generated by the operator that generates
/// the gate).
struct GateSpec {
  std::uint64_t generator = 3;  // Pauli word on the local span
  Real target_angle = Real(0);  // Omega; the induced channel rotates by Omega
  int lowest_qubit = 1;         // 1-based, span is contiguous upward
  int span = 1;                 // number of qubits the generator acts on
  NoiseChannelSpec noise;
  Real exec_time = Real(1);  // in units of one elementary gate time
};

/// An ordered list of noisy gates on a fixed register.
struct Circuit {
  int n_qubits = 1;
  std::vector<GateSpec> gates;

  /// Sum of per-gate execution times.
  Real total_exec_time() const;
};

/// Builds the four-qubit benchmarking circuit: a forward ladder
/// Y(q1), T1(q1), S15(q1,q2), T1(q2), S15(q2,q3), T1(q3), S15(q3,q4),
/// T1(q4), Y(q4) followed by the mirrored inverse ladder, repeated
/// `n_repeat` times (18 gates per repeat).  T1 = exp(i*pi/8 * X) and
/// S15 = exp(i*pi/4 * Z (x) Z); the noise-free composition is the identity.
/// Every gate carries `noise` with its generator replaced by the gate's own
/// generator.
Circuit benchmark_circuit(long n_repeat, const NoiseChannelSpec& noise);

/// The native gate set: T = Z^(1/4), S = Z^(1/2), Z, sqrt(X), X, and the
/// two-qubit S15 = (Z (x) Z)^(1/2), as noise-free gate templates.
std::vector<GateSpec> native_gate_set();

/// Gates of a universally recognised gate set that the native set compiles.
enum class UniversalGate { T, H, CX, CZ };

/// Decomposition of a universal gate into native gates, in execution order.
/// T is native; CZ compiles to S15 then S*Z on each qubit; H to
/// sqrt(X), S, sqrt(X); CX to H(q1), CZ, H(q1) with control on qubit 2.
/// Global phases are dropped (transfer matrices are phase-blind).
std::vector<GateSpec> compile_universal(UniversalGate gate);

/// Serialises a circuit to a line-oriented text form.  First line
/// `qubits <n>`; one line per gate:
/// `gate <generator-index> <angle> <qubits...> <p> <phi>` where the angle
/// and amplitudes are decimal strings at working precision and qubits list
/// the contiguous span.
std::string circuit_to_text(const Circuit& circuit);

/// Parses the serialised form back; raises InvalidConfig on malformed
/// input.  Stochastic-only amplitudes reconstruct dephasing noise, angular
/// ones rotational noise, both together an over-rotation channel.
Circuit circuit_from_text(const std::string& text);

}  // namespace qem
