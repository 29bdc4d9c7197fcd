// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>
#include <vector>

#include "qem/precision.hpp"

namespace qem {

/// Families of characterised gate-level error channels.
///
/// SN: stochastic noise, a probabilistic application of an error operator
///     whose second application relaxes back with closure parameter a.
/// RE: rotational (coherent over-rotation) error by angle phi about a Pauli
///     generator.
/// ORE: simultaneous stochastic and rotational error about the same
///     generator.
/// Dephasing: SN with a = 1 (self-inverse error operator).
enum class NoiseKind { SN, RE, ORE, Dephasing };

/// Amplitudes of a uniform gate-level error channel.  Only the amplitudes
/// meaningful for `kind` are nonzero.
struct NoiseChannelSpec {
  NoiseKind kind = NoiseKind::SN;
  Real p = Real(0);        // stochastic amplitude (SN/ORE/Dephasing)
  Real phi = Real(0);      // rotational amplitude in radians (RE/ORE)
  Real a_param = Real(1);  // closure parameter in [0, 1] (SN)
  std::uint64_t generator = 3;  // Pauli word generating the error (RE/ORE)

  static NoiseChannelSpec sn(const Real& p, const Real& a,
                             std::uint64_t generator = 3);
  static NoiseChannelSpec re(const Real& phi, std::uint64_t generator = 3);
  static NoiseChannelSpec ore(const Real& p, const Real& phi,
                              std::uint64_t generator = 3);
  static NoiseChannelSpec dephasing(const Real& p,
                                    std::uint64_t generator = 3);

  /// Calibrates an ORE channel from a Gaussian-distributed rotation angle
  /// with mean mu and standard deviation sigma: phi = mu and
  /// p = (1 - e^{-sigma^2/2})/2.
  static NoiseChannelSpec gaussian_ore(const Real& mu, const Real& sigma,
                                       std::uint64_t generator = 3);

  /// True when both amplitudes vanish.
  bool is_noise_free() const;
};

/// Coefficients f_k of the canonical channel decomposition: the channel is
/// f_0 * identity-like part plus f_{k>0} quasi-channel parts.  They sum to 1
/// and satisfy f_0(0) = 1, f_{k>0}(0) = 0.
std::vector<Real> decomposition(const NoiseChannelSpec& spec);

/// A complex number stored as magnitude and phase, avoiding cancellation
/// when the phase later enters sine products.
struct ComplexValue {
  Real magnitude;
  Real phase;  // radians
};

/// Non-trivial spectrum of the channel on the subspace anticommuting with
/// the generator, preceded by the unit eigenvalue: SN -> {1, 1-(1+a)p};
/// RE -> {1, e^{i phi}, e^{-i phi}}; ORE -> {1, (1-2p)e^{+-i phi}};
/// Dephasing -> {1, 1-2p}.
std::vector<ComplexValue> eigenvalues(const NoiseChannelSpec& spec);

/// Leading-order circuit-level noise level: SN/Dephasing -> 2pN;
/// RE -> N|phi|; ORE -> 2pN + N|phi|.
Real noise_level(const NoiseChannelSpec& spec, long n_gates);

/// Worst-case circuit-level bias bound without mitigation:
/// |1 - f_0^N| + (sum_k |f_k|)^N - |f_0|^N.
Real unmitigated_proxy_bias(const NoiseChannelSpec& spec, long n_gates);

/// Number of length-N channel sequences realising a given error pattern.
/// For SN (and any single-error-operator channel) `partition` lists the
/// occupation numbers l_k with sum N and the count is N!/prod(l_k!).  For RE
/// `partition` is the single net winding class {k} with k <= 2N and the
/// count follows the binomial sum over paired insertions.  Raises
/// InvalidPartition when the occupations are inconsistent.
BigInt multiplicity(NoiseKind kind, long n_gates,
                    const std::vector<long>& partition);

/// Amplitude of the composition of two stochastic channels with a common
/// closure parameter: p1 + p2 - (1+a) p1 p2.
Real compose_stochastic(const Real& p1, const Real& p2, const Real& a);

/// Amplitude after an odd number k of consecutive applications of the same
/// stochastic channel: (1 - (1 - (1+a)p)^k)/(1+a).
Real amplified_stochastic(const Real& p, const Real& a, long k);

}  // namespace qem
