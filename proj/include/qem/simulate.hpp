// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>

#include "qem/circuit.hpp"
#include "qem/mitigation.hpp"
#include "qem/pauli.hpp"

namespace qem {

/// Single-qubit observable read from qubit 1; values match Bloch indices.
enum class Observable { X = 1, Y = 2, Z = 3 };

/// Output of a deterministic circuit simulation.
struct SimulationResult {
  BlochVector bloch_out;  // mitigated (or plain) final Bloch vector
  Real bias_x = Real(0);  // |noise-free - mitigated| expectation gaps
  Real bias_y = Real(0);
  Real bias_z = Real(0);
  Real benchmark_bias = Real(0);  // root mean square of the three biases
  Real norm_check = Real(0);      // identity component; 1 when trace kept
};

/// Simulates the noisy circuit without mitigation.
SimulationResult simulate(const Circuit& circuit);

/// Simulates the circuit under a mitigation plan.  Local plans combine the
/// weighted gate variants into one linear pass; synchronous and
/// asynchronous plans simulate each circuit variant and combine the
/// readouts with the plan coefficients.  Plans carrying a pre-tailoring
/// stage see each gate's channel replaced by the exact residual stochastic
/// channel.  Raises DimensionMismatch when a per-gate plan does not match
/// the gate count.
SimulationResult simulate(const Circuit& circuit,
                          const MitigationPlan& plan);

/// Quasi-probability sampling estimate of one observable.
struct MonteCarloEstimate {
  double mean = 0;       // sampling-cost-scaled signed average
  double std_error = 0;  // sampling-cost-scaled standard error of the mean
  long n_runs = 0;
  double sampling_cost_applied = 1;
};

/// Monte-Carlo execution of a mitigation plan: every run samples gate (or
/// circuit) variants with probability |c|/C, samples each stochastic
/// channel branch explicitly, applies coherent rotations exactly, and
/// scales the signed average by the sampling cost.  Runs in double
/// precision; deterministic for a given seed regardless of worker count
/// (0 workers means use the hardware concurrency).  Raises UnsupportedNoise
/// for stochastic channels whose error operator is not self-inverse
/// (a != 1), which cannot be sampled as a branch.
MonteCarloEstimate monte_carlo(const Circuit& circuit,
                               const MitigationPlan& plan,
                               Observable observable, long n_runs,
                               std::uint64_t seed, int n_workers = 0);

/// Expected second moment of a single signed Monte-Carlo outcome, computed
/// exactly by propagating the doubled register E[v (x) v] through the
/// per-gate mixture of (variant, branch) realisations.  Supports local and
/// synchronous plans without a pre-tailoring stage (ScopeMismatch
/// otherwise).  The predicted estimator variance at n runs is
/// C^2 (second_moment - (mitigated/C)^2)/n.
double single_run_second_moment(const Circuit& circuit,
                                const MitigationPlan& plan,
                                Observable observable);

}  // namespace qem
