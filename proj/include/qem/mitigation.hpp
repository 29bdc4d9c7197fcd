// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qem/circuit.hpp"
#include "qem/noise.hpp"
#include "qem/precision.hpp"

namespace qem {

/// Mitigation method families.  The KF/NA distinction (noise-agnostic
/// extrapolation coefficients vs noise-aware exact coefficients) is a flag
/// on the plan, not a separate method.
enum class Method {
  Unmitigated,
  CLM,    // custom-channel local mitigation
  CHILM,  // custom-channel + hidden-inverse local mitigation
  CHISM,  // custom-channel + hidden-inverse synchronous mitigation
  CIILM,  // custom-channel + identity-insertion local mitigation
  CSM,    // custom-channel synchronous mitigation
  IIAM,   // identity-insertion asynchronous mitigation
  IILM,   // identity-insertion local mitigation
  IISM,   // identity-insertion synchronous mitigation
  LC,     // linear-combination pre-tailoring of opposed rotation errors
  TIILM,  // tuned identity-insertion local mitigation
};

/// How a plan's variants attach to a circuit: per gate independently
/// (Local), the same modification on every gate per whole-circuit variant
/// (Synchronous), or whole-circuit variants that single out subsets of
/// gates (Asynchronous).
enum class PlanScope { Local, Synchronous, Asynchronous };

/// One way of realising a gate's noise-free action with a modified error
/// channel.
struct GateVariant {
  Real custom_angle = Real(0);       // channel-angle addition theta_c
  Real custom_stochastic = Real(0);  // custom stochastic strength
  long identity_insertions = 0;      // m pairs of gate+inverse insertions
  bool hidden_inverse = false;       // implement via the inverse generator
  Real exec_time_ratio = Real(1);    // variant duration / gate duration
};

/// Effective rotational amplitude of the variant channel for a gate whose
/// own error has rotational amplitude phi: (2m+1)*((+-phi) + theta_c), the
/// sign flipped by a hidden inverse.
Real effective_phi(const GateVariant& variant, const NoiseChannelSpec& base);

/// Effective stochastic amplitude: the base amplitude amplified through
/// 2m+1 applications, then composed with the custom stochastic strength.
Real effective_p(const GateVariant& variant, const NoiseChannelSpec& base);

/// A gate variant together with its quasi-probability coefficient.
struct WeightedVariant {
  GateVariant variant;
  Real coefficient;
};

/// A whole-circuit variant class for Synchronous/Asynchronous plans.  For
/// Synchronous plans `uniform` applies to every gate and the class has one
/// member.  For Asynchronous plans `insertion_partition` lists the
/// insertion counts handed to distinct gates (all other gates unmodified)
/// and `multiplicity` counts the assignments; `coefficient` is per member.
struct CircuitClass {
  GateVariant uniform;
  std::vector<long> insertion_partition;
  Real coefficient;
  BigInt multiplicity = 1;
  Real exec_time_ratio = Real(1);
};

/// A mitigation recipe: the linear combination of noisy circuit variants
/// whose expectation estimates the noise-free one.
struct MitigationPlan {
  Method method = Method::Unmitigated;
  PlanScope scope = PlanScope::Local;
  int order = 0;
  bool noise_aware = true;
  bool biased = false;
  bool optimizer_fallback = false;

  /// Local scope: variant lists per gate.  When `uniform_local` is true
  /// there is a single shared list applied to every gate.
  std::vector<std::vector<WeightedVariant>> per_gate_variants;
  bool uniform_local = true;

  /// Synchronous/Asynchronous scope.
  std::vector<CircuitClass> circuit_variants;

  /// TIILM insertion schedule (m-values, starting at 0).
  std::vector<long> m_values;

  /// The channel the plan was generated for (residual channel for plans
  /// stacked on pre-tailoring).
  NoiseChannelSpec built_for;

  /// Pre-tailoring stage: when set, each physical gate application replaces
  /// its rotational error by a stochastic mixture of the two implementation
  /// angles, leaving the residual stochastic channel `built_for`.
  bool has_lc_stage = false;
  Real lc_phi0 = Real(0);
  Real lc_phi1 = Real(0);
  Real lc_prob1 = Real(0);      // probability of the second implementation
  Real lc_residual_p = Real(0);

  /// Per-gate sum of |coefficients| (Local) or whole-plan sum
  /// (Synchronous/Asynchronous with multiplicities).
  Real local_cost() const;
};

/// Plan with a single unmodified variant of coefficient 1.
MitigationPlan unmitigated_plan();

/// Extrapolation coefficients against amplification factors 2m+1:
/// c_i = prod_{m != i} (2m+1)/(2(m-i)) for i, m in 0..order.
std::vector<Real> kf_coefficients(int order);

/// Interpolation coefficients through stochastic amplitudes xs:
/// c_i = prod_{m != i} x_m/(x_m - x_i).  Raises DegenerateAmplitudes when
/// two amplitudes coincide.
std::vector<Real> amplitude_lagrange(const std::vector<Real>& xs);

/// Interpolation coefficients through channel angles psis:
/// c_i = prod_{j != i} sin(psi_j/2)/sin((psi_j - psi_i)/2).  Raises
/// DegenerateAngles when two angles coincide modulo 2*pi.
std::vector<Real> trig_lagrange(const std::vector<Real>& psis);

/// Custom-channel local mitigation.  SN: the original gate and a
/// full-strength custom stochastic variant.  RE/ORE: custom channel angles
/// {0, pi/2, 3pi/2}.  `clifford_timing` charges the third ORE variant an
/// extra time step.  Raises SingularNoise on non-invertible channels.
MitigationPlan clm_plan(const NoiseChannelSpec& spec,
                        bool clifford_timing = false);

/// Custom-channel + hidden-inverse local mitigation (RE/ORE): original,
/// custom pi, and hidden-inverse variants.
MitigationPlan chilm_plan(const NoiseChannelSpec& spec);

/// Synchronous variant of the above (RE): custom channel angles
/// 2*i*pi/n_variants for 0 < i < n_variants plus the hidden inverse;
/// unbiased when n_variants = 2*N.
MitigationPlan chism_plan(const NoiseChannelSpec& spec, int n_variants);

/// Custom-channel + identity-insertion local mitigation (RE): tailoring
/// shifts the channel angle by 2*pi/3 and insertions scale the shifted
/// angle by 2j+1.
MitigationPlan ciilm_plan(const NoiseChannelSpec& spec);

/// Custom-channel synchronous mitigation.  SN: amplified amplitudes
/// p + sin^2(m*pi/(2*order))*(1-(1+a)p); RE: custom angles (2i-1)*pi/order.
/// Unbiased at order = N (SN) or 2N (RE).
MitigationPlan csm_plan(const NoiseChannelSpec& spec, int order);

/// Identity-insertion asynchronous mitigation: whole-circuit classes
/// distributing up to `order` insertions over distinct gates, with the
/// tabulated per-class coefficients.  Supports orders 0..5.
MitigationPlan iiam_plan(long n_gates, int order);

/// Identity-insertion local mitigation.  Variant j carries j insertions.
/// Noise-agnostic (KF) coefficients support any order; noise-aware ones
/// support order 1 (SN) or 2 (RE).
MitigationPlan iilm_plan(const NoiseChannelSpec& spec, int order,
                         bool noise_aware);

/// Identity-insertion synchronous mitigation: variant j inserts j
/// identities before every gate.
MitigationPlan iism_plan(const NoiseChannelSpec& spec, int order,
                         bool noise_aware);

/// Pre-tailoring for opposed rotational errors: mixes two implementations
/// with error angles phi0 (the spec's own) and phi1 of the opposite sign.
/// Returns the mixing plan (sampling cost exactly 1) and the residual
/// stochastic channel.  Raises SameSignErrors unless phi0*phi1 < 0 and
/// DegenerateAngles when sin(phi0) = sin(phi1).
std::pair<MitigationPlan, NoiseChannelSpec> lc_pretailor(
    const NoiseChannelSpec& spec, const Real& phi0, const Real& phi1);

/// Tuned identity-insertion local mitigation with an explicit insertion
/// schedule: SN takes m = (0, m1), RE takes m = (0, m1, m2), strictly
/// increasing.  An empty list triggers the optimizer.
MitigationPlan tiilm_plan(const NoiseChannelSpec& spec, long n_gates,
                          const std::vector<long>& m_values);

/// Result of the TIILM schedule search.
struct TiilmOptimum {
  std::vector<long> m_values;
  bool fallback = false;  // zero noise: analytic seed diverged, capped
};

/// Minimises the runtime scaling over integer insertion schedules.  The
/// search is seeded by the analytic small-noise and large-circuit schedule
/// estimates and scans a +-50% window around both; ties break towards the
/// lexicographically smallest schedule.
TiilmOptimum optimize_tiilm(const NoiseChannelSpec& spec, long n_gates);

/// Cartesian product of two plans on the same gates: coefficients multiply,
/// variant modifications stack, exec ratios add minus one.  Composing onto
/// a pre-tailoring plan instead annotates the other plan with the
/// tailoring stage (the mixture refreshes per physical application, so it
/// folds into the noise model rather than the variant product).  Raises
/// ScopeMismatch for unsupported scope combinations.
MitigationPlan compose_plans(const MitigationPlan& a,
                             const MitigationPlan& b);

/// Packs one local plan per gate into a single per-gate-resolved plan.
/// Global cost is the product of local costs; expanded variant indices map
/// to per-gate choices in mixed radix (gate 1 least significant).
MitigationPlan concatenate_local(const std::vector<MitigationPlan>& plans);

/// Documented text form of a plan (method, parameters, coefficient digit
/// strings) for golden-file comparisons.
std::string plan_to_text(const MitigationPlan& plan);

}  // namespace qem
