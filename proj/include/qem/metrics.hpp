// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qem/mitigation.hpp"
#include "qem/noise.hpp"
#include "qem/precision.hpp"

namespace qem {

/// Identifies one row of the method catalogue: the method, the coefficient
/// mode where both exist (noise-aware vs fixed-fraction extrapolation), and
/// whether a pre-tailoring stage converts rotational into stochastic noise
/// first.
struct MethodSelector {
  Method method = Method::Unmitigated;
  bool noise_aware = true;
  bool lc_stage = false;
};

/// Canonical row name: "unmitigated", "clm", "chilm", "chism", "ciilm",
/// "csm", "iiam", "iilm-kf", "iilm-na", "iism-kf", "iism-na", "lc",
/// "lc-clm", "lc-csm", "lc-iiam", "lc-iism", "lc-tiilm", "tiilm".
std::string selector_name(const MethodSelector& selector);

/// Inverse of selector_name.  Raises InvalidConfig for unknown names.
MethodSelector selector_from_name(const std::string& name);

/// Quantitative summary of a mitigation plan on an N-gate circuit.
struct MetricsReport {
  Real sampling_cost = Real(1);    // C: product of per-gate |c| sums, or
                                   // the whole-circuit sum for global plans
  Real length_factor = Real(1);    // F_L: mean execution-length ratio
  Real width_factor = Real(1);     // F_W: extra-register ratio (1 here)
  Real area_factor = Real(1);      // F_A = F_L * floor(F_W)
  Real runtime_scaling = Real(1);  // S = C^2 F_A (repetitions x length)
  Real mitigated_noise_level = Real(0);
  std::optional<Real> mitigated_proxy_bias;  // empty: no closed form
};

/// Evaluates cost, scale factors and runtime scaling of a plan.  A positive
/// circuit execution time selects the execution-dominated runtime branch
/// S = C^2 F_A; zero selects the initialisation-dominated branch S = C^2.
MetricsReport metrics(const MitigationPlan& plan,
                      const Real& circuit_exec_time, long n_gates);

/// Leading-order closed form of the bias proxy left after mitigation, on a
/// uniform circuit of n_gates noisy gates.  Unbiased rows return 0; rows
/// whose residual has no closed form (partial-order custom-channel
/// mitigation, partial-order noise-aware synchronous insertion) return an
/// empty optional.
std::optional<Real> mitigated_proxy_bias(const MethodSelector& selector,
                                         const NoiseChannelSpec& spec,
                                         long n_gates, int order);

/// Columns of the closed-form metric tables.
enum class TableRegime {
  Level,         // mitigated noise level
  SmallNoise,    // runtime scaling as the noise level goes to zero
  LargeCircuit,  // runtime scaling in the large-circuit regime
  Boundary       // maximum tolerable noise level
};

/// Inputs for the tabulated expressions; each cell reads the fields it
/// needs and ignores the rest.
struct TableInputs {
  Real epsilon = Real(0);           // circuit noise level
  long n_gates = 1;                 // N
  int order = 1;                    // M for the order-controlled rows
  Real a_param = Real(1);           // stochastic closure parameter
  Real target_scaling = Real(2);    // S* for Boundary cells
  Real target_bias = Real("1e-6");  // bias tolerance for Boundary cells
};

/// Evaluates one cell of the stochastic-noise or rotational-noise metric
/// table.  Raises NotTabulated when the (selector, kind) row is absent.
Real table_metrics(const MethodSelector& selector, NoiseKind kind,
                   TableRegime regime, const TableInputs& inputs);

/// Largest noise level at which the method meets both the bias tolerance
/// and the runtime-scaling budget, solved numerically on the method's
/// asymptotic model (the insertion order is eliminated through the bias
/// equation where applicable).  Raises NoSolution when target_scaling is
/// below the method's minimum scaling, NotTabulated for absent rows, and
/// InvalidConfig for out-of-range targets.
Real noise_boundary(const MethodSelector& selector, NoiseKind kind,
                    const Real& target_bias, const Real& target_scaling,
                    long n_gates, const Real& a_param = Real(1));

/// Terminating Gauss series 2F1(a, -m; c; z) = sum_{k<=m} of the rising-
/// factorial ratio; exact because the second parameter is a non-positive
/// integer.
Real hypergeometric_2f1_terminating(const Real& a, long m, const Real& c,
                                    const Real& z);

/// Noise scale factors on the mitigation gates themselves: _S/_R pick the
/// stochastic/rotational component, and the suffix picks where it acts
/// (HI hidden-inverse gate, P custom-channel gate, S amplification stage).
/// y_dagger scales the inverse-gate noise in the synchronous-insertion
/// robustness model.
struct PerturbationFactors {
  Real y_S_HI = Real(1);
  Real y_R_HI = Real(1);
  Real y_S_P = Real(1);
  Real y_R_P = Real(1);
  Real y_S_S = Real(1);
  Real y_R_S = Real(1);
  Real y_dagger = Real(1);
};

/// Exact coefficients of the three-variant linear mitigation when the
/// mitigation gates are themselves noisy: variant j carries channel angle
/// phi_j and stochastic amplitude p_j scaled by the y factors, and the
/// 3x3 real eigenvalue system is solved directly.  Raises SingularSystem
/// when the perturbed variants no longer span the channel.
std::vector<Real> perturbed_clm_coefficients(const NoiseChannelSpec& spec,
                                             const PerturbationFactors& y);

/// Large-circuit metrics of the hidden-inverse linear mitigation with
/// noisy mitigation gates: the runtime scaling becomes
/// exp(2 (y_S_HI + y_R_HI)/(1 + y_R_HI) * e_SN) to leading order.  Raises
/// InvalidFactors when y_R_HI <= 0 (the hidden inverse failed).
MetricsReport perturbed_chilm_metrics(const NoiseChannelSpec& spec,
                                      const PerturbationFactors& y,
                                      long n_gates);

/// Noise boundary of the perturbed hidden-inverse linear mitigation:
/// (1 + y_R_HI)/(y_S_HI + y_R_HI) * ln(S*)/2.
Real perturbed_chilm_boundary(const PerturbationFactors& y,
                              const Real& target_scaling);

/// Robustness analysis of noise-aware synchronous insertion when the
/// inverse gate carries y_dagger times the forward noise.
struct IismRobustnessReport {
  std::vector<Real> coefficients;  // exact extrapolation weights
  Real sampling_cost;              // leading-order closed form
  Real length_factor;              // leading-order closed form
  Real mitigated_noise_level;      // closed form in the circuit level
};

IismRobustnessReport iism_na_robustness(const Real& p, const Real& y_dagger,
                                        int order, long n_gates);

/// Builds the plan a selector row denotes, for a uniform circuit whose
/// every gate carries `spec`: picks the right generator, threads the
/// order or schedule through, and stacks the symmetric pre-tailoring
/// stage for the lc-* rows.
MitigationPlan assemble_plan(const MethodSelector& selector,
                             const NoiseChannelSpec& spec, long n_gates,
                             int order,
                             const std::vector<long>& m_values = {});

}  // namespace qem
