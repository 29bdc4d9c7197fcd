// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <string>
#include <vector>

#include "qem/metrics.hpp"

namespace qem {

/// Outcome of one qualitative criterion.  Quasi marks a criterion met only
/// under side conditions (noise knowledge that must be supplied, or a
/// scaling argument such as concatenation).
enum class Verdict { Yes, Quasi, No, NotTested };

/// Lower-case label: "yes", "quasi", "no", "not-tested".
std::string verdict_name(Verdict verdict);

/// Probe schedule for the numeric certification checks.
struct CertificationProbes {
  Real epsilon = Real("0.02");  // total noise level for the size sweep
  std::vector<long> sizes = {18, 180, 1800};
  std::vector<Real> levels = {Real("0.1"), Real("0.01"), Real("0.001")};
  long efficiency_gates = 18;
  std::vector<Real> scaling_targets = {Real(10), Real(1000),
                                       Real(1000000)};
  Real plateau_target = Real("1e12");  // far point for the plateau test
  Real boundary_bias = Real("0.01");   // bias tolerance for the boundary
  Real a_param = Real(1);
};

/// The five qualitative criteria with the probe data behind them.
struct CertificationVerdict {
  Verdict scalable = Verdict::NotTested;
  Verdict unbounded = Verdict::NotTested;
  Verdict precise = Verdict::NotTested;
  Verdict efficient = Verdict::NotTested;
  Verdict robust = Verdict::NotTested;

  std::vector<Real> scaling_by_size;     // S at each probed circuit size
  std::vector<Real> excess_per_level;    // (S - 1)/e at each probed level
  std::vector<Real> bias_by_order;       // closed-form residual, orders 1-3
  std::vector<Real> boundary_by_target;  // boundary at each probed S*
  std::string notes;
};

/// True when the (selector, kind) row belongs to the certified catalogue
/// (stochastic noise covers the nine stochastic rows; rotational errors
/// cover all eighteen).
bool certifiable(const MethodSelector& selector, NoiseKind kind);

/// Runs the numeric certification probes for one catalogue row.  Rows
/// outside the catalogue come back all NotTested.
CertificationVerdict certify(const MethodSelector& selector, NoiseKind kind,
                             const CertificationProbes& probes = {});

/// Insertion schedule that pins the amplified error at the stationary
/// angles of the asymptotic runtime scaling (the large-circuit tuning the
/// closed-form tables assume).
std::vector<long> tiilm_table_schedule(const NoiseChannelSpec& spec,
                                       long n_gates);

/// The representative order the tables assume for a row: full order for
/// the custom-channel methods, the first supported order for the
/// insertion ladders, zero where no order handle exists.
int canonical_order(const MethodSelector& selector, NoiseKind kind,
                    long n_gates);

/// Uniform per-gate channel whose whole-circuit noise level is
/// `total_level`: p = e/(2N) for stochastic kinds, phi = e/N for
/// rotational errors.
NoiseChannelSpec uniform_gate_noise(NoiseKind kind, const Real& total_level,
                                    long n_gates, const Real& a_param);

}  // namespace qem
