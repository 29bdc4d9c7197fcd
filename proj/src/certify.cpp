// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/certify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "qem/errors.hpp"

namespace qem {

namespace {

bool stochastic_kind(NoiseKind kind) {
  return kind == NoiseKind::SN || kind == NoiseKind::Dephasing;
}

/// The channel family the mitigation stage itself faces: a pre-tailoring
/// stage turns rotational errors into dephasing.
bool faces_stochastic(const MethodSelector& selector, NoiseKind kind) {
  return stochastic_kind(kind) || selector.lc_stage;
}

/// Order at which the row's residual closed form reaches zero, where one
/// exists; used by the precision probe.
int unbias_order(const MethodSelector& selector, NoiseKind kind,
                 long n_gates) {
  if (selector.method == Method::IISM && selector.noise_aware) {
    return static_cast<int>(faces_stochastic(selector, kind) ? n_gates
                                                             : 2 * n_gates);
  }
  return canonical_order(selector, kind, n_gates);
}

/// Builds the row's representative plan on a uniform circuit of n_gates
/// gates whose total noise level is `total`.
MitigationPlan probe_plan(const MethodSelector& selector, NoiseKind kind,
                          const Real& total, long n_gates,
                          const Real& a_param) {
  const NoiseChannelSpec spec =
      uniform_gate_noise(kind, total, n_gates, a_param);
  std::vector<long> schedule;
  if (selector.method == Method::TIILM && !selector.lc_stage) {
    schedule = tiilm_table_schedule(spec, n_gates);
  }
  return assemble_plan(selector, spec, n_gates,
                       canonical_order(selector, kind, n_gates), schedule);
}

Real probe_scaling(const MethodSelector& selector, NoiseKind kind,
                   const Real& total, long n_gates, const Real& a_param) {
  const MitigationPlan plan =
      probe_plan(selector, kind, total, n_gates, a_param);
  return metrics(plan, Real(n_gates), n_gates).runtime_scaling;
}

Real boundary_or_zero(const MethodSelector& selector, NoiseKind kind,
                      const Real& target_bias, const Real& target_scaling,
                      long n_gates, const Real& a_param) {
  try {
    return noise_boundary(selector, kind, target_bias, target_scaling,
                          n_gates, a_param);
  } catch (const NoSolution&) {
    return Real(0);
  }
}

/// Synchronous custom-channel rows whose unbiased construction extends to
/// arbitrarily deep circuits by concatenating full-order stages.
bool concatenation_extends(const MethodSelector& selector, NoiseKind kind) {
  if (!(kind == NoiseKind::RE && !selector.lc_stage)) {
    return false;
  }
  return selector.method == Method::CSM || selector.method == Method::CHISM;
}

}  // namespace

std::string verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::Yes:
      return "yes";
    case Verdict::Quasi:
      return "quasi";
    case Verdict::No:
      return "no";
    case Verdict::NotTested:
      return "not-tested";
  }
  return "not-tested";
}

bool certifiable(const MethodSelector& selector, NoiseKind kind) {
  if (kind == NoiseKind::RE) {
    return true;
  }
  if (!stochastic_kind(kind)) {
    return false;  // damped rotations have no certified rows
  }
  if (selector.lc_stage || selector.method == Method::LC) {
    return false;  // pre-tailoring needs a rotational error to oppose
  }
  switch (selector.method) {
    case Method::CHILM:
    case Method::CHISM:
    case Method::CIILM:
      return false;  // rotation-only constructions
    default:
      return true;
  }
}

NoiseChannelSpec uniform_gate_noise(NoiseKind kind, const Real& total_level,
                                    long n_gates, const Real& a_param) {
  if (n_gates < 1) {
    throw InvalidConfig("a probed circuit needs at least one gate");
  }
  const Real n(n_gates);
  switch (kind) {
    case NoiseKind::SN:
      return NoiseChannelSpec::sn(total_level / (2 * n), a_param);
    case NoiseKind::Dephasing:
      return NoiseChannelSpec::dephasing(total_level / (2 * n));
    case NoiseKind::RE:
      return NoiseChannelSpec::re(total_level / n);
    case NoiseKind::ORE:
      break;
  }
  throw UnsupportedNoise(
      "damped rotations have no single-amplitude probe convention");
}

int canonical_order(const MethodSelector& selector, NoiseKind kind,
                    long n_gates) {
  const bool stochastic = faces_stochastic(selector, kind);
  switch (selector.method) {
    case Method::CSM:
      return static_cast<int>(stochastic ? n_gates : 2 * n_gates);
    case Method::CHISM:
      return static_cast<int>(2 * n_gates);
    case Method::IIAM:
    case Method::IISM:
      return 1;
    case Method::IILM:
      return (selector.noise_aware && !stochastic) ? 2 : 1;
    default:
      return 0;
  }
}

std::vector<long> tiilm_table_schedule(const NoiseChannelSpec& spec,
                                       long n_gates) {
  if (n_gates < 1) {
    throw InvalidConfig("a tuning schedule needs at least one gate");
  }
  if (spec.kind == NoiseKind::RE || spec.kind == NoiseKind::ORE) {
    const Real phi = abs(spec.phi);
    if (phi == 0) {
      throw InvalidConfig(
          "tuning a rotation schedule needs a nonzero angle");
    }
    const Real half_pi = pi_value() / 2;
    std::vector<long> schedule = {0, 0, 0};
    for (int j = 1; j <= 2; ++j) {
      const Real psi = (2 * j - 1) * half_pi;
      const double raw = ((psi / phi - 1) / 2).convert_to<double>();
      schedule[j] = std::max<long>(std::llround(raw), 1);
    }
    if (schedule[2] <= schedule[1]) {
      schedule[2] = schedule[1] + 1;
    }
    return schedule;
  }
  if (spec.p <= 0) {
    throw InvalidConfig(
        "tuning a stochastic schedule needs a nonzero amplitude");
  }
  const Real target = log(Real(2)) / ((1 + spec.a_param) * spec.p);
  const double raw = ((target - 1) / 2).convert_to<double>();
  return {0, std::max<long>(std::llround(raw), 1)};
}

CertificationVerdict certify(const MethodSelector& selector, NoiseKind kind,
                             const CertificationProbes& probes) {
  CertificationVerdict out;
  if (!certifiable(selector, kind)) {
    out.notes = "row outside the certified catalogue";
    return out;
  }
  if (probes.sizes.empty() || probes.levels.empty() ||
      probes.scaling_targets.empty()) {
    throw InvalidConfig("certification probes must not be empty");
  }

  // Scalability: runtime scaling across circuit sizes at a fixed total
  // noise level.  Flat (under 1% relative spread) or shrinking passes.
  for (long n : probes.sizes) {
    out.scaling_by_size.push_back(
        probe_scaling(selector, kind, probes.epsilon, n, probes.a_param));
  }
  {
    const auto [lo, hi] = std::minmax_element(out.scaling_by_size.begin(),
                                              out.scaling_by_size.end());
    const bool flat = (*hi - *lo) <= Real("0.01") * *lo;
    bool shrinking = true;
    for (std::size_t i = 1; i < out.scaling_by_size.size(); ++i) {
      if (out.scaling_by_size[i] >
          out.scaling_by_size[i - 1] * (1 + Real("1e-9"))) {
        shrinking = false;
      }
    }
    out.scalable = (flat || shrinking) ? Verdict::Yes : Verdict::No;
  }

  // Efficiency: the scaling overhead must vanish linearly with the noise
  // level.  A cost-free row passes outright; otherwise the normalised
  // excess (S-1)/e may not grow by more than 3x per probed decade.
  {
    const long n = probes.efficiency_gates;
    bool cost_free = true;
    for (const Real& level : probes.levels) {
      const Real excess =
          probe_scaling(selector, kind, level, n, probes.a_param) - 1;
      if (excess > Real("1e-9")) {
        cost_free = false;
      }
      out.excess_per_level.push_back(excess / level);
    }
    if (cost_free) {
      out.efficient = Verdict::Yes;
    } else {
      bool bounded = true;
      for (std::size_t i = 1; i < out.excess_per_level.size(); ++i) {
        if (out.excess_per_level[i] >
            3 * out.excess_per_level[i - 1] + Real("1e-30")) {
          bounded = false;
        }
      }
      out.efficient = bounded ? Verdict::Yes : Verdict::No;
    }
  }

  // Precision: the residual closed form must either vanish outright or
  // fall strictly with the expansion order.
  const long n_p = probes.efficiency_gates;
  const NoiseChannelSpec probe_spec =
      uniform_gate_noise(kind, probes.epsilon, n_p, probes.a_param);
  bool unbiased = false;
  {
    const auto residual = mitigated_proxy_bias(
        selector, probe_spec, n_p, unbias_order(selector, kind, n_p));
    if (residual && *residual == 0) {
      unbiased = true;
      out.precise = Verdict::Yes;
      out.bias_by_order = {Real(0)};
    } else {
      bool falling = true;
      for (int order = 1; order <= 3; ++order) {
        const auto value =
            mitigated_proxy_bias(selector, probe_spec, n_p, order);
        if (!value) {
          falling = false;
          break;
        }
        if (!out.bias_by_order.empty() &&
            !(*value < out.bias_by_order.back())) {
          falling = false;
        }
        out.bias_by_order.push_back(*value);
      }
      out.precise = falling ? Verdict::Yes : Verdict::No;
    }
  }

  // Boundedness: where the noise boundary can still grow.  Probed through
  // the boundary solver at several scaling targets and circuit sizes.
  {
    const long n_mid = probes.sizes[probes.sizes.size() / 2];
    for (const Real& target : probes.scaling_targets) {
      out.boundary_by_target.push_back(
          boundary_or_zero(selector, kind, probes.boundary_bias, target,
                           n_mid, probes.a_param));
    }
    const Real near = boundary_or_zero(selector, kind, probes.boundary_bias,
                                       probes.scaling_targets.back(), n_mid,
                                       probes.a_param);
    const Real far = boundary_or_zero(selector, kind, probes.boundary_bias,
                                      probes.plateau_target, n_mid,
                                      probes.a_param);
    const Real at_small_n =
        boundary_or_zero(selector, kind, probes.boundary_bias,
                         probes.scaling_targets.back(), probes.sizes.front(),
                         probes.a_param);
    const Real at_large_n =
        boundary_or_zero(selector, kind, probes.boundary_bias,
                         probes.scaling_targets.back(), probes.sizes.back(),
                         probes.a_param);
    if (at_small_n > 0 && at_large_n * 3 < at_small_n) {
      // The admissible level collapses with circuit size.
      out.unbounded = Verdict::No;
    } else if (near > 0 && far >= Real("1.3") * near) {
      // Still climbing six decades past the probe window: no plateau.
      out.unbounded = Verdict::Yes;
    } else if (at_small_n > 0 && at_large_n >= 3 * at_small_n) {
      // Plateaued in the target but grows with circuit size.
      out.unbounded = Verdict::Yes;
    } else if (unbiased && concatenation_extends(selector, kind)) {
      // Plateaued, but full-order stages concatenate without bias.
      out.unbounded = Verdict::Yes;
    } else {
      out.unbounded = Verdict::No;
    }
  }

  // Robustness: structural.  A row is fully robust when it consumes no
  // noise characterisation at all, or re-solves its coefficients from
  // calibration data alone; rows that bake in characterised amplitudes or
  // a tailoring axis stay robust only up to that knowledge.
  {
    const bool knowledge_free =
        selector.method == Method::Unmitigated ||
        (!selector.noise_aware && !selector.lc_stage);
    const bool self_calibrating =
        selector.method == Method::CLM && !selector.lc_stage;
    if (knowledge_free) {
      out.robust = Verdict::Yes;
      out.notes = "robust: no noise characterisation consumed";
    } else if (self_calibrating) {
      out.robust = Verdict::Yes;
      out.notes =
          "robust: coefficients re-solve under perturbed calibrations";
    } else {
      out.robust = Verdict::Quasi;
      out.notes = selector.lc_stage
                      ? "quasi-robust: the pre-tailoring stage must match "
                        "the error axis"
                      : "quasi-robust: depends on characterised noise "
                        "amplitudes";
    }
  }

  return out;
}

}  // namespace qem
