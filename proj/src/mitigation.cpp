// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qem/errors.hpp"

namespace qem {

namespace {

bool stochastic_kind(const NoiseChannelSpec& spec) {
  return spec.kind == NoiseKind::SN || spec.kind == NoiseKind::Dephasing;
}

void require_kind(const NoiseChannelSpec& spec,
                  std::initializer_list<NoiseKind> allowed,
                  const char* where) {
  for (NoiseKind k : allowed) {
    if (spec.kind == k) {
      return;
    }
    // Dephasing is SN with a = 1; every SN construction accepts it.
    if (k == NoiseKind::SN && spec.kind == NoiseKind::Dephasing) {
      return;
    }
  }
  throw UnsupportedNoise(std::string(where) +
                         " does not support this noise family");
}

GateVariant original_variant() {
  return GateVariant{};
}

MitigationPlan local_plan(Method method, const NoiseChannelSpec& spec,
                          std::vector<WeightedVariant> variants, int order,
                          bool biased) {
  MitigationPlan plan;
  plan.method = method;
  plan.scope = PlanScope::Local;
  plan.order = order;
  plan.biased = biased;
  plan.per_gate_variants.push_back(std::move(variants));
  plan.uniform_local = true;
  plan.built_for = spec;
  return plan;
}

MitigationPlan synchronous_plan(Method method, const NoiseChannelSpec& spec,
                                std::vector<CircuitClass> variants,
                                int order, bool biased) {
  MitigationPlan plan;
  plan.method = method;
  plan.scope = PlanScope::Synchronous;
  plan.order = order;
  plan.biased = biased;
  plan.circuit_variants = std::move(variants);
  plan.built_for = spec;
  return plan;
}

}  // namespace

Real effective_phi(const GateVariant& variant,
                   const NoiseChannelSpec& base) {
  Real phi = (base.kind == NoiseKind::RE || base.kind == NoiseKind::ORE)
                 ? base.phi
                 : Real(0);
  if (variant.hidden_inverse) {
    phi = -phi;
  }
  phi += variant.custom_angle;
  return Real(2 * variant.identity_insertions + 1) * phi;
}

Real effective_p(const GateVariant& variant, const NoiseChannelSpec& base) {
  Real p = stochastic_kind(base) || base.kind == NoiseKind::ORE
               ? base.p
               : Real(0);
  // Rotational channels have no closure parameter; their stochastic part
  // (ORE) is self-inverse.
  const Real a = stochastic_kind(base) ? base.a_param : Real(1);
  Real amplified =
      amplified_stochastic(p, a, 2 * variant.identity_insertions + 1);
  if (variant.custom_stochastic != 0) {
    amplified = compose_stochastic(amplified, variant.custom_stochastic, a);
  }
  return amplified;
}

Real MitigationPlan::local_cost() const {
  if (scope == PlanScope::Local) {
    Real product = 1;
    for (const auto& gate_list : per_gate_variants) {
      Real sum = 0;
      for (const WeightedVariant& wv : gate_list) {
        sum += abs(wv.coefficient);
      }
      product *= sum;
    }
    return product;
  }
  Real sum = 0;
  for (const CircuitClass& cls : circuit_variants) {
    sum += to_real(cls.multiplicity) * abs(cls.coefficient);
  }
  return sum;
}

MitigationPlan unmitigated_plan() {
  std::vector<WeightedVariant> variants;
  variants.push_back({original_variant(), Real(1)});
  MitigationPlan plan = local_plan(Method::Unmitigated, NoiseChannelSpec{},
                                   std::move(variants), 0, true);
  return plan;
}

std::vector<Real> kf_coefficients(int order) {
  if (order < 0) {
    throw UnsupportedOrder("extrapolation order must be non-negative");
  }
  std::vector<Real> out;
  out.reserve(order + 1);
  for (int i = 0; i <= order; ++i) {
    Real c = 1;
    for (int m = 0; m <= order; ++m) {
      if (m == i) {
        continue;
      }
      c *= Real(2 * m + 1) / Real(2 * (m - i));
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Real> amplitude_lagrange(const std::vector<Real>& xs) {
  const std::size_t n = xs.size();
  std::vector<Real> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real c = 1;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) {
        continue;
      }
      const Real gap = xs[m] - xs[i];
      if (gap == 0) {
        throw DegenerateAmplitudes("amplitudes " + std::to_string(i) +
                                   " and " + std::to_string(m) +
                                   " coincide at " + format_real(xs[i], 17));
      }
      c *= xs[m] / gap;
    }
    out.push_back(c);
  }
  return out;
}

std::vector<Real> trig_lagrange(const std::vector<Real>& psis) {
  const std::size_t n = psis.size();
  std::vector<Real> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real c = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) {
        continue;
      }
      const Real gap = sin((psis[j] - psis[i]) / 2);
      if (gap == 0) {
        throw DegenerateAngles("channel angles " + std::to_string(i) +
                               " and " + std::to_string(j) +
                               " coincide modulo 2*pi at " +
                               format_real(psis[i], 17));
      }
      c *= sin(psis[j] / 2) / gap;
    }
    out.push_back(c);
  }
  return out;
}

MitigationPlan clm_plan(const NoiseChannelSpec& spec, bool clifford_timing) {
  require_kind(spec, {NoiseKind::SN, NoiseKind::RE, NoiseKind::ORE},
               "custom-channel local mitigation");
  if (stochastic_kind(spec)) {
    const Real p0 = spec.p;
    const Real p1 = compose_stochastic(p0, Real(1), spec.a_param);
    if (p1 == p0) {
      throw SingularNoise("full-strength custom channel does not move the "
                          "stochastic amplitude");
    }
    GateVariant custom;
    custom.custom_stochastic = 1;
    custom.exec_time_ratio = 2;
    std::vector<WeightedVariant> variants;
    variants.push_back({original_variant(), p1 / (p1 - p0)});
    variants.push_back({custom, -p0 / (p1 - p0)});
    return local_plan(Method::CLM, spec, std::move(variants), 0, false);
  }
  const Real damp = spec.kind == NoiseKind::ORE ? 1 - 2 * spec.p : Real(1);
  if (damp == 0) {
    throw SingularNoise("stochastic amplitude 1/2 erases the rotational "
                        "subspace");
  }
  const Real half_pi = pi_value() / 2;
  const Real phi = spec.phi;
  const Real c = cos(phi);
  const Real s = sin(phi);
  std::vector<Real> coefficients = {
      c / damp,
      -(c - 1 + 2 * spec.p + s) / (2 * damp),
      (damp - c + s) / (2 * damp),
  };
  const Real angles[3] = {Real(0), half_pi, 3 * half_pi};
  std::vector<WeightedVariant> variants;
  for (int i = 0; i < 3; ++i) {
    GateVariant v;
    v.custom_angle = angles[i];
    if (i > 0) {
      v.exec_time_ratio = 2;
    }
    if (i == 2 && spec.kind == NoiseKind::ORE && clifford_timing) {
      v.exec_time_ratio = 3;
    }
    variants.push_back({v, coefficients[i]});
  }
  return local_plan(Method::CLM, spec, std::move(variants), 0, false);
}

MitigationPlan chilm_plan(const NoiseChannelSpec& spec) {
  require_kind(spec, {NoiseKind::RE, NoiseKind::ORE},
               "hidden-inverse local mitigation");
  const Real damp = spec.kind == NoiseKind::ORE ? 1 - 2 * spec.p : Real(1);
  const Real dcos = damp * cos(spec.phi);
  if (dcos == 0) {
    throw SingularNoise("hidden-inverse construction needs an invertible "
                        "damped rotation");
  }
  GateVariant custom;
  custom.custom_angle = pi_value();
  custom.exec_time_ratio = 2;
  GateVariant inverse;
  inverse.hidden_inverse = true;
  std::vector<WeightedVariant> variants;
  variants.push_back({original_variant(), Real(1) / 2});
  variants.push_back({custom, -(1 - dcos) / (2 * dcos)});
  variants.push_back({inverse, 1 / (2 * dcos)});
  return local_plan(Method::CHILM, spec, std::move(variants), 0, false);
}

MitigationPlan chism_plan(const NoiseChannelSpec& spec, int n_variants) {
  require_kind(spec, {NoiseKind::RE}, "hidden-inverse synchronous "
                                      "mitigation");
  if (n_variants < 2 || n_variants % 2 != 0) {
    throw UnsupportedOrder("variant count must be even and at least 2, "
                           "got " + std::to_string(n_variants));
  }
  std::vector<GateVariant> shapes;
  shapes.push_back(original_variant());
  for (int i = 1; i < n_variants; ++i) {
    GateVariant v;
    v.custom_angle = 2 * i * pi_value() / n_variants;
    v.exec_time_ratio = 2;
    shapes.push_back(v);
  }
  GateVariant inverse;
  inverse.hidden_inverse = true;
  shapes.push_back(inverse);

  std::vector<Real> coefficients;
  if (spec.phi == 0) {
    // The original and hidden-inverse nodes coincide; the continuous limit
    // splits their weight evenly and drops the custom variants.
    coefficients.assign(shapes.size(), Real(0));
    coefficients.front() = Real(1) / 2;
    coefficients.back() = Real(1) / 2;
  } else {
    std::vector<Real> nodes;
    for (const GateVariant& v : shapes) {
      nodes.push_back(effective_phi(v, spec));
    }
    coefficients = trig_lagrange(nodes);
  }
  std::vector<CircuitClass> classes;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    CircuitClass cls;
    cls.uniform = shapes[i];
    cls.coefficient = coefficients[i];
    cls.exec_time_ratio = shapes[i].exec_time_ratio;
    classes.push_back(cls);
  }
  return synchronous_plan(Method::CHISM, spec, std::move(classes),
                          n_variants, false);
}

MitigationPlan ciilm_plan(const NoiseChannelSpec& spec) {
  require_kind(spec, {NoiseKind::RE}, "custom-channel identity-insertion "
                                      "local mitigation");
  const Real tailor = 2 * pi_value() / 3;
  std::vector<WeightedVariant> variants;
  std::vector<Real> nodes;
  for (long j = 0; j < 3; ++j) {
    GateVariant v;
    v.custom_angle = tailor;
    v.identity_insertions = j;
    v.exec_time_ratio = 2 * (2 * j + 1);
    nodes.push_back(effective_phi(v, spec));
    variants.push_back({v, Real(0)});
  }
  const std::vector<Real> coefficients = trig_lagrange(nodes);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    variants[i].coefficient = coefficients[i];
  }
  return local_plan(Method::CIILM, spec, std::move(variants), 2, false);
}

MitigationPlan csm_plan(const NoiseChannelSpec& spec, int order) {
  require_kind(spec, {NoiseKind::SN, NoiseKind::RE},
               "custom-channel synchronous mitigation");
  if (order < 1) {
    throw UnsupportedOrder("synchronous order must be positive, got " +
                           std::to_string(order));
  }
  std::vector<GateVariant> shapes;
  shapes.push_back(original_variant());
  for (int i = 1; i <= order; ++i) {
    GateVariant v;
    if (stochastic_kind(spec)) {
      const Real arg = Real(i) * pi_value() / (2 * order);
      v.custom_stochastic = sin(arg) * sin(arg);
    } else {
      v.custom_angle = Real(2 * i - 1) * pi_value() / order;
    }
    v.exec_time_ratio = 2;
    shapes.push_back(v);
  }
  std::vector<Real> coefficients;
  if (stochastic_kind(spec)) {
    std::vector<Real> amplitudes;
    for (const GateVariant& v : shapes) {
      amplitudes.push_back(effective_p(v, spec));
    }
    coefficients = amplitude_lagrange(amplitudes);
  } else {
    std::vector<Real> nodes;
    for (const GateVariant& v : shapes) {
      nodes.push_back(effective_phi(v, spec));
    }
    coefficients = trig_lagrange(nodes);
  }
  std::vector<CircuitClass> classes;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    CircuitClass cls;
    cls.uniform = shapes[i];
    cls.coefficient = coefficients[i];
    cls.exec_time_ratio = shapes[i].exec_time_ratio;
    classes.push_back(cls);
  }
  return synchronous_plan(Method::CSM, spec, std::move(classes), order,
                          false);
}

namespace {

// Insertion-count classes up to total 5, with the leading coefficient of
// each class's quasi-probability weight as an exact rational.  The weight
// at mitigation order M is leading * prod_{k=total+1}^{M}(N+2k)
// / (2^{M-total} (M-total)!).
struct InsertionClass {
  std::vector<long> partition;  // insertion counts on distinct gates
  long leading_num;
  long leading_den;
};

const std::vector<InsertionClass>& insertion_classes() {
  static const std::vector<InsertionClass> table = {
      {{}, 1, 1},
      {{1}, -1, 2},
      {{2}, 3, 8},
      {{1, 1}, 1, 4},
      {{3}, -5, 16},
      {{2, 1}, -3, 16},
      {{1, 1, 1}, -1, 8},
      {{4}, 35, 128},
      {{3, 1}, 5, 32},
      {{2, 2}, 9, 64},
      {{2, 1, 1}, 3, 32},
      {{1, 1, 1, 1}, 1, 16},
      {{5}, -63, 256},
      {{4, 1}, -35, 256},
      {{3, 2}, -15, 128},
      {{3, 1, 1}, -5, 64},
      {{2, 2, 1}, -9, 128},
      {{2, 1, 1, 1}, -3, 64},
      {{1, 1, 1, 1, 1}, -1, 32},
  };
  return table;
}

long partition_total(const std::vector<long>& partition) {
  long total = 0;
  for (long part : partition) {
    total += part;
  }
  return total;
}

BigInt class_multiplicity(long n_gates, const std::vector<long>& partition) {
  if (static_cast<long>(partition.size()) > n_gates) {
    return BigInt(0);  // no room for that many modified gates
  }
  std::vector<long> occupations;
  occupations.push_back(n_gates - static_cast<long>(partition.size()));
  long run = 1;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    if (i + 1 < partition.size() && partition[i + 1] == partition[i]) {
      ++run;
    } else {
      occupations.push_back(run);
      run = 1;
    }
  }
  return multiplicity(NoiseKind::SN, n_gates, occupations);
}

}  // namespace

MitigationPlan iiam_plan(long n_gates, int order) {
  if (order < 0 || order > 5) {
    throw UnsupportedOrder("insertion table covers orders 0..5, got " +
                           std::to_string(order));
  }
  if (n_gates < 1) {
    throw IndexOutOfRange("gate count must be positive");
  }
  const Real n(n_gates);
  std::vector<CircuitClass> classes;
  for (const InsertionClass& entry : insertion_classes()) {
    const long total = partition_total(entry.partition);
    if (total > order) {
      continue;
    }
    Real coefficient = Real(entry.leading_num) / entry.leading_den;
    for (long k = total + 1; k <= order; ++k) {
      coefficient *= (n + 2 * k) / (2 * (k - total));
    }
    CircuitClass cls;
    cls.insertion_partition = entry.partition;
    cls.coefficient = coefficient;
    cls.multiplicity = class_multiplicity(n_gates, entry.partition);
    cls.exec_time_ratio = 1 + Real(2 * total) / n;
    classes.push_back(cls);
  }
  MitigationPlan plan;
  plan.method = Method::IIAM;
  plan.scope = PlanScope::Asynchronous;
  plan.order = order;
  plan.noise_aware = false;
  plan.biased = true;
  plan.circuit_variants = std::move(classes);
  return plan;
}

namespace {

std::vector<WeightedVariant> insertion_ladder(
    const NoiseChannelSpec& spec, int order, bool noise_aware,
    const char* where) {
  std::vector<GateVariant> shapes;
  for (int j = 0; j <= order; ++j) {
    GateVariant v;
    v.identity_insertions = j;
    v.exec_time_ratio = 2 * j + 1;
    shapes.push_back(v);
  }
  std::vector<Real> coefficients;
  if (!noise_aware) {
    coefficients = kf_coefficients(order);
  } else if (stochastic_kind(spec)) {
    std::vector<Real> amplitudes;
    for (const GateVariant& v : shapes) {
      amplitudes.push_back(effective_p(v, spec));
    }
    coefficients = amplitude_lagrange(amplitudes);
  } else if (spec.kind == NoiseKind::RE) {
    std::vector<Real> nodes;
    for (const GateVariant& v : shapes) {
      nodes.push_back(effective_phi(v, spec));
    }
    coefficients = trig_lagrange(nodes);
  } else {
    throw UnsupportedNoise(std::string(where) +
                           ": noise-aware coefficients need a pure "
                           "stochastic or rotational channel");
  }
  std::vector<WeightedVariant> variants;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    variants.push_back({shapes[i], coefficients[i]});
  }
  return variants;
}

}  // namespace

MitigationPlan iilm_plan(const NoiseChannelSpec& spec, int order,
                         bool noise_aware) {
  if (order < 1) {
    throw UnsupportedOrder("insertion order must be positive, got " +
                           std::to_string(order));
  }
  if (noise_aware) {
    const bool sn = stochastic_kind(spec);
    if ((sn && order != 1) || (!sn && order != 2)) {
      throw UnsupportedOrder(
          "noise-aware local insertion coefficients cancel the channel "
          "exactly at order 1 (stochastic) or 2 (rotational)");
    }
  }
  MitigationPlan plan = local_plan(
      Method::IILM, spec,
      insertion_ladder(spec, order, noise_aware,
                       "identity-insertion local mitigation"),
      order, !noise_aware);
  plan.noise_aware = noise_aware;
  return plan;
}

MitigationPlan iism_plan(const NoiseChannelSpec& spec, int order,
                         bool noise_aware) {
  if (order < 1) {
    throw UnsupportedOrder("insertion order must be positive, got " +
                           std::to_string(order));
  }
  const std::vector<WeightedVariant> variants =
      insertion_ladder(spec, order, noise_aware,
                       "identity-insertion synchronous mitigation");
  std::vector<CircuitClass> classes;
  for (const WeightedVariant& wv : variants) {
    CircuitClass cls;
    cls.uniform = wv.variant;
    cls.coefficient = wv.coefficient;
    cls.exec_time_ratio = wv.variant.exec_time_ratio;
    classes.push_back(cls);
  }
  MitigationPlan plan = synchronous_plan(Method::IISM, spec,
                                         std::move(classes), order, true);
  plan.noise_aware = noise_aware;
  // Noise-aware coefficients remove the bias entirely once the order
  // reaches the circuit size; agnostic ones never do.
  plan.biased = !noise_aware;
  return plan;
}

std::pair<MitigationPlan, NoiseChannelSpec> lc_pretailor(
    const NoiseChannelSpec& spec, const Real& phi0, const Real& phi1) {
  require_kind(spec, {NoiseKind::RE}, "pre-tailoring");
  if (phi0 * phi1 >= 0) {
    throw SameSignErrors("pre-tailoring needs implementation error angles "
                         "of opposite sign, got " + format_real(phi0, 17) +
                         " and " + format_real(phi1, 17));
  }
  const Real s0 = sin(phi0);
  const Real s1 = sin(phi1);
  if (s0 == s1) {
    throw DegenerateAngles("implementation angles have equal sines; the "
                           "mixture cannot cancel the rotation");
  }
  const Real c0 = -s1 / (s0 - s1);
  const Real c1 = s0 / (s0 - s1);
  const Real residual_p = (1 - sin(phi0 - phi1) / (s0 - s1)) / 2;

  GateVariant alt;
  alt.custom_angle = phi1 - phi0;
  std::vector<WeightedVariant> variants;
  variants.push_back({original_variant(), c0});
  variants.push_back({alt, c1});
  MitigationPlan plan =
      local_plan(Method::LC, spec, std::move(variants), 0, true);
  plan.has_lc_stage = true;
  plan.lc_phi0 = phi0;
  plan.lc_phi1 = phi1;
  plan.lc_prob1 = c1;
  plan.lc_residual_p = residual_p;
  const NoiseChannelSpec residual =
      NoiseChannelSpec::sn(residual_p, Real(1), spec.generator);
  return {plan, residual};
}

MitigationPlan tiilm_plan(const NoiseChannelSpec& spec, long n_gates,
                          const std::vector<long>& m_values) {
  require_kind(spec, {NoiseKind::SN, NoiseKind::RE},
               "tuned identity-insertion mitigation");
  const bool sn = stochastic_kind(spec);
  std::vector<long> schedule = m_values;
  bool fallback = false;
  if (schedule.empty()) {
    TiilmOptimum best = optimize_tiilm(spec, n_gates);
    schedule = best.m_values;
    fallback = best.fallback;
  }
  const std::size_t expected = sn ? 2 : 3;
  if (schedule.size() != expected || schedule[0] != 0) {
    throw UnsupportedOrder("tuned schedule must start at 0 and list " +
                           std::to_string(expected) + " insertion counts");
  }
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i] <= schedule[i - 1]) {
      throw UnsupportedOrder("tuned insertion counts must increase "
                             "strictly");
    }
  }
  std::vector<GateVariant> shapes;
  for (long m : schedule) {
    GateVariant v;
    v.identity_insertions = m;
    v.exec_time_ratio = 2 * m + 1;
    shapes.push_back(v);
  }
  std::vector<Real> coefficients;
  if (spec.is_noise_free()) {
    // Continuous zero-noise limit of the interpolation weights.
    if (sn) {
      const Real k1(2 * schedule[1] + 1);
      coefficients = {k1 / (k1 - 1), -1 / (k1 - 1)};
    } else {
      std::vector<Real> factors;
      for (long m : schedule) {
        factors.push_back(Real(2 * m + 1));
      }
      coefficients.clear();
      for (std::size_t i = 0; i < factors.size(); ++i) {
        Real c = 1;
        for (std::size_t j = 0; j < factors.size(); ++j) {
          if (j != i) {
            c *= factors[j] / (factors[j] - factors[i]);
          }
        }
        coefficients.push_back(c);
      }
    }
  } else if (sn) {
    std::vector<Real> amplitudes;
    for (const GateVariant& v : shapes) {
      amplitudes.push_back(effective_p(v, spec));
    }
    coefficients = amplitude_lagrange(amplitudes);
  } else {
    std::vector<Real> nodes;
    for (const GateVariant& v : shapes) {
      nodes.push_back(effective_phi(v, spec));
    }
    coefficients = trig_lagrange(nodes);
  }
  std::vector<WeightedVariant> variants;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    variants.push_back({shapes[i], coefficients[i]});
  }
  MitigationPlan plan =
      local_plan(Method::TIILM, spec, std::move(variants),
                 static_cast<int>(expected) - 1, false);
  plan.m_values = schedule;
  plan.optimizer_fallback = fallback;
  return plan;
}

namespace {

constexpr long tiilm_seed_cap = 1000000;

// Runtime scaling of a two-variant tuned schedule on stochastic noise, in
// double precision (the scan only ranks schedules; plans are rebuilt at
// full precision afterwards).
double tiilm_sn_scaling(double p, double a, long n_gates, long m1) {
  const double lambda = 1 - (1 + a) * p;
  if (lambda <= 0 || lambda >= 1) {
    return std::numeric_limits<double>::infinity();
  }
  const double l0 = lambda;
  const double l1 = std::exp((2.0 * m1 + 1) * std::log(lambda));
  const double denom = l0 - l1;
  if (denom == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double c0 = (1 - l1) / denom;
  const double c1 = -(1 - l0) / denom;
  const double cost = std::abs(c0) + std::abs(c1);
  const double f =
      (std::abs(c0) + std::abs(c1) * (2.0 * m1 + 1)) / cost;
  return 2.0 * n_gates * std::log(cost) + std::log(f);
}

double tiilm_re_scaling(double phi, long n_gates, long m1, long m2) {
  const double psi0 = phi;
  const double psi1 = (2.0 * m1 + 1) * phi;
  const double psi2 = (2.0 * m2 + 1) * phi;
  const double psis[3] = {psi0, psi1, psi2};
  double cost = 0;
  double weighted = 0;
  const double ratios[3] = {1.0, 2.0 * m1 + 1, 2.0 * m2 + 1};
  for (int i = 0; i < 3; ++i) {
    double c = 1;
    for (int j = 0; j < 3; ++j) {
      if (j == i) {
        continue;
      }
      const double gap = std::sin((psis[j] - psis[i]) / 2);
      if (gap == 0) {
        return std::numeric_limits<double>::infinity();
      }
      c *= std::sin(psis[j] / 2) / gap;
    }
    cost += std::abs(c);
    weighted += std::abs(c) * ratios[i];
  }
  if (!std::isfinite(cost) || cost <= 0) {
    return std::numeric_limits<double>::infinity();
  }
  return 2.0 * n_gates * std::log(cost) + std::log(weighted / cost);
}

struct ScanWindow {
  long lo;
  long hi;
};

ScanWindow window_around(double seed_a, double seed_b) {
  const double lo = 0.5 * std::min(seed_a, seed_b);
  const double hi = 1.5 * std::max(seed_a, seed_b);
  ScanWindow w;
  w.lo = std::max<long>(1, static_cast<long>(std::floor(lo)));
  w.hi = std::min<long>(tiilm_seed_cap,
                        std::max<long>(w.lo, static_cast<long>(
                                                 std::ceil(hi))));
  return w;
}

}  // namespace

TiilmOptimum optimize_tiilm(const NoiseChannelSpec& spec, long n_gates) {
  require_kind(spec, {NoiseKind::SN, NoiseKind::RE},
               "tuned-schedule optimisation");
  if (n_gates < 1) {
    throw IndexOutOfRange("gate count must be positive");
  }
  const bool sn = stochastic_kind(spec);
  const double n = static_cast<double>(n_gates);
  TiilmOptimum result;
  if (spec.is_noise_free()) {
    result.fallback = true;
    result.m_values = sn ? std::vector<long>{0, tiilm_seed_cap}
                         : std::vector<long>{0, tiilm_seed_cap / 2,
                                             tiilm_seed_cap};
    return result;
  }
  if (sn) {
    const double p = static_cast<double>(spec.p);
    const double a = static_cast<double>(spec.a_param);
    const double eps = 2 * p * n;
    const double kappa = std::sqrt(8 - 2 / n);
    const double seed_small = kappa / std::sqrt(1 + a) * n / std::sqrt(eps);
    const double seed_large = std::log(2.0) / (1 + a) * n / eps;
    const ScanWindow w = window_around(seed_small, seed_large);
    long best_m = w.lo;
    double best_s = std::numeric_limits<double>::infinity();
    for (long m1 = w.lo; m1 <= w.hi; ++m1) {
      const double s = tiilm_sn_scaling(p, a, n_gates, m1);
      if (s < best_s) {
        best_s = s;
        best_m = m1;
      }
    }
    result.m_values = {0, best_m};
    return result;
  }
  const double phi = static_cast<double>(spec.phi);
  const double eps = n * std::abs(phi);
  const double pi = std::acos(-1.0);
  const double kappa1 = std::sqrt(2 / pi) * std::sqrt(4 - 1 / n);
  const ScanWindow w1 = window_around(kappa1 * n / std::sqrt(eps),
                                      pi / 4 * n / eps);
  const ScanWindow w2 = window_around(pi / 2 * n / eps,
                                      3 * pi / 4 * n / eps);
  long best_m1 = w1.lo;
  long best_m2 = std::max(w2.lo, w1.lo + 1);
  double best_s = std::numeric_limits<double>::infinity();
  for (long m1 = w1.lo; m1 <= w1.hi; ++m1) {
    for (long m2 = std::max(w2.lo, m1 + 1); m2 <= w2.hi; ++m2) {
      const double s = tiilm_re_scaling(phi, n_gates, m1, m2);
      if (s < best_s) {
        best_s = s;
        best_m1 = m1;
        best_m2 = m2;
      }
    }
  }
  result.m_values = {0, best_m1, best_m2};
  return result;
}

MitigationPlan compose_plans(const MitigationPlan& a,
                             const MitigationPlan& b) {
  // Pre-tailoring folds into the noise model of the other plan: the
  // mixture refreshes on every physical application, so the other plan
  // sees exactly the residual stochastic channel.
  if (a.method == Method::LC || b.method == Method::LC) {
    const MitigationPlan& lc = a.method == Method::LC ? a : b;
    const MitigationPlan& other = a.method == Method::LC ? b : a;
    if (other.method == Method::LC) {
      throw ScopeMismatch("cannot stack two pre-tailoring stages");
    }
    MitigationPlan out = other;
    out.has_lc_stage = true;
    out.lc_phi0 = lc.lc_phi0;
    out.lc_phi1 = lc.lc_phi1;
    out.lc_prob1 = lc.lc_prob1;
    out.lc_residual_p = lc.lc_residual_p;
    return out;
  }
  if (a.scope != PlanScope::Local || b.scope != PlanScope::Local ||
      !a.uniform_local || !b.uniform_local) {
    throw ScopeMismatch("general composition is defined for uniform local "
                        "plans");
  }
  const Real closure = a.built_for.a_param;
  std::vector<WeightedVariant> variants;
  for (const WeightedVariant& va : a.per_gate_variants[0]) {
    for (const WeightedVariant& vb : b.per_gate_variants[0]) {
      GateVariant v;
      v.custom_angle = va.variant.custom_angle + vb.variant.custom_angle;
      v.custom_stochastic = compose_stochastic(
          va.variant.custom_stochastic, vb.variant.custom_stochastic,
          closure);
      v.identity_insertions = va.variant.identity_insertions +
                              vb.variant.identity_insertions;
      v.hidden_inverse =
          va.variant.hidden_inverse != vb.variant.hidden_inverse;
      v.exec_time_ratio =
          va.variant.exec_time_ratio + vb.variant.exec_time_ratio - 1;
      variants.push_back({v, va.coefficient * vb.coefficient});
    }
  }
  MitigationPlan out = local_plan(a.method, a.built_for, std::move(variants),
                                  a.order + b.order, a.biased || b.biased);
  return out;
}

MitigationPlan concatenate_local(const std::vector<MitigationPlan>& plans) {
  if (plans.empty()) {
    throw ScopeMismatch("concatenation needs at least one per-gate plan");
  }
  MitigationPlan out;
  out.method = plans.front().method;
  out.scope = PlanScope::Local;
  out.uniform_local = false;
  out.order = plans.front().order;
  out.built_for = plans.front().built_for;
  for (const MitigationPlan& plan : plans) {
    if (plan.scope != PlanScope::Local || !plan.uniform_local) {
      throw ScopeMismatch("concatenation takes uniform local plans only");
    }
    out.biased = out.biased || plan.biased;
    out.per_gate_variants.push_back(plan.per_gate_variants[0]);
  }
  return out;
}

std::string plan_to_text(const MitigationPlan& plan) {
  std::ostringstream out;
  static const char* const method_names[] = {
      "unmitigated", "clm", "chilm", "chism", "ciilm",
      "csm",         "iiam", "iilm", "iism",  "lc",    "tiilm"};
  out << "plan " << method_names[static_cast<int>(plan.method)];
  switch (plan.scope) {
    case PlanScope::Local: out << " local"; break;
    case PlanScope::Synchronous: out << " synchronous"; break;
    case PlanScope::Asynchronous: out << " asynchronous"; break;
  }
  out << " order " << plan.order
      << (plan.noise_aware ? " noise-aware" : " noise-agnostic") << "\n";
  if (!plan.m_values.empty()) {
    out << "m-values";
    for (long m : plan.m_values) {
      out << " " << m;
    }
    out << "\n";
  }
  if (plan.has_lc_stage) {
    out << "pre-tailor phi0 " << format_real(plan.lc_phi0) << " phi1 "
        << format_real(plan.lc_phi1) << " residual-p "
        << format_real(plan.lc_residual_p) << "\n";
  }
  if (plan.scope == PlanScope::Local) {
    for (std::size_t g = 0; g < plan.per_gate_variants.size(); ++g) {
      out << (plan.uniform_local ? "all-gates" : ("gate " +
                                                  std::to_string(g + 1)))
          << "\n";
      for (const WeightedVariant& wv : plan.per_gate_variants[g]) {
        out << "  variant angle " << format_real(wv.variant.custom_angle)
            << " stochastic " << format_real(wv.variant.custom_stochastic)
            << " insertions " << wv.variant.identity_insertions
            << " inverse " << (wv.variant.hidden_inverse ? 1 : 0)
            << " time " << format_real(wv.variant.exec_time_ratio)
            << " coefficient " << format_real(wv.coefficient) << "\n";
      }
    }
  } else {
    for (const CircuitClass& cls : plan.circuit_variants) {
      out << "class";
      if (cls.insertion_partition.empty()) {
        out << " uniform insertions " << cls.uniform.identity_insertions
            << " angle " << format_real(cls.uniform.custom_angle)
            << " stochastic " << format_real(cls.uniform.custom_stochastic)
            << " inverse " << (cls.uniform.hidden_inverse ? 1 : 0);
      } else {
        out << " partition";
        for (long part : cls.insertion_partition) {
          out << " " << part;
        }
      }
      out << " multiplicity " << cls.multiplicity.str() << " time "
          << format_real(cls.exec_time_ratio) << " coefficient "
          << format_real(cls.coefficient) << "\n";
    }
  }
  return out.str();
}

}  // namespace qem
