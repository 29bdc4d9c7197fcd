// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/metrics.hpp"

#include <functional>
#include <map>

#include "qem/errors.hpp"

namespace qem {

namespace {

bool stochastic_kind(NoiseKind kind) {
  return kind == NoiseKind::SN || kind == NoiseKind::Dephasing;
}

Real rfact(long n) { return to_real(factorial(n)); }

/// (2m+1)!! as a Real.
Real rdf(long m) { return to_real(double_factorial_odd(m)); }

/// Falling factorial N(N-1)...(N-m) as a Real (m+1 factors).
Real rfalling(long n, long m) {
  return to_real(factorial(n) / factorial(n - m - 1));
}

}  // namespace

std::string selector_name(const MethodSelector& selector) {
  std::string base;
  switch (selector.method) {
    case Method::Unmitigated:
      return "unmitigated";
    case Method::CLM:
      base = "clm";
      break;
    case Method::CHILM:
      base = "chilm";
      break;
    case Method::CHISM:
      base = "chism";
      break;
    case Method::CIILM:
      base = "ciilm";
      break;
    case Method::CSM:
      base = "csm";
      break;
    case Method::IIAM:
      base = "iiam";
      break;
    case Method::IILM:
      base = selector.noise_aware ? "iilm-na" : "iilm-kf";
      break;
    case Method::IISM:
      base = selector.lc_stage
                 ? "iism"
                 : (selector.noise_aware ? "iism-na" : "iism-kf");
      break;
    case Method::LC:
      return "lc";
    case Method::TIILM:
      base = "tiilm";
      break;
  }
  return selector.lc_stage ? "lc-" + base : base;
}

MethodSelector selector_from_name(const std::string& name) {
  static const std::map<std::string, MethodSelector> table = {
      {"unmitigated", {Method::Unmitigated, true, false}},
      {"clm", {Method::CLM, true, false}},
      {"chilm", {Method::CHILM, true, false}},
      {"chism", {Method::CHISM, true, false}},
      {"ciilm", {Method::CIILM, true, false}},
      {"csm", {Method::CSM, true, false}},
      {"iiam", {Method::IIAM, false, false}},
      {"iilm-kf", {Method::IILM, false, false}},
      {"iilm-na", {Method::IILM, true, false}},
      {"iism-kf", {Method::IISM, false, false}},
      {"iism-na", {Method::IISM, true, false}},
      {"lc", {Method::LC, true, false}},
      {"lc-clm", {Method::CLM, true, true}},
      {"lc-csm", {Method::CSM, true, true}},
      {"lc-iiam", {Method::IIAM, false, true}},
      {"lc-iism", {Method::IISM, true, true}},
      {"lc-tiilm", {Method::TIILM, true, true}},
      {"tiilm", {Method::TIILM, true, false}},
  };
  const auto found = table.find(name);
  if (found == table.end()) {
    throw InvalidConfig("unknown method name: " + name);
  }
  return found->second;
}

MetricsReport metrics(const MitigationPlan& plan,
                      const Real& circuit_exec_time, long n_gates) {
  MetricsReport report;
  Real cost(1);
  Real f_l(1);
  if (plan.scope == PlanScope::Local) {
    if (plan.per_gate_variants.empty()) {
      cost = 1;
      f_l = 1;
    } else if (plan.uniform_local) {
      Real c_gate(0);
      Real weighted(0);
      for (const WeightedVariant& wv : plan.per_gate_variants.front()) {
        const Real w = abs(wv.coefficient);
        c_gate += w;
        weighted += w * wv.variant.exec_time_ratio;
      }
      cost = pow(c_gate, Real(n_gates));
      f_l = weighted / c_gate;
    } else {
      Real f_sum(0);
      for (const auto& variants : plan.per_gate_variants) {
        Real c_gate(0);
        Real weighted(0);
        for (const WeightedVariant& wv : variants) {
          const Real w = abs(wv.coefficient);
          c_gate += w;
          weighted += w * wv.variant.exec_time_ratio;
        }
        cost *= c_gate;
        f_sum += weighted / c_gate;
      }
      f_l = f_sum / Real(plan.per_gate_variants.size());
    }
  } else {
    Real total(0);
    Real weighted(0);
    for (const CircuitClass& cls : plan.circuit_variants) {
      const Real w = abs(cls.coefficient) * to_real(cls.multiplicity);
      total += w;
      weighted += w * cls.exec_time_ratio;
    }
    cost = total;
    f_l = weighted / total;
  }
  report.sampling_cost = cost;
  report.length_factor = f_l;
  report.width_factor = 1;
  report.area_factor = f_l;  // F_L * floor(F_W) with F_W = 1
  report.runtime_scaling =
      circuit_exec_time > 0 ? cost * cost * f_l : cost * cost;

  if (plan.method == Method::LC) {
    report.mitigated_proxy_bias = 2 * plan.lc_residual_p * Real(n_gates);
  } else {
    // LC-staged plans carry the residual channel in built_for, so the
    // bare-method closed form applies directly to it.
    MethodSelector selector{plan.method, plan.noise_aware, false};
    report.mitigated_proxy_bias =
        mitigated_proxy_bias(selector, plan.built_for, n_gates, plan.order);
  }
  report.mitigated_noise_level =
      report.mitigated_proxy_bias.value_or(Real(0));
  return report;
}

std::optional<Real> mitigated_proxy_bias(const MethodSelector& selector,
                                         const NoiseChannelSpec& spec,
                                         long n_gates, int order) {
  const long n = n_gates;
  const Real rn(n);
  const long m = order;

  if (selector.method == Method::LC) {
    return rn * (1 - cos(spec.phi));
  }

  // The channel the mitigation stage actually faces: the symmetric
  // pre-tailoring stage turns a rotational error into dephasing.
  NoiseChannelSpec faced = spec;
  if (selector.lc_stage && !stochastic_kind(spec.kind)) {
    faced = NoiseChannelSpec::dephasing((1 - cos(spec.phi)) / 2,
                                        spec.generator);
  }
  const bool stochastic = stochastic_kind(faced.kind);

  switch (selector.method) {
    case Method::Unmitigated:
      return unmitigated_proxy_bias(spec, n);
    case Method::CLM:
    case Method::CHILM:
    case Method::CIILM:
    case Method::TIILM:
    case Method::LC:
      return Real(0);
    case Method::CHISM:
      return m >= 2 * n ? std::optional<Real>(Real(0)) : std::nullopt;
    case Method::CSM: {
      const long full = stochastic ? n : 2 * n;
      return m >= full ? std::optional<Real>(Real(0)) : std::nullopt;
    }
    case Method::IIAM: {
      const Real eps = noise_level(faced, n);
      return pow(eps, m + 1) / rfact(m + 1);
    }
    case Method::IILM: {
      if (selector.noise_aware) {
        return Real(0);  // restricted to orders where the ladder is exact
      }
      if (stochastic) {
        return 2 * rn * pow(1 + faced.a_param, m) * pow(faced.p, m + 1) *
               rdf(m) / rfact(m + 1);
      }
      if (faced.kind == NoiseKind::RE) {
        return rn * pow(abs(faced.phi), m + 1) * rdf(m) / rfact(m + 1);
      }
      return std::nullopt;
    }
    case Method::IISM: {
      if (selector.noise_aware) {
        const long full = stochastic ? n : 2 * n;
        return m >= full ? std::optional<Real>(Real(0)) : std::nullopt;
      }
      if (stochastic) {
        return pow(2 * rn * faced.p, m + 1) * rdf(m) / rfact(m + 1);
      }
      if (faced.kind == NoiseKind::RE) {
        return pow(rn * abs(faced.phi), m + 1) * rdf(m) / rfact(m + 1);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Closed-form metric tables
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void not_tabulated(const std::string& row, NoiseKind kind) {
  const char* kind_name = "this noise kind";
  switch (kind) {
    case NoiseKind::SN:
    case NoiseKind::Dephasing:
      kind_name = "stochastic noise";
      break;
    case NoiseKind::RE:
      kind_name = "rotational errors";
      break;
    case NoiseKind::ORE:
      kind_name = "damped rotational errors";
      break;
  }
  throw NotTabulated(row + " has no tabulated cell for " + kind_name);
}

Real stochastic_cell(const std::string& row, TableRegime regime,
                     const TableInputs& in) {
  const Real eps = in.epsilon;
  const Real n(in.n_gates);
  const long big_n = in.n_gates;
  const long m = in.order;
  const Real a = in.a_param;
  const Real s_star = in.target_scaling;
  const Real b_star = in.target_bias;
  const Real pi = pi_value();
  const Real two_ln2 = 2 * log(Real(2));

  if (row == "unmitigated") {
    switch (regime) {
      case TableRegime::Level:
        return eps;
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return Real(1);
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "clm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (2 + 1 / (2 * n)) * eps;
      case TableRegime::LargeCircuit:
        return exp(2 * eps);
      case TableRegime::Boundary:
        return log(s_star) / 2;
    }
  } else if (row == "csm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (Real(8) / 3 - 1 / (6 * n * n)) * n * eps;
      case TableRegime::LargeCircuit: {
        const Real c = cosh(sqrt(2 * n * eps));
        return 2 * c * c;
      }
      case TableRegime::Boundary: {
        const Real l = log(2 * s_star);
        return l * l / (8 * n);
      }
    }
  } else if (row == "iiam") {
    switch (regime) {
      case TableRegime::Level:
        return pow(eps, m + 1) / rfact(m + 1);
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return pow(n, 2 * m) / (rfact(m) * rfact(m));
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "iilm-kf") {
    switch (regime) {
      case TableRegime::Level:
        return pow(eps, m + 1) / pow(n, m) * pow((1 + a) / 2, m) * rdf(m) /
               rfact(m + 1);
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return 3 * pow(Real(4), n) / 2;  // lower bound for any coefficients
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "iilm-na") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 3 * pow(Real(4), n) / 2;
      case TableRegime::LargeCircuit:
        return 3 * pow(Real(4), n) / 2 * exp(Real(3) / 4 * (1 + a) * eps);
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "iism-kf" || row == "iism-na") {
    switch (regime) {
      case TableRegime::Level:
        if (m + 1 > big_n) {
          return Real(0);
        }
        return pow(eps, m + 1) * rfalling(big_n, m) * rdf(m) /
               (pow(n, m + 1) * rfact(m + 1));
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return pow(Real(4), m + 1) / pi;
      case TableRegime::Boundary:
        return pow(Real(4), log(2 * b_star) / log(pi * s_star)) / 2;
    }
  } else if (row == "tiilm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return Real(2);
      case TableRegime::LargeCircuit:
        return exp(4 * (1 + a) * eps) * (1 + two_ln2);
      case TableRegime::Boundary:
        return log(s_star / (1 + two_ln2)) / (4 * (1 + a));
    }
  }
  not_tabulated(row, NoiseKind::SN);
}

Real rotational_cell(const std::string& row, TableRegime regime,
                     const TableInputs& in) {
  const Real eps = in.epsilon;
  const Real n(in.n_gates);
  const long big_n = in.n_gates;
  const long m = in.order;
  const Real s_star = in.target_scaling;
  const Real b_star = in.target_bias;
  const Real pi = pi_value();

  if (row == "unmitigated") {
    switch (regime) {
      case TableRegime::Level:
        return eps;
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return Real(1);
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "chilm" || row == "lc-clm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (1 + 1 / (4 * n)) * eps * eps / n;
      case TableRegime::LargeCircuit:
        return 1 + eps * eps / n;
      case TableRegime::Boundary:
        return sqrt(n * (s_star - 1));
    }
  } else if (row == "chism") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (Real(4) / 3 - 1 / (12 * n * n)) * eps * eps;
      case TableRegime::LargeCircuit: {
        if (eps == 0) {
          return Real(1);
        }
        const Real c = cos(eps);
        return 3 / (2 * c * c) - tan(eps) / (2 * eps);
      }
      case TableRegime::Boundary:
        return pi / 2 - sqrt(Real(3) / (2 * s_star));
    }
  } else if (row == "ciilm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return Real(6);
      case TableRegime::LargeCircuit:
        return 6 * exp(4 * sqrt(Real(3)) * eps);
      case TableRegime::Boundary:
        return log(s_star / 6) / (4 * sqrt(Real(3)));
    }
  } else if (row == "clm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (2 + 1 / n) * eps;
      case TableRegime::LargeCircuit:
        return exp(2 * eps);
      case TableRegime::Boundary:
        return log(s_star) / 2;
    }
  } else if (row == "csm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + 3 * eps;
      case TableRegime::LargeCircuit:
        return 1 + sin(eps) * (3 * cos(eps) + sin(eps));
      case TableRegime::Boundary:
        return pi / 2;
    }
  } else if (row == "iiam" || row == "lc-iiam") {
    const bool tailored = row == "lc-iiam";
    switch (regime) {
      case TableRegime::Level:
        if (tailored) {
          return pow(eps, 2 * (m + 1)) /
                 (pow(2 * n, m + 1) * rfact(m + 1));
        }
        return pow(eps, m + 1) / rfact(m + 1);
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return pow(n, 2 * m) / (rfact(m) * rfact(m));
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "iilm-kf" || row == "iilm-na") {
    const bool agnostic = row == "iilm-kf";
    switch (regime) {
      case TableRegime::Level:
        if (agnostic) {
          return pow(eps, m + 1) / pow(n, m) * rdf(m) / rfact(m + 1);
        }
        return Real(0);
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return Real(15) / 7 * pow(Real(7) / 2, 2 * n);
      case TableRegime::Boundary:
        return b_star;
    }
  } else if (row == "iism-kf" || row == "iism-na" || row == "lc-iism") {
    const bool tailored = row == "lc-iism";
    switch (regime) {
      case TableRegime::Level:
        if (m + 1 > big_n) {
          return Real(0);
        }
        if (tailored) {
          return pow(eps, 2 * (m + 1)) * rfalling(big_n, m) * rdf(m) /
                 (pow(Real(2), m + 1) * pow(n, 2 * (m + 1)) * rfact(m + 1));
        }
        return pow(eps, m + 1) * rfalling(big_n, m) * rdf(m) /
               (pow(n, m + 1) * rfact(m + 1));
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return pow(Real(4), m + 1) / pi;
      case TableRegime::Boundary:
        if (tailored) {
          return sqrt(n * pow(Real(4), log(b_star) / log(pi * s_star)));
        }
        return pow(Real(4), log(b_star) / log(pi * s_star)) / 2;
    }
  } else if (row == "lc") {
    switch (regime) {
      case TableRegime::Level:
        return eps * eps / (2 * n);
      case TableRegime::SmallNoise:
      case TableRegime::LargeCircuit:
        return Real(1);
      case TableRegime::Boundary:
        return sqrt(2 * n * b_star);
    }
  } else if (row == "lc-csm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return 1 + (Real(4) / 3 - 1 / (12 * n * n)) * eps * eps;
      case TableRegime::LargeCircuit: {
        if (eps == 0) {
          return Real(1);
        }
        const Real c = cosh(eps);
        return (2 - tanh(eps) / eps) * c * c;
      }
      case TableRegime::Boundary:
        return log(2 * s_star) / 2;
    }
  } else if (row == "lc-tiilm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return Real(2);
      case TableRegime::LargeCircuit:
        return 2 * (1 + sqrt(Real(2) / n) * eps);
      case TableRegime::Boundary:
        return sqrt(n / 2) * (s_star / 2 - 1);
    }
  } else if (row == "tiilm") {
    switch (regime) {
      case TableRegime::Level:
        return Real(0);
      case TableRegime::SmallNoise:
        return Real(2);
      case TableRegime::LargeCircuit:
        return exp(2 * eps) * (1 + pi);
      case TableRegime::Boundary:
        return log(s_star / (1 + pi)) / 2;
    }
  }
  not_tabulated(row, NoiseKind::RE);
}

}  // namespace

Real table_metrics(const MethodSelector& selector, NoiseKind kind,
                   TableRegime regime, const TableInputs& inputs) {
  const std::string row = selector_name(selector);
  if (stochastic_kind(kind)) {
    return stochastic_cell(row, regime, inputs);
  }
  if (kind == NoiseKind::RE) {
    return rotational_cell(row, regime, inputs);
  }
  not_tabulated(row, kind);
}

// ---------------------------------------------------------------------------
// Noise boundary solver
// ---------------------------------------------------------------------------

namespace {

/// Smallest root of f(e) = target for increasing f with f(0) < target.
Real bisect_increasing(const std::function<Real(const Real&)>& f,
                       const Real& target, Real hi_seed) {
  Real lo(0);
  Real hi = hi_seed;
  int guard = 0;
  while (f(hi) < target && ++guard < 64) {
    hi *= 2;
  }
  if (guard >= 64) {
    throw NoSolution("the runtime-scaling model never reaches the target");
  }
  for (int it = 0; it < 300; ++it) {
    const Real mid = (lo + hi) / 2;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

/// Boundary of rows whose scaling has a positive zero-noise floor:
/// NoSolution below the floor, zero at it, else solve S(e) = S*.
Real floored_boundary(const Real& floor_value, const Real& s_star,
                      const std::function<Real(const Real&)>& f,
                      const Real& hi_seed) {
  if (s_star < floor_value) {
    throw NoSolution("target runtime scaling is below the zero-noise floor");
  }
  if (s_star == floor_value) {
    return Real(0);
  }
  return bisect_increasing(f, s_star, hi_seed);
}

}  // namespace

Real noise_boundary(const MethodSelector& selector, NoiseKind kind,
                    const Real& target_bias, const Real& target_scaling,
                    long n_gates, const Real& a_param) {
  if (!(target_scaling > 1)) {
    throw InvalidConfig("the runtime-scaling budget must exceed 1");
  }
  if (!(target_bias > 0)) {
    throw InvalidConfig("the bias tolerance must be positive");
  }
  const std::string row = selector_name(selector);
  const Real n(n_gates);
  const Real pi = pi_value();
  const Real s_star = target_scaling;
  const Real b_star = target_bias;

  if (stochastic_kind(kind)) {
    if (row == "unmitigated" || row == "iiam" || row == "iilm-kf" ||
        row == "iilm-na") {
      return b_star;
    }
    if (row == "clm") {
      return bisect_increasing([](const Real& e) { return exp(2 * e); },
                               s_star, Real(1));
    }
    if (row == "csm") {
      return floored_boundary(
          Real(2), s_star,
          [&n](const Real& e) {
            const Real c = cosh(sqrt(2 * n * e));
            return 2 * c * c;
          },
          Real(1) / n);
    }
    if (row == "iism-kf" || row == "iism-na") {
      const Real threshold = 4 / pi;
      if (s_star < threshold) {
        throw NoSolution("synchronous insertion needs scaling above 4/pi");
      }
      if (s_star == threshold) {
        return Real(0);
      }
      return pow(Real(4), log(2 * b_star) / log(pi * s_star)) / 2;
    }
    if (row == "tiilm") {
      const Real floor_value = 1 + 2 * log(Real(2));
      const Real aa = a_param;
      return floored_boundary(
          floor_value, s_star,
          [&floor_value, &aa](const Real& e) {
            return floor_value * exp(4 * (1 + aa) * e);
          },
          Real(1));
    }
    not_tabulated(row, kind);
  }

  if (kind == NoiseKind::RE) {
    if (row == "unmitigated" || row == "iiam" || row == "iilm-kf" ||
        row == "iilm-na" || row == "lc-iiam") {
      return b_star;
    }
    if (row == "clm") {
      return bisect_increasing([](const Real& e) { return exp(2 * e); },
                               s_star, Real(1));
    }
    if (row == "chilm" || row == "lc-clm") {
      return bisect_increasing(
          [&n](const Real& e) { return 1 + e * e / n; }, s_star, sqrt(n));
    }
    if (row == "chism") {
      // Increasing on (0, pi/2) with a pole at pi/2: shrink towards the
      // pole until the target is bracketed, then bisect.
      auto f = [](const Real& e) {
        if (e == 0) {
          return Real(1);
        }
        const Real c = cos(e);
        return 3 / (2 * c * c) - tan(e) / (2 * e);
      };
      Real hi = pi / 2;
      Real gap = pi / 4;
      while (f(hi - gap) < s_star) {
        gap /= 2;
      }
      Real lo(0);
      hi -= gap;
      for (int it = 0; it < 300; ++it) {
        const Real mid = (lo + hi) / 2;
        if (f(mid) < s_star) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return (lo + hi) / 2;
    }
    if (row == "ciilm") {
      return floored_boundary(
          Real(6), s_star,
          [](const Real& e) { return 6 * exp(4 * sqrt(Real(3)) * e); },
          Real(1));
    }
    if (row == "csm") {
      auto f = [](const Real& e) {
        return 1 + sin(e) * (3 * cos(e) + sin(e));
      };
      const Real peak = (pi - atan(Real(3))) / 2;
      if (!(s_star < f(peak))) {
        return pi / 2;  // structural limit: the node system wraps there
      }
      Real lo(0);
      Real hi = peak;
      for (int it = 0; it < 300; ++it) {
        const Real mid = (lo + hi) / 2;
        if (f(mid) < s_star) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      return (lo + hi) / 2;
    }
    if (row == "iism-kf" || row == "iism-na" || row == "lc-iism") {
      const Real threshold = 4 / pi;
      if (s_star < threshold) {
        throw NoSolution("synchronous insertion needs scaling above 4/pi");
      }
      if (s_star == threshold) {
        return Real(0);
      }
      const Real deph = pow(Real(4), log(b_star) / log(pi * s_star));
      return row == "lc-iism" ? sqrt(n * deph) : deph / 2;
    }
    if (row == "lc") {
      return sqrt(2 * n * b_star);
    }
    if (row == "lc-csm") {
      return floored_boundary(
          Real(1), s_star,
          [](const Real& e) {
            if (e == 0) {
              return Real(1);
            }
            const Real c = cosh(e);
            return (2 - tanh(e) / e) * c * c;
          },
          Real(1));
    }
    if (row == "lc-tiilm") {
      const Real nn = n;
      return floored_boundary(
          Real(2), s_star,
          [&nn](const Real& e) {
            return 2 * (1 + sqrt(Real(2) / nn) * e);
          },
          sqrt(n));
    }
    if (row == "tiilm") {
      const Real floor_value = 1 + pi;
      return floored_boundary(
          floor_value, s_star,
          [&floor_value](const Real& e) {
            return floor_value * exp(2 * e);
          },
          Real(1));
    }
    not_tabulated(row, kind);
  }

  not_tabulated(row, kind);
}

// ---------------------------------------------------------------------------
// Hypergeometric helper and robustness analysis
// ---------------------------------------------------------------------------

Real hypergeometric_2f1_terminating(const Real& a, long m, const Real& c,
                                    const Real& z) {
  if (m < 0) {
    throw IndexOutOfRange("series order must be non-negative");
  }
  Real sum(0);
  Real term(1);
  for (long k = 0; k <= m; ++k) {
    sum += term;
    if (k == m) {
      break;
    }
    const Real denom = (c + k) * (k + 1);
    if (denom == 0) {
      throw InvalidConfig(
          "lower series parameter hits a non-positive integer");
    }
    term *= (a + k) * Real(k - m) / denom * z;
  }
  return sum;
}

std::vector<Real> perturbed_clm_coefficients(const NoiseChannelSpec& spec,
                                             const PerturbationFactors& y) {
  const Real half_pi = pi_value() / 2;
  const Real phi = spec.phi;
  const Real p = spec.p;
  const Real phis[3] = {phi, (1 + y.y_R_S) * phi + half_pi,
                        (1 + y.y_R_S + y.y_R_P) * phi + 3 * half_pi};
  const Real ps[3] = {p, (1 + y.y_S_S) * p, (1 + y.y_S_S + y.y_S_P) * p};

  // Rows: normalisation, real eigenvalue part, imaginary eigenvalue part.
  Real sys[3][4];
  for (int j = 0; j < 3; ++j) {
    sys[0][j] = 1;
    sys[1][j] = (1 - 2 * ps[j]) * cos(phis[j]);
    sys[2][j] = (1 - 2 * ps[j]) * sin(phis[j]);
  }
  sys[0][3] = 1;
  sys[1][3] = 1;
  sys[2][3] = 0;

  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (abs(sys[r][col]) > abs(sys[pivot][col])) {
        pivot = r;
      }
    }
    if (sys[pivot][col] == 0) {
      throw SingularSystem(
          "perturbed variants no longer span the channel eigenvalues");
    }
    for (int k = 0; k < 4; ++k) {
      std::swap(sys[col][k], sys[pivot][k]);
    }
    for (int r = 0; r < 3; ++r) {
      if (r == col) {
        continue;
      }
      const Real factor = sys[r][col] / sys[col][col];
      for (int k = col; k < 4; ++k) {
        sys[r][k] -= factor * sys[col][k];
      }
    }
  }
  return {sys[0][3] / sys[0][0], sys[1][3] / sys[1][1],
          sys[2][3] / sys[2][2]};
}

MetricsReport perturbed_chilm_metrics(const NoiseChannelSpec& spec,
                                      const PerturbationFactors& y,
                                      long n_gates) {
  if (!(y.y_R_HI > 0)) {
    throw InvalidFactors(
        "the hidden inverse requires a positive rotational factor");
  }
  const Real eps_sn = 2 * spec.p * Real(n_gates);
  const Real e_eff = (y.y_S_HI + y.y_R_HI) / (1 + y.y_R_HI) * eps_sn;
  MetricsReport report;
  report.sampling_cost = exp(e_eff);
  report.length_factor = 1;
  report.width_factor = 1;
  report.area_factor = 1;
  report.runtime_scaling = exp(2 * e_eff);
  report.mitigated_noise_level = 0;
  report.mitigated_proxy_bias = Real(0);
  return report;
}

Real perturbed_chilm_boundary(const PerturbationFactors& y,
                              const Real& target_scaling) {
  if (!(y.y_R_HI > 0)) {
    throw InvalidFactors(
        "the hidden inverse requires a positive rotational factor");
  }
  if (!(target_scaling > 1)) {
    throw InvalidConfig("the runtime-scaling budget must exceed 1");
  }
  return (1 + y.y_R_HI) / (y.y_S_HI + y.y_R_HI) * log(target_scaling) / 2;
}

IismRobustnessReport iism_na_robustness(const Real& p, const Real& y_dagger,
                                        int order, long n_gates) {
  if (order < 0) {
    throw UnsupportedOrder("the extrapolation order must be non-negative");
  }
  if (y_dagger < 0) {
    throw InvalidFactors("the inverse-gate factor must be non-negative");
  }
  const long m = order;
  const Real yd = y_dagger;

  // Amplified amplitudes: i round trips through the noisy inverse leave
  // x_i = [1 - (1 - 2(1+y)x + 4yx^2)^i (1 - 2x)]/2.
  std::vector<Real> x(m + 1);
  const Real base = 1 - 2 * (1 + yd) * p + 4 * yd * p * p;
  for (long i = 0; i <= m; ++i) {
    x[i] = (1 - pow(base, static_cast<int>(i)) * (1 - 2 * p)) / 2;
  }

  IismRobustnessReport report;
  report.coefficients.resize(m + 1);
  for (long i = 0; i <= m; ++i) {
    Real c(1);
    for (long k = 0; k <= m; ++k) {
      if (k == i) {
        continue;
      }
      const Real gap = x[k] - x[i];
      if (gap == 0) {
        throw DegenerateAmplitudes(
            "coincident amplified amplitudes in the extrapolation ladder");
      }
      c *= x[k] / gap;
    }
    report.coefficients[i] = c;
  }

  // Leading-order ladder value at rung i is (1 + i(1+y)) x, which gives
  // the hypergeometric closed forms below.
  Real ladder_product(1);
  for (long k = 0; k <= m; ++k) {
    ladder_product *= 1 + k * (1 + yd);
  }
  const Real cost = ladder_product *
                    hypergeometric_2f1_terminating(
                        1 / (1 + yd), m, (yd + 2) / (yd + 1), Real(-1)) /
                    (pow(1 + yd, static_cast<int>(m)) * rfact(m));
  report.sampling_cost = cost;

  Real weighted(0);
  for (long i = 0; i <= m; ++i) {
    Real lead = ladder_product / (1 + i * (1 + yd));
    lead /= pow(1 + yd, static_cast<int>(m)) * rfact(i) * rfact(m - i);
    weighted += lead * (2 * i + 1);
  }
  report.length_factor = weighted / cost;

  Real level_product(1);
  for (long k = 1; k <= m; ++k) {
    level_product *= 1 + k * (1 + yd);
  }
  report.mitigated_noise_level =
      pow(2 * p * Real(n_gates), m + 1) * level_product / rfact(m + 1);
  return report;
}

MitigationPlan assemble_plan(const MethodSelector& selector,
                             const NoiseChannelSpec& spec, long n_gates,
                             int order, const std::vector<long>& m_values) {
  if (selector.lc_stage && selector.method != Method::LC) {
    auto staged = lc_pretailor(spec, spec.phi, -spec.phi);
    MethodSelector inner = selector;
    inner.lc_stage = false;
    MitigationPlan residual_plan =
        assemble_plan(inner, staged.second, n_gates, order, m_values);
    return compose_plans(staged.first, residual_plan);
  }
  switch (selector.method) {
    case Method::Unmitigated:
      return unmitigated_plan();
    case Method::CLM:
      return clm_plan(spec);
    case Method::CHILM:
      return chilm_plan(spec);
    case Method::CHISM:
      return chism_plan(spec, order);
    case Method::CIILM:
      return ciilm_plan(spec);
    case Method::CSM:
      return csm_plan(spec, order);
    case Method::IIAM:
      return iiam_plan(n_gates, order);
    case Method::IILM:
      return iilm_plan(spec, order, selector.noise_aware);
    case Method::IISM:
      return iism_plan(spec, order, selector.noise_aware);
    case Method::LC:
      return lc_pretailor(spec, spec.phi, -spec.phi).first;
    case Method::TIILM:
      return tiilm_plan(spec, n_gates, m_values);
  }
  throw InvalidConfig("unknown method selector");
}

}  // namespace qem
