// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "qem/errors.hpp"

namespace qem {

namespace {

std::uint64_t promoted_generator(const GateSpec& gate) {
  return gate.generator << (2 * (gate.lowest_qubit - 1));
}

bool stochastic_family(const NoiseChannelSpec& spec) {
  return spec.kind == NoiseKind::SN || spec.kind == NoiseKind::Dephasing;
}

/// The gate's channel as seen by a plan: plans annotated with a
/// pre-tailoring stage act on the exact residual stochastic channel.
NoiseChannelSpec resolved_noise(const GateSpec& gate,
                                const MitigationPlan* plan) {
  if (plan != nullptr && plan->has_lc_stage &&
      plan->method != Method::LC) {
    return NoiseChannelSpec::dephasing(plan->lc_residual_p,
                                       gate.noise.generator);
  }
  return gate.noise;
}

/// Flip probability reproducing the channel's damping factor
/// 1 - (1+a) p_eff on the anticommuting sector.
Real effective_flip(const GateVariant& variant,
                    const NoiseChannelSpec& base) {
  const Real p = effective_p(variant, base);
  if (stochastic_family(base)) {
    return (base.a_param + 1) * p / 2;
  }
  return p;
}

void apply_variant(BlochVector& v, const GateSpec& gate,
                   const GateVariant& variant,
                   const NoiseChannelSpec& base) {
  const std::uint64_t gen = promoted_generator(gate);
  apply_pauli_rotation(v, gen, gate.target_angle, Real(0));
  apply_pauli_rotation(v, gen, effective_phi(variant, base),
                       effective_flip(variant, base));
}

BlochVector ideal_pass(const Circuit& circuit) {
  BlochVector v = initial_bloch(circuit.n_qubits);
  for (const GateSpec& gate : circuit.gates) {
    apply_pauli_rotation(v, promoted_generator(gate), gate.target_angle,
                         Real(0));
  }
  return v;
}

void accumulate(BlochVector& acc, const Real& c, const BlochVector& v) {
  for (std::size_t k = 0; k < acc.entries.size(); ++k) {
    acc.entries[k] += c * v.entries[k];
  }
}

BlochVector local_pass(const Circuit& circuit, const MitigationPlan& plan) {
  if (!plan.uniform_local &&
      plan.per_gate_variants.size() != circuit.gates.size()) {
    throw DimensionMismatch("per-gate plan lists " +
                            std::to_string(plan.per_gate_variants.size()) +
                            " gates but the circuit has " +
                            std::to_string(circuit.gates.size()));
  }
  BlochVector v = initial_bloch(circuit.n_qubits);
  BlochVector acc = v;
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const GateSpec& gate = circuit.gates[g];
    const NoiseChannelSpec base = resolved_noise(gate, &plan);
    const auto& variants =
        plan.per_gate_variants[plan.uniform_local ? 0 : g];
    std::fill(acc.entries.begin(), acc.entries.end(), Real(0));
    for (const WeightedVariant& wv : variants) {
      BlochVector branch = v;
      apply_variant(branch, gate, wv.variant, base);
      accumulate(acc, wv.coefficient, branch);
    }
    std::swap(v, acc);
  }
  return v;
}

std::string variant_signature(const GateVariant& variant) {
  std::ostringstream key;
  key << format_real(variant.custom_angle, 40) << '|'
      << format_real(variant.custom_stochastic, 40) << '|'
      << variant.identity_insertions << '|' << variant.hidden_inverse;
  return key.str();
}

BlochVector synchronous_pass(const Circuit& circuit,
                             const MitigationPlan& plan) {
  BlochVector out = initial_bloch(circuit.n_qubits);
  std::fill(out.entries.begin(), out.entries.end(), Real(0));
  std::map<std::string, BlochVector> memo;
  for (const CircuitClass& cls : plan.circuit_variants) {
    const std::string key = variant_signature(cls.uniform);
    auto found = memo.find(key);
    if (found == memo.end()) {
      BlochVector v = initial_bloch(circuit.n_qubits);
      for (const GateSpec& gate : circuit.gates) {
        apply_variant(v, gate, cls.uniform, resolved_noise(gate, &plan));
      }
      found = memo.emplace(key, std::move(v)).first;
    }
    accumulate(out, cls.coefficient * to_real(cls.multiplicity),
               found->second);
  }
  return out;
}

BlochVector asynchronous_pass(const Circuit& circuit,
                              const MitigationPlan& plan) {
  // One state per insertion profile: the multiset of insertion counts
  // already assigned to distinct earlier gates.  Each gate either stays
  // plain or consumes one part, so after the final gate every profile
  // holds the sum over exactly its class's member circuits.
  using Profile = std::vector<long>;
  std::map<Profile, BlochVector> states;
  states[{}] = initial_bloch(circuit.n_qubits);

  long max_total = 0;
  std::vector<Profile> profiles;
  for (const CircuitClass& cls : plan.circuit_variants) {
    Profile p = cls.insertion_partition;
    std::sort(p.begin(), p.end(), std::greater<long>());
    long total = 0;
    for (long part : p) {
      total += part;
    }
    max_total = std::max(max_total, total);
    profiles.push_back(std::move(p));
  }

  for (const GateSpec& gate : circuit.gates) {
    const NoiseChannelSpec base = resolved_noise(gate, &plan);
    std::map<Profile, BlochVector> next;
    for (const auto& [profile, v] : states) {
      long total = 0;
      for (long part : profile) {
        total += part;
      }
      // The gate stays plain.
      {
        BlochVector branch = v;
        apply_variant(branch, gate, GateVariant{}, base);
        auto it = next.find(profile);
        if (it == next.end()) {
          next.emplace(profile, std::move(branch));
        } else {
          accumulate(it->second, Real(1), branch);
        }
      }
      // The gate consumes one new part, extending the profile.
      for (long part = 1; part + total <= max_total; ++part) {
        Profile extended = profile;
        extended.push_back(part);
        std::sort(extended.begin(), extended.end(), std::greater<long>());
        if (std::find(profiles.begin(), profiles.end(), extended) ==
            profiles.end()) {
          bool is_prefix = false;
          for (const Profile& target : profiles) {
            if (std::includes(target.begin(), target.end(),
                              extended.begin(), extended.end(),
                              std::greater<long>())) {
              is_prefix = true;
              break;
            }
          }
          if (!is_prefix) {
            continue;
          }
        }
        GateVariant inserted;
        inserted.identity_insertions = part;
        BlochVector branch = v;
        apply_variant(branch, gate, inserted, base);
        auto it = next.find(extended);
        if (it == next.end()) {
          next.emplace(std::move(extended), std::move(branch));
        } else {
          accumulate(it->second, Real(1), branch);
        }
      }
    }
    states = std::move(next);
  }

  BlochVector out = initial_bloch(circuit.n_qubits);
  std::fill(out.entries.begin(), out.entries.end(), Real(0));
  for (std::size_t k = 0; k < plan.circuit_variants.size(); ++k) {
    auto it = states.find(profiles[k]);
    if (it == states.end()) {
      continue;  // infeasible class (more parts than gates)
    }
    accumulate(out, plan.circuit_variants[k].coefficient, it->second);
  }
  return out;
}

SimulationResult assemble(const Circuit& circuit, BlochVector mitigated) {
  const QubitReadout ideal = measure_qubit1(ideal_pass(circuit));
  const QubitReadout got = measure_qubit1(mitigated);
  SimulationResult result;
  result.bias_x = abs(ideal.x - got.x);
  result.bias_y = abs(ideal.y - got.y);
  result.bias_z = abs(ideal.z - got.z);
  result.benchmark_bias =
      sqrt((result.bias_x * result.bias_x + result.bias_y * result.bias_y +
            result.bias_z * result.bias_z) /
           3);
  result.norm_check = got.norm;
  result.bloch_out = std::move(mitigated);
  return result;
}

}  // namespace

SimulationResult simulate(const Circuit& circuit) {
  BlochVector v = initial_bloch(circuit.n_qubits);
  for (const GateSpec& gate : circuit.gates) {
    apply_variant(v, gate, GateVariant{}, gate.noise);
  }
  return assemble(circuit, std::move(v));
}

SimulationResult simulate(const Circuit& circuit,
                          const MitigationPlan& plan) {
  BlochVector v;
  switch (plan.scope) {
    case PlanScope::Local:
      v = local_pass(circuit, plan);
      break;
    case PlanScope::Synchronous:
      v = synchronous_pass(circuit, plan);
      break;
    case PlanScope::Asynchronous:
      v = asynchronous_pass(circuit, plan);
      break;
  }
  return assemble(circuit, std::move(v));
}

// ---------------------------------------------------------------------------
// Monte-Carlo executor (double precision)
// ---------------------------------------------------------------------------

namespace {

struct RotationPair {
  std::size_t i;
  std::size_t j;
  double sign;  // sign applied to the i-component update
};

struct GeneratorOps {
  std::vector<RotationPair> pairs;
  std::vector<std::size_t> anti;  // all indices anticommuting with the word
};

GeneratorOps build_generator_ops(std::uint64_t generator, int n_qubits) {
  GeneratorOps ops;
  const std::size_t d = std::size_t(1) << (2 * n_qubits);
  for (std::size_t i = 0; i < d; ++i) {
    if (!anticommutes(generator, i, n_qubits)) {
      continue;
    }
    ops.anti.push_back(i);
    const PauliProduct partner = pauli_product(generator, i, n_qubits);
    if (partner.index < i) {
      continue;
    }
    ops.pairs.push_back(
        {i, partner.index, partner.phase_quarter == 1 ? 1.0 : -1.0});
  }
  return ops;
}

void rotate(std::vector<double>& v, const GeneratorOps& ops, double theta) {
  if (theta == 0) {
    return;
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (const RotationPair& pair : ops.pairs) {
    const double vi = v[pair.i];
    const double vj = v[pair.j];
    v[pair.i] = c * vi + pair.sign * s * vj;
    v[pair.j] = c * vj - pair.sign * s * vi;
  }
}

void flip(std::vector<double>& v, const GeneratorOps& ops) {
  for (std::size_t idx : ops.anti) {
    v[idx] = -v[idx];
  }
}

/// SplitMix64: a counter-based generator; each run derives an independent
/// substream from (seed, run index) so results do not depend on worker
/// scheduling.  The starting state is a 64-bit hash of (seed, stream):
/// deriving it affinely from the stream index would make consecutive runs
/// walk overlapping windows of one global state progression and correlate
/// their outcomes.
struct SplitMix64 {
  std::uint64_t state;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream) {
    state = mix(seed + 0xD1B54A32D192ED03ull);
    state = mix(state ^ (stream * 0x9E3779B97F4A7C15ull));
  }

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    return mix(state);
  }

  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }
};

struct VariantDraw {
  double probability = 1;
  double sign = 1;
  double eff_phi = 0;
  double eff_flip = 0;
  long insertions = 0;
  double custom_flip = 0;  // flip amplitude excluding the base channel
};

struct GateDraw {
  std::size_t ops_index = 0;
  double omega = 0;
  std::vector<VariantDraw> variants;  // local scope: per-gate mixtures
};

struct CompiledMc {
  std::size_t dim = 0;
  std::vector<GeneratorOps> ops;  // distinct promoted generators
  std::vector<GateDraw> gates;
  std::vector<double> initial;
  // Synchronous / asynchronous class table.
  struct ClassDraw {
    double probability = 1;
    double sign = 1;
    GateVariant variant;
    std::vector<long> partition;
  };
  std::vector<ClassDraw> classes;
  // Per-gate channel parameters for class-driven execution.
  std::vector<NoiseChannelSpec> base;
  double cost = 1;
  bool lc = false;
  double lc_phi0 = 0;
  double lc_phi1 = 0;
  double lc_prob1 = 0;
  PlanScope scope = PlanScope::Local;
};

void check_samplable(const NoiseChannelSpec& spec) {
  if (stochastic_family(spec) && spec.a_param != 1 && spec.p != 0) {
    throw UnsupportedNoise(
        "stochastic channels with a non-self-inverse error operator "
        "(a != 1) cannot be sampled as explicit branches");
  }
}

CompiledMc compile_mc(const Circuit& circuit, const MitigationPlan& plan) {
  CompiledMc mc;
  mc.dim = std::size_t(1) << (2 * circuit.n_qubits);
  mc.scope = plan.scope;
  mc.lc = plan.has_lc_stage && plan.method != Method::LC;
  if (mc.lc) {
    mc.lc_phi0 = static_cast<double>(plan.lc_phi0);
    mc.lc_phi1 = static_cast<double>(plan.lc_phi1);
    mc.lc_prob1 = static_cast<double>(plan.lc_prob1);
  }

  std::map<std::uint64_t, std::size_t> known;
  for (const GateSpec& gate : circuit.gates) {
    const std::uint64_t gen = promoted_generator(gate);
    auto found = known.find(gen);
    if (found == known.end()) {
      known.emplace(gen, mc.ops.size());
      mc.ops.push_back(build_generator_ops(gen, circuit.n_qubits));
    }
  }

  const BlochVector v0 = initial_bloch(circuit.n_qubits);
  mc.initial.resize(mc.dim);
  for (std::size_t k = 0; k < mc.dim; ++k) {
    mc.initial[k] = static_cast<double>(v0.entries[k]);
  }

  if (plan.scope == PlanScope::Local &&
      !plan.uniform_local &&
      plan.per_gate_variants.size() != circuit.gates.size()) {
    throw DimensionMismatch("per-gate plan does not match the circuit");
  }

  double cost = 1;
  for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
    const GateSpec& gate = circuit.gates[g];
    NoiseChannelSpec base = gate.noise;
    if (mc.lc) {
      // The mixture is sampled physically; only variant-level custom
      // stochastic channels remain to be branch-sampled.
      base = NoiseChannelSpec::re(gate.noise.phi, gate.noise.generator);
    }
    check_samplable(base);
    GateDraw draw;
    draw.ops_index = known.at(promoted_generator(gate));
    draw.omega = static_cast<double>(gate.target_angle);
    if (plan.scope == PlanScope::Local) {
      const auto& variants =
          plan.per_gate_variants[plan.uniform_local ? 0 : g];
      double local_cost = 0;
      for (const WeightedVariant& wv : variants) {
        local_cost += std::abs(static_cast<double>(wv.coefficient));
      }
      for (const WeightedVariant& wv : variants) {
        VariantDraw vd;
        const double c = static_cast<double>(wv.coefficient);
        vd.probability = std::abs(c) / local_cost;
        vd.sign = c < 0 ? -1.0 : 1.0;
        vd.insertions = wv.variant.identity_insertions;
        vd.eff_phi =
            static_cast<double>(effective_phi(wv.variant, gate.noise));
        vd.eff_flip =
            static_cast<double>(effective_flip(wv.variant, base));
        vd.custom_flip =
            static_cast<double>(wv.variant.custom_stochastic);
        draw.variants.push_back(vd);
      }
      cost *= local_cost;
    }
    mc.base.push_back(base);
    mc.gates.push_back(std::move(draw));
  }

  if (plan.scope != PlanScope::Local) {
    double total = 0;
    for (const CircuitClass& cls : plan.circuit_variants) {
      total += std::abs(static_cast<double>(cls.coefficient)) *
               static_cast<double>(to_real(cls.multiplicity));
    }
    for (const CircuitClass& cls : plan.circuit_variants) {
      CompiledMc::ClassDraw cd;
      const double weight =
          std::abs(static_cast<double>(cls.coefficient)) *
          static_cast<double>(to_real(cls.multiplicity));
      if (weight == 0) {
        continue;
      }
      cd.probability = weight / total;
      cd.sign = cls.coefficient < 0 ? -1.0 : 1.0;
      cd.variant = cls.uniform;
      cd.partition = cls.insertion_partition;
      mc.classes.push_back(cd);
    }
    cost = total;
  }
  mc.cost = cost;
  return mc;
}

/// Net coherent angle of one physical gate application under the
/// pre-tailored mixture: every application (gate or inserted pair member)
/// draws its implementation independently.
double lc_sampled_angle(const CompiledMc& mc, long insertions,
                        SplitMix64& rng) {
  const long applications = 2 * insertions + 1;
  double angle = 0;
  for (long k = 0; k < applications; ++k) {
    angle += rng.bernoulli(mc.lc_prob1) ? mc.lc_phi1 : mc.lc_phi0;
  }
  return angle;
}

double run_once(const CompiledMc& mc, std::size_t obs_index,
                SplitMix64& rng, double& sign_out) {
  std::vector<double> v = mc.initial;
  double sign = 1;

  if (mc.scope == PlanScope::Local) {
    for (const GateDraw& gate : mc.gates) {
      const GeneratorOps& ops = mc.ops[gate.ops_index];
      const double u = rng.uniform();
      double cum = 0;
      const VariantDraw* chosen = &gate.variants.back();
      for (const VariantDraw& vd : gate.variants) {
        cum += vd.probability;
        if (u < cum) {
          chosen = &vd;
          break;
        }
      }
      sign *= chosen->sign;
      rotate(v, ops, gate.omega);
      if (mc.lc) {
        rotate(v, ops, lc_sampled_angle(mc, chosen->insertions, rng));
        if (chosen->custom_flip > 0 &&
            rng.bernoulli(chosen->custom_flip)) {
          flip(v, ops);
        }
      } else {
        rotate(v, ops, chosen->eff_phi);
        if (chosen->eff_flip > 0 && rng.bernoulli(chosen->eff_flip)) {
          flip(v, ops);
        }
      }
    }
  } else {
    const double u = rng.uniform();
    double cum = 0;
    const CompiledMc::ClassDraw* chosen = &mc.classes.back();
    for (const CompiledMc::ClassDraw& cd : mc.classes) {
      cum += cd.probability;
      if (u < cum) {
        chosen = &cd;
        break;
      }
    }
    sign = chosen->sign;
    // Assign the class's insertion counts to distinct gates uniformly.
    std::vector<long> insertions(mc.gates.size(), 0);
    for (long part : chosen->partition) {
      while (true) {
        const std::size_t g = static_cast<std::size_t>(
            rng.uniform() * double(mc.gates.size()));
        if (g < insertions.size() && insertions[g] == 0) {
          insertions[g] = part;
          break;
        }
      }
    }
    for (std::size_t g = 0; g < mc.gates.size(); ++g) {
      const GateDraw& gate = mc.gates[g];
      const GeneratorOps& ops = mc.ops[gate.ops_index];
      GateVariant variant = chosen->variant;
      if (!chosen->partition.empty()) {
        variant = GateVariant{};
        variant.identity_insertions = insertions[g];
      }
      rotate(v, ops, gate.omega);
      if (mc.lc) {
        rotate(v, ops,
               lc_sampled_angle(mc, variant.identity_insertions, rng));
        const double cf =
            static_cast<double>(variant.custom_stochastic);
        if (cf > 0 && rng.bernoulli(cf)) {
          flip(v, ops);
        }
      } else {
        rotate(v, ops,
               static_cast<double>(effective_phi(variant, mc.base[g])));
        const double pf =
            static_cast<double>(effective_flip(variant, mc.base[g]));
        if (pf > 0 && rng.bernoulli(pf)) {
          flip(v, ops);
        }
      }
    }
  }
  sign_out = sign;
  return v[obs_index];
}

}  // namespace

MonteCarloEstimate monte_carlo(const Circuit& circuit,
                               const MitigationPlan& plan,
                               Observable observable, long n_runs,
                               std::uint64_t seed, int n_workers) {
  if (n_runs < 1) {
    throw InvalidConfig("the sampling run count must be positive");
  }
  const CompiledMc mc = compile_mc(circuit, plan);
  const std::size_t obs_index = static_cast<std::size_t>(observable);

  constexpr long block_size = 4096;
  const long n_blocks = (n_runs + block_size - 1) / block_size;
  std::vector<double> block_sum(n_blocks, 0.0);
  std::vector<double> block_sumsq(n_blocks, 0.0);

  int workers = n_workers > 0
                    ? n_workers
                    : static_cast<int>(std::max(
                          1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, n_blocks));

  std::atomic<long> next_block{0};
  auto worker_fn = [&]() {
    while (true) {
      const long b = next_block.fetch_add(1);
      if (b >= n_blocks) {
        return;
      }
      const long lo = b * block_size;
      const long hi = std::min(n_runs, lo + block_size);
      double sum = 0;
      double sumsq = 0;
      for (long run = lo; run < hi; ++run) {
        SplitMix64 rng(seed, static_cast<std::uint64_t>(run));
        double sign = 1;
        const double outcome = run_once(mc, obs_index, rng, sign);
        const double signed_outcome = sign * outcome;
        sum += signed_outcome;
        sumsq += signed_outcome * signed_outcome;
      }
      block_sum[b] = sum;
      block_sumsq[b] = sumsq;
    }
  };

  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) {
    pool.emplace_back(worker_fn);
  }
  worker_fn();
  for (std::thread& t : pool) {
    t.join();
  }

  double total = 0;
  double total_sq = 0;
  for (long b = 0; b < n_blocks; ++b) {
    total += block_sum[b];
    total_sq += block_sumsq[b];
  }
  const double n = static_cast<double>(n_runs);
  const double mean_u = total / n;
  MonteCarloEstimate estimate;
  estimate.n_runs = n_runs;
  estimate.sampling_cost_applied = mc.cost;
  estimate.mean = mc.cost * mean_u;
  if (n_runs > 1) {
    const double var_u =
        std::max(0.0, (total_sq - n * mean_u * mean_u) / (n - 1));
    estimate.std_error = mc.cost * std::sqrt(var_u / n);
  }
  return estimate;
}

// ---------------------------------------------------------------------------
// Exact second moment of one signed sample (doubled-register propagation)
// ---------------------------------------------------------------------------

namespace {

void rotate_rows(std::vector<double>& w, std::size_t d,
                 const GeneratorOps& ops, double c, double s) {
  for (const RotationPair& pair : ops.pairs) {
    double* row_i = w.data() + pair.i * d;
    double* row_j = w.data() + pair.j * d;
    for (std::size_t k = 0; k < d; ++k) {
      const double wi = row_i[k];
      const double wj = row_j[k];
      row_i[k] = c * wi + pair.sign * s * wj;
      row_j[k] = c * wj - pair.sign * s * wi;
    }
  }
}

void rotate_cols(std::vector<double>& w, std::size_t d,
                 const GeneratorOps& ops, double c, double s) {
  for (std::size_t r = 0; r < d; ++r) {
    double* row = w.data() + r * d;
    for (const RotationPair& pair : ops.pairs) {
      const double wi = row[pair.i];
      const double wj = row[pair.j];
      row[pair.i] = c * wi + pair.sign * s * wj;
      row[pair.j] = c * wj - pair.sign * s * wi;
    }
  }
}

void flip_rows_cols(std::vector<double>& w, std::size_t d,
                    const GeneratorOps& ops) {
  for (std::size_t idx : ops.anti) {
    double* row = w.data() + idx * d;
    for (std::size_t k = 0; k < d; ++k) {
      row[k] = -row[k];
    }
  }
  for (std::size_t r = 0; r < d; ++r) {
    double* row = w.data() + r * d;
    for (std::size_t idx : ops.anti) {
      row[idx] = -row[idx];
    }
  }
}

void apply_doubled_realisation(std::vector<double>& w, std::size_t d,
                               const GeneratorOps& ops, double angle,
                               bool flipped) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  rotate_rows(w, d, ops, c, s);
  rotate_cols(w, d, ops, c, s);
  if (flipped) {
    flip_rows_cols(w, d, ops);
  }
}

}  // namespace

double single_run_second_moment(const Circuit& circuit,
                                const MitigationPlan& plan,
                                Observable observable) {
  if (plan.scope == PlanScope::Asynchronous ||
      (plan.has_lc_stage && plan.method != Method::LC)) {
    throw ScopeMismatch(
        "the closed-form second moment covers local and synchronous "
        "plans without a pre-tailoring stage");
  }
  const CompiledMc mc = compile_mc(circuit, plan);
  const std::size_t d = mc.dim;
  const std::size_t obs = static_cast<std::size_t>(observable);

  std::vector<double> w0(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      w0[r * d + c] = mc.initial[r] * mc.initial[c];
    }
  }

  if (plan.scope == PlanScope::Local) {
    std::vector<double> w = std::move(w0);
    std::vector<double> acc(d * d);
    std::vector<double> branch;
    for (const GateDraw& gate : mc.gates) {
      const GeneratorOps& ops = mc.ops[gate.ops_index];
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const VariantDraw& vd : gate.variants) {
        for (int f = 0; f < 2; ++f) {
          const double weight =
              vd.probability * (f == 0 ? 1 - vd.eff_flip : vd.eff_flip);
          if (weight == 0) {
            continue;
          }
          branch = w;
          apply_doubled_realisation(branch, d, ops,
                                    gate.omega + vd.eff_phi, f == 1);
          for (std::size_t k = 0; k < branch.size(); ++k) {
            acc[k] += weight * branch[k];
          }
        }
      }
      std::swap(w, acc);
    }
    return w[obs * d + obs];
  }

  double second = 0;
  for (const CompiledMc::ClassDraw& cd : mc.classes) {
    std::vector<double> w = w0;
    std::vector<double> acc(d * d);
    std::vector<double> branch;
    for (std::size_t g = 0; g < mc.gates.size(); ++g) {
      const GateDraw& gate = mc.gates[g];
      const GeneratorOps& ops = mc.ops[gate.ops_index];
      const double phi =
          static_cast<double>(effective_phi(cd.variant, mc.base[g]));
      const double pf =
          static_cast<double>(effective_flip(cd.variant, mc.base[g]));
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int f = 0; f < 2; ++f) {
        const double weight = f == 0 ? 1 - pf : pf;
        if (weight == 0) {
          continue;
        }
        branch = w;
        apply_doubled_realisation(branch, d, ops, gate.omega + phi,
                                  f == 1);
        for (std::size_t k = 0; k < branch.size(); ++k) {
          acc[k] += weight * branch[k];
        }
      }
      std::swap(w, acc);
    }
    second += cd.probability * w[obs * d + obs];
  }
  return second;
}

}  // namespace qem
