// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/noise.hpp"

#include <numeric>

#include "qem/errors.hpp"

namespace qem {

namespace {

void check_probability(const Real& p, const char* name) {
  if (p < 0 || p > 1) {
    throw InvalidProbability(std::string(name) + " must lie in [0, 1], got " +
                             format_real(p, 17));
  }
}

void check_gate_count(long n_gates) {
  if (n_gates < 1) {
    throw IndexOutOfRange("gate count must be positive, got " +
                          std::to_string(n_gates));
  }
}

}  // namespace

NoiseChannelSpec NoiseChannelSpec::sn(const Real& p, const Real& a,
                                      std::uint64_t generator) {
  check_probability(p, "stochastic amplitude");
  if (a < 0 || a > 1) {
    throw InvalidProbability("closure parameter must lie in [0, 1], got " +
                             format_real(a, 17));
  }
  NoiseChannelSpec spec;
  spec.kind = NoiseKind::SN;
  spec.p = p;
  spec.a_param = a;
  spec.generator = generator;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::re(const Real& phi,
                                      std::uint64_t generator) {
  NoiseChannelSpec spec;
  spec.kind = NoiseKind::RE;
  spec.phi = phi;
  spec.generator = generator;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::ore(const Real& p, const Real& phi,
                                       std::uint64_t generator) {
  check_probability(p, "stochastic amplitude");
  NoiseChannelSpec spec;
  spec.kind = NoiseKind::ORE;
  spec.p = p;
  spec.phi = phi;
  spec.generator = generator;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::dephasing(const Real& p,
                                             std::uint64_t generator) {
  check_probability(p, "stochastic amplitude");
  NoiseChannelSpec spec;
  spec.kind = NoiseKind::Dephasing;
  spec.p = p;
  spec.a_param = 1;
  spec.generator = generator;
  return spec;
}

NoiseChannelSpec NoiseChannelSpec::gaussian_ore(const Real& mu,
                                                const Real& sigma,
                                                std::uint64_t generator) {
  const Real p = (1 - exp(-sigma * sigma / 2)) / 2;
  return ore(p, mu, generator);
}

bool NoiseChannelSpec::is_noise_free() const {
  return p == 0 && phi == 0;
}

std::vector<Real> decomposition(const NoiseChannelSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::SN:
    case NoiseKind::Dephasing:
      return {1 - spec.p, spec.p};
    case NoiseKind::RE: {
      const Real half = spec.phi / 2;
      const Real c = cos(half);
      return {c * c, sin(spec.phi), 1 - c * c};
    }
    case NoiseKind::ORE: {
      const Real half = spec.phi / 2;
      const Real c2 = cos(half) * cos(half);
      const Real cphi = cos(spec.phi);
      return {c2 - spec.p * cphi, (1 - 2 * spec.p) * sin(spec.phi),
              1 - c2 + spec.p * cphi};
    }
  }
  throw Error("unreachable noise kind");
}

std::vector<ComplexValue> eigenvalues(const NoiseChannelSpec& spec) {
  switch (spec.kind) {
    case NoiseKind::SN: {
      const Real lambda = 1 - (1 + spec.a_param) * spec.p;
      const Real mag = abs(lambda);
      const Real phase = lambda < 0 ? pi_value() : Real(0);
      return {{Real(1), Real(0)}, {mag, phase}};
    }
    case NoiseKind::Dephasing: {
      const Real lambda = 1 - 2 * spec.p;
      const Real mag = abs(lambda);
      const Real phase = lambda < 0 ? pi_value() : Real(0);
      return {{Real(1), Real(0)}, {mag, phase}};
    }
    case NoiseKind::RE:
      return {{Real(1), Real(0)},
              {Real(1), spec.phi},
              {Real(1), -spec.phi}};
    case NoiseKind::ORE: {
      const Real mag = abs(1 - 2 * spec.p);
      return {{Real(1), Real(0)}, {mag, spec.phi}, {mag, -spec.phi}};
    }
  }
  throw Error("unreachable noise kind");
}

Real noise_level(const NoiseChannelSpec& spec, long n_gates) {
  check_gate_count(n_gates);
  const Real n(n_gates);
  switch (spec.kind) {
    case NoiseKind::SN:
    case NoiseKind::Dephasing:
      return 2 * spec.p * n;
    case NoiseKind::RE:
      return n * abs(spec.phi);
    case NoiseKind::ORE:
      return 2 * spec.p * n + n * abs(spec.phi);
  }
  throw Error("unreachable noise kind");
}

Real unmitigated_proxy_bias(const NoiseChannelSpec& spec, long n_gates) {
  check_gate_count(n_gates);
  const std::vector<Real> f = decomposition(spec);
  Real abs_sum = 0;
  for (const Real& fk : f) {
    abs_sum += abs(fk);
  }
  const Real f0 = f[0];
  const unsigned long n = static_cast<unsigned long>(n_gates);
  return abs(1 - pow(f0, n)) + pow(abs_sum, n) - pow(abs(f0), n);
}

BigInt multiplicity(NoiseKind kind, long n_gates,
                    const std::vector<long>& partition) {
  check_gate_count(n_gates);
  if (kind == NoiseKind::RE) {
    // The partition names a single winding class k; each of the k net error
    // applications may be realised directly or through l cancelling pairs.
    if (partition.size() != 1) {
      throw InvalidPartition(
          "rotational multiplicity takes a single winding class");
    }
    const long k = partition[0];
    if (k < 0 || k > 2 * n_gates) {
      throw InvalidPartition("winding class " + std::to_string(k) +
                             " outside 0..2N for N = " +
                             std::to_string(n_gates));
    }
    BigInt total = 0;
    for (long l = 0; l <= k / 2; ++l) {
      if (n_gates + l - k < 0) {
        continue;
      }
      BigInt term = factorial(n_gates);
      term /= factorial(l);
      term /= factorial(k - 2 * l);
      term /= factorial(n_gates + l - k);
      term <<= static_cast<unsigned>(k - 2 * l);
      total += term;
    }
    return total;
  }
  long total = 0;
  for (long l : partition) {
    if (l < 0) {
      throw InvalidPartition("negative occupation number");
    }
    total += l;
  }
  if (total != n_gates) {
    throw InvalidPartition("occupation numbers sum to " +
                           std::to_string(total) + ", expected " +
                           std::to_string(n_gates));
  }
  BigInt result = factorial(n_gates);
  for (long l : partition) {
    result /= factorial(l);
  }
  return result;
}

Real compose_stochastic(const Real& p1, const Real& p2, const Real& a) {
  return p1 + p2 - (1 + a) * p1 * p2;
}

Real amplified_stochastic(const Real& p, const Real& a, long k) {
  if (k < 0) {
    throw IndexOutOfRange("application count must be non-negative, got " +
                          std::to_string(k));
  }
  return (1 - pow(1 - (1 + a) * p, static_cast<unsigned long>(k))) / (1 + a);
}

}  // namespace qem
