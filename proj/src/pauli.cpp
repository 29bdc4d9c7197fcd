// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/pauli.hpp"

#include <array>

#include "qem/errors.hpp"

namespace qem {

namespace {

// Single-qubit product table: sigma_a * sigma_b = i^phase * sigma_c with
// factors indexed 0 -> I, 1 -> X, 2 -> Y, 3 -> Z.  XY = iZ, YZ = iX,
// ZX = iY, and the reversed orders pick up i^3.
constexpr std::array<std::array<int, 4>, 4> product_factor = {{
    {0, 1, 2, 3},
    {1, 0, 3, 2},
    {2, 3, 0, 1},
    {3, 2, 1, 0},
}};
constexpr std::array<std::array<int, 4>, 4> product_phase = {{
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
}};

std::uint64_t word_count(int n_qubits) {
  return std::uint64_t{1} << (2 * n_qubits);
}

void check_register(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw IndexOutOfRange("register size must be between 1 and 30 qubits, "
                          "got " + std::to_string(n_qubits));
  }
}

void check_probability(const Real& p) {
  if (p < 0 || p > 1) {
    throw InvalidProbability("stochastic error probability must lie in "
                             "[0, 1], got " + format_real(p, 17));
  }
}

}  // namespace

int PauliWord::factor(int qubit) const {
  if (qubit < 1 || qubit > n_qubits) {
    throw IndexOutOfRange("qubit " + std::to_string(qubit) +
                          " outside register of " + std::to_string(n_qubits));
  }
  return static_cast<int>((index >> (2 * (qubit - 1))) & 3);
}

std::string PauliWord::to_string() const {
  static const char* const names = "IXYZ";
  std::string out;
  for (int q = n_qubits; q >= 1; --q) {
    out.push_back(names[factor(q)]);
  }
  return out;
}

PauliWord pauli_word(std::uint64_t index, int n_qubits) {
  check_register(n_qubits);
  if (index >= word_count(n_qubits)) {
    throw IndexOutOfRange("Pauli-word index " + std::to_string(index) +
                          " outside register of " + std::to_string(n_qubits) +
                          " qubits");
  }
  return PauliWord{index, n_qubits};
}

PauliProduct pauli_product(std::uint64_t a, std::uint64_t b, int n_qubits) {
  std::uint64_t out = 0;
  int phase = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int fa = static_cast<int>((a >> (2 * q)) & 3);
    const int fb = static_cast<int>((b >> (2 * q)) & 3);
    out |= static_cast<std::uint64_t>(product_factor[fa][fb]) << (2 * q);
    phase += product_phase[fa][fb];
  }
  return PauliProduct{out, phase & 3};
}

bool anticommutes(std::uint64_t a, std::uint64_t b, int n_qubits) {
  int clashes = 0;
  for (int q = 0; q < n_qubits; ++q) {
    const int fa = static_cast<int>((a >> (2 * q)) & 3);
    const int fb = static_cast<int>((b >> (2 * q)) & 3);
    if (fa != 0 && fb != 0 && fa != fb) {
      ++clashes;
    }
  }
  return (clashes & 1) != 0;
}

std::size_t TransferMatrix::dim() const {
  return std::size_t{1} << (2 * n_qubits);
}

Real& TransferMatrix::at(std::size_t row, std::size_t col) {
  return entries[row * dim() + col];
}

const Real& TransferMatrix::at(std::size_t row, std::size_t col) const {
  return entries[row * dim() + col];
}

TransferMatrix TransferMatrix::identity(int n_qubits) {
  check_register(n_qubits);
  TransferMatrix tm;
  tm.n_qubits = n_qubits;
  const std::size_t d = tm.dim();
  tm.entries.assign(d * d, Real(0));
  for (std::size_t i = 0; i < d; ++i) {
    tm.at(i, i) = 1;
  }
  return tm;
}

namespace {

// Shared construction for rotations generated by a single Pauli word: start
// from the identity and fill the anticommuting two-dimensional blocks.
TransferMatrix rotation_ptm(int n_qubits, std::uint64_t generator,
                            const Real& theta, const Real& p) {
  check_probability(p);
  TransferMatrix tm = TransferMatrix::identity(n_qubits);
  const std::size_t d = tm.dim();
  const Real damp = 1 - 2 * p;
  const Real c = damp * cos(theta);
  const Real s = damp * sin(theta);
  for (std::size_t i = 0; i < d; ++i) {
    if (!anticommutes(generator, i, n_qubits)) {
      continue;
    }
    const PauliProduct partner = pauli_product(generator, i, n_qubits);
    // e^{-i theta/2 P_g} P_i e^{i theta/2 P_g} =
    //   cos(theta) P_i - i sin(theta) P_g P_i, and P_g P_i = i^q P_j,
    // so the cross term carries -i * i^q = +1 for q = 1 and -1 for q = 3.
    const int sign = (partner.phase_quarter == 1) ? 1 : -1;
    tm.at(i, i) = c;
    tm.at(i, partner.index) = sign * s;
  }
  return tm;
}

}  // namespace

TransferMatrix basis_ptm(int axis, const Real& theta, const Real& p) {
  if (axis < 1 || axis > 3) {
    throw IndexOutOfRange("rotation axis must be 1 (X), 2 (Y) or 3 (Z), "
                          "got " + std::to_string(axis));
  }
  return rotation_ptm(1, static_cast<std::uint64_t>(axis), theta, p);
}

TransferMatrix zz_ptm(const Real& theta, const Real& p) {
  return rotation_ptm(2, 15, theta, p);
}

TransferMatrix promote(const TransferMatrix& tm, int lowest_target_qubit,
                       int n_total) {
  check_register(n_total);
  if (lowest_target_qubit < 1 ||
      lowest_target_qubit + tm.n_qubits - 1 > n_total) {
    throw SpanOutOfRange("gate spanning " + std::to_string(tm.n_qubits) +
                         " qubits from qubit " +
                         std::to_string(lowest_target_qubit) +
                         " does not fit in a register of " +
                         std::to_string(n_total));
  }
  TransferMatrix out;
  out.n_qubits = n_total;
  const std::size_t d = out.dim();
  out.entries.assign(d * d, Real(0));
  const int shift = 2 * (lowest_target_qubit - 1);
  const std::uint64_t gate_mask =
      (word_count(tm.n_qubits) - 1) << shift;
  const std::size_t gate_dim = word_count(tm.n_qubits);
  for (std::size_t i = 0; i < d; ++i) {
    const std::uint64_t rest = i & ~gate_mask;
    const std::size_t gi = (i & gate_mask) >> shift;
    for (std::size_t gj = 0; gj < gate_dim; ++gj) {
      const Real& value = tm.at(gi, gj);
      if (value == 0) {
        continue;
      }
      const std::size_t j = rest | (gj << shift);
      out.at(i, j) = value;
    }
  }
  return out;
}

TransferMatrix compose(const TransferMatrix& a, const TransferMatrix& b) {
  if (a.n_qubits != b.n_qubits) {
    throw DimensionMismatch("cannot compose transfer matrices on " +
                            std::to_string(a.n_qubits) + " and " +
                            std::to_string(b.n_qubits) + " qubits");
  }
  TransferMatrix out;
  out.n_qubits = a.n_qubits;
  const std::size_t d = a.dim();
  out.entries.assign(d * d, Real(0));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const Real& aik = a.at(i, k);
      if (aik == 0) {
        continue;
      }
      for (std::size_t j = 0; j < d; ++j) {
        const Real& bkj = b.at(k, j);
        if (bkj != 0) {
          out.at(i, j) += aik * bkj;
        }
      }
    }
  }
  return out;
}

BlochVector apply(const TransferMatrix& tm, const BlochVector& v) {
  if (tm.n_qubits != v.n_qubits) {
    throw DimensionMismatch("cannot apply a transfer matrix on " +
                            std::to_string(tm.n_qubits) +
                            " qubits to a state on " +
                            std::to_string(v.n_qubits));
  }
  BlochVector out;
  out.n_qubits = v.n_qubits;
  const std::size_t d = v.dim();
  out.entries.assign(d, Real(0));
  for (std::size_t i = 0; i < d; ++i) {
    Real acc = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const Real& tij = tm.at(i, j);
      if (tij != 0) {
        acc += tij * v.entries[j];
      }
    }
    out.entries[i] = acc;
  }
  return out;
}

BlochVector initial_bloch(int n_qubits) {
  check_register(n_qubits);
  BlochVector v;
  v.n_qubits = n_qubits;
  const std::uint64_t d = word_count(n_qubits);
  v.entries.assign(d, Real(0));
  for (std::uint64_t i = 0; i < d; ++i) {
    bool supported = true;
    for (int q = 0; q < n_qubits; ++q) {
      const int f = static_cast<int>((i >> (2 * q)) & 3);
      if (f == 1 || f == 2) {
        supported = false;
        break;
      }
    }
    if (supported) {
      v.entries[i] = 1;
    }
  }
  return v;
}

QubitReadout measure_qubit1(const BlochVector& v) {
  if (v.dim() < 4) {
    throw DimensionMismatch("Bloch vector too small for a qubit readout");
  }
  return QubitReadout{v.entries[1], v.entries[2], v.entries[3],
                      v.entries[0]};
}

void apply_pauli_rotation(BlochVector& v, std::uint64_t generator,
                          const Real& theta, const Real& p) {
  check_probability(p);
  if (generator >= word_count(v.n_qubits)) {
    throw IndexOutOfRange("rotation generator " + std::to_string(generator) +
                          " outside register of " +
                          std::to_string(v.n_qubits) + " qubits");
  }
  const std::size_t d = v.dim();
  const Real damp = 1 - 2 * p;
  const Real c = damp * cos(theta);
  const Real s = damp * sin(theta);
  for (std::size_t i = 0; i < d; ++i) {
    if (!anticommutes(generator, i, v.n_qubits)) {
      continue;
    }
    const PauliProduct partner = pauli_product(generator, i, v.n_qubits);
    const std::size_t j = partner.index;
    if (j < i) {
      continue;  // already handled as the partner of an earlier index
    }
    const int sign = (partner.phase_quarter == 1) ? 1 : -1;
    const Real vi = v.entries[i];
    const Real vj = v.entries[j];
    v.entries[i] = c * vi + sign * s * vj;
    v.entries[j] = c * vj - sign * s * vi;
  }
}

void apply_stochastic_pauli(BlochVector& v, std::uint64_t generator,
                            const Real& p) {
  apply_pauli_rotation(v, generator, Real(0), p);
}

}  // namespace qem
