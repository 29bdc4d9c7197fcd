// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/circuit.hpp"

#include <sstream>

#include "qem/errors.hpp"

namespace qem {

namespace {

NoiseChannelSpec with_generator(NoiseChannelSpec spec,
                                std::uint64_t generator) {
  spec.generator = generator;
  return spec;
}

GateSpec make_gate(std::uint64_t generator, const Real& omega,
                   int lowest_qubit, int span,
                   const NoiseChannelSpec& noise) {
  GateSpec gate;
  gate.generator = generator;
  gate.target_angle = omega;
  gate.lowest_qubit = lowest_qubit;
  gate.span = span;
  gate.noise = with_generator(noise, generator);
  gate.exec_time = 1;
  return gate;
}

}  // namespace

Real Circuit::total_exec_time() const {
  Real total = 0;
  for (const GateSpec& gate : gates) {
    total += gate.exec_time;
  }
  return total;
}

Circuit benchmark_circuit(long n_repeat, const NoiseChannelSpec& noise) {
  if (n_repeat < 1) {
    throw IndexOutOfRange("repeat count must be positive, got " +
                          std::to_string(n_repeat));
  }
  const Real quarter = pi_value() / 4;
  const Real half = pi_value() / 2;
  const Real full = pi_value();

  Circuit circuit;
  circuit.n_qubits = 4;
  circuit.gates.reserve(static_cast<std::size_t>(18 * n_repeat));
  for (long r = 0; r < n_repeat; ++r) {
    // Forward ladder.
    circuit.gates.push_back(make_gate(2, full, 1, 1, noise));      // Y(q1)
    circuit.gates.push_back(make_gate(1, quarter, 1, 1, noise));   // T1(q1)
    circuit.gates.push_back(make_gate(15, half, 1, 2, noise));     // S15(1,2)
    circuit.gates.push_back(make_gate(1, quarter, 2, 1, noise));   // T1(q2)
    circuit.gates.push_back(make_gate(15, half, 2, 2, noise));     // S15(2,3)
    circuit.gates.push_back(make_gate(1, quarter, 3, 1, noise));   // T1(q3)
    circuit.gates.push_back(make_gate(15, half, 3, 2, noise));     // S15(3,4)
    circuit.gates.push_back(make_gate(1, quarter, 4, 1, noise));   // T1(q4)
    circuit.gates.push_back(make_gate(2, full, 4, 1, noise));      // Y(q4)
    // Mirrored inverse ladder.
    circuit.gates.push_back(make_gate(2, full, 4, 1, noise));      // Y(q4)
    circuit.gates.push_back(make_gate(1, -quarter, 4, 1, noise));  // T1+(q4)
    circuit.gates.push_back(make_gate(15, -half, 3, 2, noise));    // S15+(3,4)
    circuit.gates.push_back(make_gate(1, -quarter, 3, 1, noise));  // T1+(q3)
    circuit.gates.push_back(make_gate(15, -half, 2, 2, noise));    // S15+(2,3)
    circuit.gates.push_back(make_gate(1, -quarter, 2, 1, noise));  // T1+(q2)
    circuit.gates.push_back(make_gate(15, -half, 1, 2, noise));    // S15+(1,2)
    circuit.gates.push_back(make_gate(1, -quarter, 1, 1, noise));  // T1+(q1)
    circuit.gates.push_back(make_gate(2, full, 1, 1, noise));      // Y(q1)
  }
  return circuit;
}

std::vector<GateSpec> native_gate_set() {
  const NoiseChannelSpec clean;  // zero amplitudes
  const Real quarter = pi_value() / 4;
  const Real half = pi_value() / 2;
  const Real full = pi_value();
  return {
      make_gate(3, quarter, 1, 1, clean),  // T
      make_gate(3, half, 1, 1, clean),     // S
      make_gate(3, full, 1, 1, clean),     // Z
      make_gate(1, half, 1, 1, clean),     // sqrt(X)
      make_gate(1, full, 1, 1, clean),     // X
      make_gate(15, half, 1, 2, clean),    // S15
  };
}

std::vector<GateSpec> compile_universal(UniversalGate gate) {
  const NoiseChannelSpec clean;
  const Real quarter = pi_value() / 4;
  const Real half = pi_value() / 2;
  const Real full = pi_value();

  const auto hadamard_q1 = [&] {
    return std::vector<GateSpec>{
        make_gate(1, half, 1, 1, clean),  // sqrt(X)
        make_gate(3, half, 1, 1, clean),  // S
        make_gate(1, half, 1, 1, clean),  // sqrt(X)
    };
  };
  const auto cz_pair = [&] {
    return std::vector<GateSpec>{
        make_gate(15, half, 1, 2, clean),  // S15
        make_gate(3, full, 1, 1, clean),   // Z(q1)
        make_gate(3, half, 1, 1, clean),   // S(q1)
        make_gate(3, full, 2, 1, clean),   // Z(q2)
        make_gate(3, half, 2, 1, clean),   // S(q2)
    };
  };

  switch (gate) {
    case UniversalGate::T:
      return {make_gate(3, quarter, 1, 1, clean)};
    case UniversalGate::H:
      return hadamard_q1();
    case UniversalGate::CZ:
      return cz_pair();
    case UniversalGate::CX: {
      // Control on qubit 2, target on qubit 1.
      std::vector<GateSpec> out = hadamard_q1();
      for (GateSpec& g : cz_pair()) {
        out.push_back(g);
      }
      for (GateSpec& g : hadamard_q1()) {
        out.push_back(g);
      }
      return out;
    }
  }
  throw Error("unreachable universal gate");
}

std::string circuit_to_text(const Circuit& circuit) {
  std::ostringstream out;
  out << "qubits " << circuit.n_qubits << "\n";
  for (const GateSpec& gate : circuit.gates) {
    out << "gate " << gate.generator << " "
        << format_real(gate.target_angle);
    for (int q = gate.lowest_qubit; q < gate.lowest_qubit + gate.span; ++q) {
      out << " " << q;
    }
    out << " " << format_real(gate.noise.p) << " "
        << format_real(gate.noise.phi) << "\n";
  }
  return out.str();
}

Circuit circuit_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Circuit circuit;
  bool have_header = false;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "qubits") {
      if (!(fields >> circuit.n_qubits) || circuit.n_qubits < 1) {
        throw InvalidConfig("line " + std::to_string(line_number) +
                            ": malformed qubits header");
      }
      have_header = true;
      continue;
    }
    if (tag != "gate") {
      throw InvalidConfig("line " + std::to_string(line_number) +
                          ": expected 'gate' or 'qubits', got '" + tag + "'");
    }
    if (!have_header) {
      throw InvalidConfig("gate line before qubits header");
    }
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) {
      tokens.push_back(token);
    }
    // generator, angle, at least one qubit, p, phi.
    if (tokens.size() < 5) {
      throw InvalidConfig("line " + std::to_string(line_number) +
                          ": gate line needs generator, angle, qubits, "
                          "p, phi");
    }
    GateSpec gate;
    try {
      gate.generator = std::stoull(tokens[0]);
      gate.target_angle = Real(tokens[1]);
      gate.span = static_cast<int>(tokens.size()) - 4;
      gate.lowest_qubit = std::stoi(tokens[2]);
      for (int k = 1; k < gate.span; ++k) {
        if (std::stoi(tokens[2 + k]) != gate.lowest_qubit + k) {
          throw InvalidConfig("line " + std::to_string(line_number) +
                              ": gate span must be contiguous ascending");
        }
      }
      const Real p(tokens[tokens.size() - 2]);
      const Real phi(tokens[tokens.size() - 1]);
      if (p != 0 && phi != 0) {
        gate.noise = NoiseChannelSpec::ore(p, phi, gate.generator);
      } else if (phi != 0) {
        gate.noise = NoiseChannelSpec::re(phi, gate.generator);
      } else {
        gate.noise = NoiseChannelSpec::dephasing(p, gate.generator);
      }
    } catch (const InvalidConfig&) {
      throw;
    } catch (const std::exception& e) {
      throw InvalidConfig("line " + std::to_string(line_number) + ": " +
                          e.what());
    }
    circuit.gates.push_back(gate);
  }
  if (!have_header || circuit.gates.empty()) {
    throw InvalidConfig("circuit text needs a qubits header and at least "
                        "one gate");
  }
  return circuit;
}

}  // namespace qem
