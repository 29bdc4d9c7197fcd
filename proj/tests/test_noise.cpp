// Distributed under the MIT License.
// See LICENSE.txt for details.

#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "qem/circuit.hpp"
#include "qem/errors.hpp"
#include "qem/noise.hpp"
#include "qem/pauli.hpp"
#include "qem/precision.hpp"
#include "qem/simulate.hpp"
#include "support.hpp"

using qem::BigInt;
using qem::NoiseChannelSpec;
using qem::NoiseKind;
using qem::Real;
using test_support::check_close;
using test_support::check_near;

namespace {

Real uniform_real(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return Real(dist(rng));
}

}  // namespace

TEST_CASE("channel factories validate amplitudes and store them") {
  qem::PrecisionContext precision(50);

  const NoiseChannelSpec sn = NoiseChannelSpec::sn(Real("0.3"), Real("0.5"), 2);
  CHECK(sn.kind == NoiseKind::SN);
  CHECK(sn.p == Real("0.3"));
  CHECK(sn.a_param == Real("0.5"));
  CHECK(sn.generator == 2);
  CHECK_FALSE(sn.is_noise_free());

  const NoiseChannelSpec re = NoiseChannelSpec::re(Real("-0.2"), 1);
  CHECK(re.kind == NoiseKind::RE);
  CHECK(re.phi == Real("-0.2"));
  CHECK_FALSE(re.is_noise_free());

  const NoiseChannelSpec ore = NoiseChannelSpec::ore(Real("0.1"), Real("0.2"));
  CHECK(ore.kind == NoiseKind::ORE);
  CHECK(ore.generator == 3);

  const NoiseChannelSpec deph = NoiseChannelSpec::dephasing(Real("0.05"));
  CHECK(deph.kind == NoiseKind::Dephasing);
  CHECK(deph.a_param == Real(1));

  CHECK(NoiseChannelSpec::sn(Real(0), Real(1)).is_noise_free());
  CHECK(NoiseChannelSpec::re(Real(0)).is_noise_free());
  CHECK(NoiseChannelSpec::ore(Real(0), Real(0)).is_noise_free());

  CHECK_THROWS_AS(NoiseChannelSpec::sn(Real("-0.1"), Real(1)),
                  qem::InvalidProbability);
  CHECK_THROWS_AS(NoiseChannelSpec::sn(Real("1.5"), Real(1)),
                  qem::InvalidProbability);
  CHECK_THROWS_AS(NoiseChannelSpec::sn(Real("0.5"), Real(2)),
                  qem::InvalidProbability);
  CHECK_THROWS_AS(NoiseChannelSpec::ore(Real(2), Real("0.1")),
                  qem::InvalidProbability);
  CHECK_THROWS_AS(NoiseChannelSpec::dephasing(Real(2)),
                  qem::InvalidProbability);
}

TEST_CASE("gaussian angle calibration produces the matching channel") {
  qem::PrecisionContext precision(50);

  const NoiseChannelSpec narrow =
      NoiseChannelSpec::gaussian_ore(Real("0.1"), Real(0));
  CHECK(narrow.kind == NoiseKind::ORE);
  CHECK(narrow.p == Real(0));
  CHECK(narrow.phi == Real("0.1"));

  const NoiseChannelSpec wide =
      NoiseChannelSpec::gaussian_ore(Real("0.25"), Real("0.5"));
  CHECK(wide.phi == Real("0.25"));
  check_near(wide.p, Real("0.0587515487077022985675539283854746318889975875"),
             "1e-40");
}

TEST_CASE("canonical decompositions match the closed forms") {
  qem::PrecisionContext precision(50);

  SECTION("stochastic family") {
    const std::vector<Real> f =
        qem::decomposition(NoiseChannelSpec::sn(Real("0.3"), Real("0.5")));
    REQUIRE(f.size() == 2);
    check_near(f[0], Real("0.7"), "1e-45");
    check_near(f[1], Real("0.3"), "1e-45");

    const std::vector<Real> g =
        qem::decomposition(NoiseChannelSpec::dephasing(Real("0.05")));
    REQUIRE(g.size() == 2);
    check_near(g[0], Real("0.95"), "1e-45");
  }

  SECTION("rotational") {
    const std::vector<Real> f =
        qem::decomposition(NoiseChannelSpec::re(Real("0.2")));
    REQUIRE(f.size() == 3);
    check_near(f[0],
               Real("0.99003328892062081556209825837408443869676218"),
               "1e-40");
    check_near(f[1],
               Real("0.19866933079506121545941262711838975037020673"),
               "1e-40");
    check_near(f[2],
               Real("0.0099667110793791844379017416259155613032378196"),
               "1e-40");
  }

  SECTION("combined") {
    const std::vector<Real> f =
        qem::decomposition(NoiseChannelSpec::ore(Real("0.1"), Real("0.2")));
    REQUIRE(f.size() == 3);
    check_near(f[0],
               Real("0.892026631136496652449678606699267550957409744"),
               "1e-40");
    check_near(f[1],
               Real("0.158935464636048972367530101694711800296165384"),
               "1e-40");
    check_near(f[2],
               Real("0.107973368863503347550321393300732449042590256"),
               "1e-40");
  }
}

TEST_CASE("decomposition weights of the physical channels sum to one") {
  qem::PrecisionContext precision(50);
  std::mt19937_64 rng(20240817);

  for (int draw = 0; draw < 100; ++draw) {
    const Real p = uniform_real(rng, 0.0, 1.0);
    const Real a = uniform_real(rng, 0.0, 1.0);
    const Real phi = uniform_real(rng, -3.1, 3.1);

    // The middle coefficient of the rotational families weights a
    // commutator component that splits into two physical channels with
    // cancelling weights, so it drops out of the normalisation sum.
    const std::vector<Real> f_sn =
        qem::decomposition(NoiseChannelSpec::sn(p, a));
    check_near(f_sn[0] + f_sn[1], Real(1), "1e-45");

    const std::vector<Real> f_re =
        qem::decomposition(NoiseChannelSpec::re(phi));
    check_near(f_re[0] + f_re[2], Real(1), "1e-45");

    const std::vector<Real> f_ore =
        qem::decomposition(NoiseChannelSpec::ore(p, phi));
    check_near(f_ore[0] + f_ore[2], Real(1), "1e-45");
  }
}

TEST_CASE("decomposition reduces to the identity at zero amplitudes") {
  qem::PrecisionContext precision(50);

  const std::vector<NoiseChannelSpec> specs = {
      NoiseChannelSpec::sn(Real(0), Real("0.7")),
      NoiseChannelSpec::re(Real(0)),
      NoiseChannelSpec::ore(Real(0), Real(0)),
      NoiseChannelSpec::dephasing(Real(0)),
  };
  for (const NoiseChannelSpec& spec : specs) {
    const std::vector<Real> f = qem::decomposition(spec);
    REQUIRE(!f.empty());
    check_near(f[0], Real(1), "1e-45");
    for (std::size_t k = 1; k < f.size(); ++k) {
      check_near(f[k], Real(0), "1e-45");
    }
  }
}

TEST_CASE("channel eigenvalues follow the closed forms") {
  qem::PrecisionContext precision(50);

  SECTION("combined channel with zero angle") {
    const std::vector<qem::ComplexValue> ev =
        qem::eigenvalues(NoiseChannelSpec::ore(Real("0.1"), Real(0)));
    REQUIRE(ev.size() == 3);
    check_near(ev[0].magnitude, Real(1), "1e-45");
    check_near(ev[1].magnitude, Real("0.8"), "1e-45");
    check_near(ev[2].magnitude, Real("0.8"), "1e-45");
    check_near(ev[1].phase, Real(0), "1e-45");
  }

  SECTION("noise-free stochastic channel") {
    const std::vector<qem::ComplexValue> ev =
        qem::eigenvalues(NoiseChannelSpec::sn(Real(0), Real(1)));
    REQUIRE(ev.size() == 2);
    check_near(ev[0].magnitude, Real(1), "1e-45");
    check_near(ev[1].magnitude, Real(1), "1e-45");
    check_near(ev[1].phase, Real(0), "1e-45");
  }

  SECTION("quarter-turn rotation gives the imaginary pair") {
    const std::vector<qem::ComplexValue> ev =
        qem::eigenvalues(NoiseChannelSpec::re(qem::pi_value() / 2));
    REQUIRE(ev.size() == 3);
    check_near(ev[1].magnitude, Real(1), "1e-45");
    check_near(ev[1].phase, qem::pi_value() / 2, "1e-45");
    check_near(ev[2].phase, -qem::pi_value() / 2, "1e-45");
  }

  SECTION("stochastic channel past the fixed point flips sign") {
    const std::vector<qem::ComplexValue> ev =
        qem::eigenvalues(NoiseChannelSpec::sn(Real("0.8"), Real(1)));
    REQUIRE(ev.size() == 2);
    check_near(ev[1].magnitude, Real("0.6"), "1e-45");
    check_near(ev[1].phase, qem::pi_value(), "1e-45");
  }

  SECTION("dephasing closure") {
    const std::vector<qem::ComplexValue> ev =
        qem::eigenvalues(NoiseChannelSpec::dephasing(Real("0.05")));
    REQUIRE(ev.size() == 2);
    check_near(ev[1].magnitude, Real("0.9"), "1e-45");
  }
}

TEST_CASE("channel eigenvalues agree with the constructed transfer matrix") {
  qem::PrecisionContext precision(50);
  std::mt19937_64 rng(31);
  const Real tolerance = pow(Real(10), -25);

  for (int draw = 0; draw < 12; ++draw) {
    const int axis = 1 + static_cast<int>(rng() % 3);
    const Real p = uniform_real(rng, 0.0, 0.45);
    const Real a = uniform_real(rng, 0.0, 1.0);
    const Real phi = uniform_real(rng, -1.4, 1.4);

    struct Case {
      NoiseChannelSpec spec;
      Real flip;   // stochastic application probability in the matrix
      Real angle;  // rotation angle in the matrix
    };
    const std::vector<Case> cases = {
        {NoiseChannelSpec::sn(p, a, static_cast<std::uint64_t>(axis)),
         (1 + a) * p / 2, Real(0)},
        {NoiseChannelSpec::dephasing(p, static_cast<std::uint64_t>(axis)), p,
         Real(0)},
        {NoiseChannelSpec::re(phi, static_cast<std::uint64_t>(axis)), Real(0),
         phi},
        {NoiseChannelSpec::ore(p, phi, static_cast<std::uint64_t>(axis)), p,
         phi},
    };

    for (const Case& c : cases) {
      const qem::TransferMatrix tm = qem::basis_ptm(axis, c.angle, c.flip);

      // Indices of the single-qubit words anticommuting with the generator.
      std::vector<std::size_t> block;
      for (std::size_t i = 1; i < 4; ++i) {
        if (i != static_cast<std::size_t>(axis)) {
          block.push_back(i);
        }
      }
      const Real t00 = tm.at(block[0], block[0]);
      const Real t01 = tm.at(block[0], block[1]);
      const Real t10 = tm.at(block[1], block[0]);
      const Real t11 = tm.at(block[1], block[1]);

      // Quadratic eigenvalues of the 2x2 anticommuting block.
      const Real half_trace = (t00 + t11) / 2;
      const Real det = t00 * t11 - t01 * t10;
      const Real disc = half_trace * half_trace - det;
      std::vector<std::pair<Real, Real>> roots;  // (re, im)
      if (disc >= 0) {
        const Real s = sqrt(disc);
        roots.push_back({half_trace - s, Real(0)});
        roots.push_back({half_trace + s, Real(0)});
      } else {
        const Real s = sqrt(-disc);
        roots.push_back({half_trace, -s});
        roots.push_back({half_trace, s});
      }

      const std::vector<qem::ComplexValue> ev = qem::eigenvalues(c.spec);
      std::vector<std::pair<Real, Real>> expected;
      for (std::size_t k = 1; k < ev.size(); ++k) {
        expected.push_back({ev[k].magnitude * cos(ev[k].phase),
                            ev[k].magnitude * sin(ev[k].phase)});
      }
      if (expected.size() == 1) {
        expected.push_back(expected.front());
      }
      const auto by_imag = [](const std::pair<Real, Real>& lhs,
                              const std::pair<Real, Real>& rhs) {
        return lhs.second < rhs.second;
      };
      std::sort(roots.begin(), roots.end(), by_imag);
      std::sort(expected.begin(), expected.end(), by_imag);

      for (std::size_t k = 0; k < 2; ++k) {
        INFO("axis " << axis << " kind "
                     << static_cast<int>(c.spec.kind) << " root " << k);
        CHECK(abs(roots[k].first - expected[k].first) < tolerance);
        CHECK(abs(roots[k].second - expected[k].second) < tolerance);
      }
    }
  }
}

TEST_CASE("leading-order noise levels") {
  qem::PrecisionContext precision(50);

  check_near(qem::noise_level(NoiseChannelSpec::dephasing(Real("0.01")), 10),
             Real("0.2"), "1e-45");
  check_near(qem::noise_level(NoiseChannelSpec::re(Real(0)), 7), Real(0),
             "1e-45");
  check_near(
      qem::noise_level(NoiseChannelSpec::ore(Real("0.005"), Real("0.01")), 20),
      Real("0.4"), "1e-45");
  check_near(qem::noise_level(NoiseChannelSpec::re(Real("-0.3")), 4),
             Real("1.2"), "1e-45");
  CHECK_THROWS_AS(qem::noise_level(NoiseChannelSpec::re(Real("0.1")), 0),
                  qem::IndexOutOfRange);
}

TEST_CASE("unmitigated proxy bias evaluates the worst-case bound") {
  qem::PrecisionContext precision(50);

  check_near(qem::unmitigated_proxy_bias(NoiseChannelSpec::dephasing(
                 Real("0.5")), 1),
             Real(1), "1e-45");
  check_near(qem::unmitigated_proxy_bias(NoiseChannelSpec::re(Real(0)), 9),
             Real(0), "1e-45");

  SECTION("stochastic closed form") {
    const Real expected = 2 * (1 - pow(Real(99) / 100, 10ul));
    check_near(expected, Real("0.19123584998239101998"), "1e-18");
    check_near(
        qem::unmitigated_proxy_bias(NoiseChannelSpec::sn(Real("0.01"),
                                                         Real(1)), 10),
        expected, "1e-40");
  }

  SECTION("rotational closed form") {
    check_near(
        qem::unmitigated_proxy_bias(NoiseChannelSpec::re(Real("0.2")), 5),
        Real("1.57225429178371644322335406122173334302876585"), "1e-40");
  }

  SECTION("combined closed form") {
    check_near(qem::unmitigated_proxy_bias(
                   NoiseChannelSpec::ore(Real("0.05"), Real("0.2")), 5),
               Real("1.80030478643615806368504833966870816547518404"),
               "1e-40");
  }
}

TEST_CASE("small stochastic noise level approximates the proxy bias") {
  qem::PrecisionContext precision(50);
  std::mt19937_64 rng(77);

  for (int draw = 0; draw < 40; ++draw) {
    const long n = 1 + static_cast<long>(rng() % 40);
    const Real p = uniform_real(rng, 1e-6, 0.1 / static_cast<double>(n));
    const NoiseChannelSpec spec = NoiseChannelSpec::sn(p, Real(1));
    const Real level = qem::noise_level(spec, n);
    const Real proxy = qem::unmitigated_proxy_bias(spec, n);
    INFO("n " << n << " p " << qem::format_real(p, 17));
    CHECK(abs(proxy - level) <= level * level);
  }
}

TEST_CASE("sequence multiplicities") {
  qem::PrecisionContext precision(50);

  SECTION("occupation-number form") {
    CHECK(qem::multiplicity(NoiseKind::SN, 4, {2, 2}) == BigInt(6));
    CHECK(qem::multiplicity(NoiseKind::SN, 6, {6}) == BigInt(1));
    CHECK(qem::multiplicity(NoiseKind::SN, 6, {6, 0, 0}) == BigInt(1));
    CHECK(qem::multiplicity(NoiseKind::SN, 5, {3, 1, 1}) == BigInt(20));
    CHECK(qem::multiplicity(NoiseKind::Dephasing, 4, {1, 3}) == BigInt(4));
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::SN, 4, {2, 1}),
                    qem::InvalidPartition);
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::SN, 4, {5, -1}),
                    qem::InvalidPartition);
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::SN, 0, {0}),
                    qem::IndexOutOfRange);
  }

  SECTION("winding-class form") {
    CHECK(qem::multiplicity(NoiseKind::RE, 2, {2}) == BigInt(6));
    CHECK(qem::multiplicity(NoiseKind::RE, 2, {0}) == BigInt(1));
    CHECK(qem::multiplicity(NoiseKind::RE, 2, {1}) == BigInt(4));
    // k = 2N keeps only the doubly wound placement on every gate.
    CHECK(qem::multiplicity(NoiseKind::RE, 3, {6}) == BigInt(1));
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::RE, 2, {5}),
                    qem::InvalidPartition);
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::RE, 2, {1, 1}),
                    qem::InvalidPartition);
    CHECK_THROWS_AS(qem::multiplicity(NoiseKind::RE, 2, {-1}),
                    qem::InvalidPartition);
  }

  SECTION("winding classes count all branch assignments") {
    // Every gate picks one of four letters (identity, either half-turn
    // walk, or conjugation), so the winding classes partition 4^N.
    BigInt total = 0;
    const long n = 5;
    for (long k = 0; k <= 2 * n; ++k) {
      total += qem::multiplicity(NoiseKind::RE, n, {k});
    }
    CHECK(total == BigInt(1024));
  }
}

TEST_CASE("stochastic composition and amplification") {
  qem::PrecisionContext precision(50);

  check_near(qem::compose_stochastic(Real("0.1"), Real("0.1"), Real(1)),
             Real("0.18"), "1e-45");
  check_near(qem::compose_stochastic(Real("0.37"), Real(0), Real("0.4")),
             Real("0.37"), "1e-45");
  check_near(qem::compose_stochastic(Real("0.5"), Real("0.31"), Real(1)),
             Real("0.5"), "1e-45");

  check_near(qem::amplified_stochastic(Real("0.07"), Real("0.9"), 1),
             Real("0.07"), "1e-45");
  check_near(qem::amplified_stochastic(Real("0.01"), Real(1), 3),
             Real("0.029404"), "1e-45");
  check_near(qem::amplified_stochastic(Real("0.2"), Real("0.5"), 0), Real(0),
             "1e-45");
  CHECK_THROWS_AS(qem::amplified_stochastic(Real("0.1"), Real(1), -1),
                  qem::IndexOutOfRange);

  SECTION("repeated composition equals amplification") {
    const Real p("0.03");
    const Real a("0.25");
    Real acc(0);
    for (int k = 0; k < 7; ++k) {
      acc = qem::compose_stochastic(acc, p, a);
    }
    check_near(acc, qem::amplified_stochastic(p, a, 7), "1e-44");
  }
}

TEST_CASE("proxy bias dominates the simulated bias of random circuits") {
  qem::PrecisionContext precision(50);
  std::mt19937_64 rng(424242);

  for (int draw = 0; draw < 50; ++draw) {
    const int n_qubits = 1 + static_cast<int>(rng() % 2);
    const int n_gates = 1 + static_cast<int>(rng() % 6);

    // Uniform noise amplitudes for the whole circuit.
    NoiseChannelSpec base = NoiseChannelSpec::re(Real(0));
    switch (rng() % 4) {
      case 0:
        base = NoiseChannelSpec::sn(uniform_real(rng, 0.0, 0.15), Real(1));
        break;
      case 1:
        base = NoiseChannelSpec::re(uniform_real(rng, -0.3, 0.3));
        break;
      case 2:
        base = NoiseChannelSpec::ore(uniform_real(rng, 0.0, 0.1),
                                     uniform_real(rng, -0.2, 0.2));
        break;
      default:
        base = NoiseChannelSpec::dephasing(uniform_real(rng, 0.0, 0.15));
        break;
    }

    qem::Circuit circuit;
    circuit.n_qubits = n_qubits;
    for (int g = 0; g < n_gates; ++g) {
      qem::GateSpec gate;
      if (n_qubits == 2 && rng() % 3 == 0) {
        gate.span = 2;
        gate.lowest_qubit = 1;
        const std::uint64_t high = 1 + rng() % 3;
        const std::uint64_t low = 1 + rng() % 3;
        gate.generator = low + 4 * high;
      } else {
        gate.span = 1;
        gate.lowest_qubit = 1 + static_cast<int>(rng() % n_qubits);
        gate.generator = 1 + rng() % 3;
      }
      gate.target_angle = uniform_real(rng, -3.0, 3.0);
      gate.noise = base;
      gate.noise.generator = gate.generator;
      gate.exec_time = Real(1);
      circuit.gates.push_back(gate);
    }

    const qem::SimulationResult run = qem::simulate(circuit);
    const Real proxy = qem::unmitigated_proxy_bias(base, n_gates);
    INFO("draw " << draw << " kind " << static_cast<int>(base.kind)
                 << " gates " << n_gates);
    CHECK(run.bias_x <= proxy + Real("1e-30"));
    CHECK(run.bias_y <= proxy + Real("1e-30"));
    CHECK(run.bias_z <= proxy + Real("1e-30"));
  }
}
