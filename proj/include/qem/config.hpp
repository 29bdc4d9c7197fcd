// Distributed under the MIT License.
// See LICENSE.txt for details.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qem/metrics.hpp"
#include "qem/precision.hpp"

namespace qem {

/// One experiment sweep: a benchmark circuit size, a uniform noise level,
/// and the method/order grid to evaluate on it.  Parsed from flat
/// `key = value` text.  Gate-wise amplitudes follow the plot convention
/// p = e_sn/(2N) and phi = e_re/N with N = 18*n_repeat.
struct ExperimentConfig {
  long n_repeat = 1;
  Real e_sn = Real(0);
  Real e_re = Real(0);
  std::vector<std::string> methods;
  std::vector<int> orders;        // empty: pick per-method defaults (auto)
  unsigned precision_digits = 0;  // 0: pick the plot default by size
  Real a_param = Real(1);
  std::uint64_t seed = 0;
  std::string output_path = "sweep.csv";
};

/// Parses flat key-value text ("key = value" per line, '#' comments).
/// Throws InvalidConfig on unknown keys or malformed values.
ExperimentConfig parse_config(const std::string& text);

/// Reads and parses a config file.  Throws InvalidConfig when the file
/// cannot be read.
ExperimentConfig load_config(const std::string& path);

/// Renders a config back to the flat key-value form parse_config accepts;
/// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& config);

/// Checks ranges and cross-field rules (positive size, non-negative
/// levels, no mixed stochastic/rotational level, known method names,
/// rotation-dependent methods only with e_re > 0).  Throws InvalidConfig.
void validate_config(const ExperimentConfig& config);

/// The working precision a sweep should run at: the explicit setting, or
/// the plot default (500 digits, 1500 from n_repeat = 10 up).
unsigned resolved_digits(const ExperimentConfig& config);

/// One CSV row of a sweep: the plan identity plus its simulated bias and
/// metric columns.  `failed` marks a numeric overflow sentinel row.
struct SweepRow {
  std::string method;
  int order = 0;
  std::vector<long> m_params;
  Real bias = Real(0);
  Real sampling_cost = Real(1);
  Real length_factor = Real(1);
  Real runtime_scaling = Real(1);
  bool failed = false;
};

/// Evaluates every (method, order) cell of the config on its benchmark
/// circuit: bias from the deterministic simulator, cost columns from the
/// metrics evaluator.  Cells fan out to `n_workers` threads (0: hardware
/// count); rows come back in declared order regardless of completion
/// order.  Cells that overflow become FAILED sentinel rows.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                int n_workers = 0);

/// Fixed CSV column header shared by writers and readers.
std::string sweep_csv_header();

/// Renders rows as CSV (header + one line per row); numeric columns carry
/// the current working precision, FAILED rows carry the sentinel.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// The replication orders run_sweep uses for one method when the config
/// leaves orders on auto: the first five rungs for the biased insertion
/// ladders, the full (unbiased) order for the custom-channel expansions,
/// a single row for everything else.
std::vector<int> auto_orders(const MethodSelector& selector,
                             const NoiseChannelSpec& spec, long n_gates);

}  // namespace qem
