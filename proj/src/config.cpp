// Distributed under the MIT License.
// See LICENSE.txt for details.

#include "qem/config.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "qem/circuit.hpp"
#include "qem/errors.hpp"
#include "qem/metrics.hpp"
#include "qem/simulate.hpp"

namespace qem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return "";
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string::size_type start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto end = (comma == std::string::npos) ? value.size() : comma;
    const std::string item = trim(value.substr(start, end - start));
    if (!item.empty()) {
      items.push_back(item);
    }
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return items;
}

long long parse_integer(const std::string& value, const std::string& key) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto result = std::from_chars(begin, end, out);
  if (result.ec != std::errc() || result.ptr != end || value.empty()) {
    throw InvalidConfig("key '" + key + "' needs an integer, got '" + value +
                        "'");
  }
  return out;
}

Real parse_real(const std::string& value, const std::string& key) {
  if (value.empty()) {
    throw InvalidConfig("key '" + key + "' needs a number");
  }
  try {
    return Real(value);
  } catch (const std::exception&) {
    throw InvalidConfig("key '" + key + "' needs a number, got '" + value +
                        "'");
  }
}

bool finite_value(const Real& x) { return !isnan(x) && !isinf(x); }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) {
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InvalidConfig("line " + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key == "n_repeat") {
      config.n_repeat = static_cast<long>(parse_integer(value, key));
    } else if (key == "e_sn") {
      config.e_sn = parse_real(value, key);
    } else if (key == "e_re") {
      config.e_re = parse_real(value, key);
    } else if (key == "methods") {
      config.methods = split_list(value);
    } else if (key == "orders") {
      config.orders.clear();
      if (value != "auto" && value != "Auto") {
        for (const std::string& item : split_list(value)) {
          config.orders.push_back(
              static_cast<int>(parse_integer(item, key)));
        }
      }
    } else if (key == "precision_digits") {
      config.precision_digits =
          static_cast<unsigned>(parse_integer(value, key));
    } else if (key == "a_param") {
      config.a_param = parse_real(value, key);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_integer(value, key));
    } else if (key == "output_path") {
      config.output_path = value;
    } else {
      throw InvalidConfig("line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidConfig("cannot read config file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "n_repeat = " << config.n_repeat << "\n";
  out << "e_sn = " << format_real(config.e_sn) << "\n";
  out << "e_re = " << format_real(config.e_re) << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < config.methods.size(); ++i) {
    out << (i ? ", " : "") << config.methods[i];
  }
  out << "\n";
  out << "orders = ";
  if (config.orders.empty()) {
    out << "auto";
  } else {
    for (std::size_t i = 0; i < config.orders.size(); ++i) {
      out << (i ? ", " : "") << config.orders[i];
    }
  }
  out << "\n";
  out << "precision_digits = " << config.precision_digits << "\n";
  out << "a_param = " << format_real(config.a_param) << "\n";
  out << "seed = " << config.seed << "\n";
  out << "output_path = " << config.output_path << "\n";
  return out.str();
}

void validate_config(const ExperimentConfig& config) {
  if (config.n_repeat < 1) {
    throw InvalidConfig("n_repeat must be at least 1");
  }
  if (config.e_sn < 0 || config.e_re < 0) {
    throw InvalidConfig("noise levels must be non-negative");
  }
  if (config.e_sn > 0 && config.e_re > 0) {
    throw InvalidConfig(
        "choose one of e_sn and e_re per sweep, not both");
  }
  if (config.methods.empty()) {
    throw InvalidConfig("methods must list at least one method");
  }
  for (const std::string& name : config.methods) {
    const MethodSelector selector = selector_from_name(name);
    if ((selector.lc_stage || selector.method == Method::LC) &&
        !(config.e_re > 0)) {
      throw InvalidConfig("method '" + name +
                          "' needs a rotational level e_re > 0");
    }
  }
  for (int order : config.orders) {
    if (order < 0) {
      throw InvalidConfig("orders must be non-negative");
    }
  }
  if (config.precision_digits != 0 &&
      config.precision_digits < minimum_digits) {
    throw InvalidConfig("precision_digits must be at least " +
                        std::to_string(minimum_digits));
  }
  if (config.a_param < 0 || config.a_param > 1) {
    throw InvalidConfig("a_param must lie in [0, 1]");
  }
}

unsigned resolved_digits(const ExperimentConfig& config) {
  if (config.precision_digits != 0) {
    return config.precision_digits;
  }
  return config.n_repeat >= 10 ? 1500u : 500u;
}

std::vector<int> auto_orders(const MethodSelector& selector,
                             const NoiseChannelSpec& spec, long n_gates) {
  const bool stochastic = selector.lc_stage ||
                          spec.kind == NoiseKind::SN ||
                          spec.kind == NoiseKind::Dephasing;
  const int full = static_cast<int>(stochastic ? n_gates : 2 * n_gates);
  switch (selector.method) {
    case Method::CSM:
      return {full};
    case Method::CHISM:
      return {static_cast<int>(2 * n_gates)};
    case Method::IIAM:
      return {1, 2, 3, 4, 5};
    case Method::IILM:
      if (selector.noise_aware) {
        return {stochastic ? 1 : 2};
      }
      return {1, 2, 3, 4, 5};
    case Method::IISM:
      if (selector.noise_aware) {
        return {full};
      }
      return {1, 2, 3, 4, 5};
    default:
      return {0};
  }
}

namespace {

struct SweepCell {
  MethodSelector selector;
  std::string name;
  int order = 0;
};

SweepRow evaluate_cell(const SweepCell& cell, const NoiseChannelSpec& spec,
                       const Circuit& circuit, long n_gates) {
  SweepRow row;
  row.method = cell.name;
  row.order = cell.order;
  try {
    std::vector<long> schedule;
    if (cell.selector.method == Method::TIILM && !cell.selector.lc_stage) {
      schedule = spec.is_noise_free() ? std::vector<long>{0, 1}
                                      : optimize_tiilm(spec, n_gates).m_values;
    }
    const MitigationPlan plan =
        assemble_plan(cell.selector, spec, n_gates, cell.order, schedule);
    row.m_params = plan.m_values;
    const SimulationResult sim = simulate(circuit, plan);
    row.bias = sim.benchmark_bias;
    const MetricsReport report =
        metrics(plan, circuit.total_exec_time(), n_gates);
    row.sampling_cost = report.sampling_cost;
    row.length_factor = report.length_factor;
    row.runtime_scaling = report.runtime_scaling;
    if (!finite_value(row.bias) || !finite_value(row.sampling_cost) ||
        !finite_value(row.length_factor) ||
        !finite_value(row.runtime_scaling)) {
      row.failed = true;
    }
  } catch (const std::overflow_error&) {
    row.failed = true;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                int n_workers) {
  validate_config(config);
  const long n_gates = 18 * config.n_repeat;
  const Real rn(n_gates);
  const NoiseChannelSpec spec =
      (config.e_re > 0)
          ? NoiseChannelSpec::re(config.e_re / rn)
          : NoiseChannelSpec::sn(config.e_sn / (2 * rn), config.a_param);

  std::vector<SweepCell> cells;
  for (const std::string& name : config.methods) {
    const MethodSelector selector = selector_from_name(name);
    std::vector<int> orders;
    const bool order_handle =
        selector.method == Method::CSM || selector.method == Method::CHISM ||
        selector.method == Method::IIAM ||
        (selector.method == Method::IILM && !selector.noise_aware) ||
        (selector.method == Method::IISM && !selector.noise_aware);
    if (order_handle && !config.orders.empty()) {
      orders = config.orders;
    } else {
      orders = auto_orders(selector, spec, n_gates);
    }
    for (int order : orders) {
      cells.push_back({selector, name, order});
    }
  }

  const Circuit circuit = benchmark_circuit(config.n_repeat, spec);
  std::vector<SweepRow> rows(cells.size());
  const unsigned digits = Real::default_precision();
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    // The working precision may be thread-local; align workers with the
    // precision the sweep was launched under.
    if (Real::default_precision() != digits) {
      Real::default_precision(digits);
    }
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) {
        return;
      }
      rows[i] = evaluate_cell(cells[i], spec, circuit, n_gates);
    }
  };

  unsigned workers = n_workers > 0
                         ? static_cast<unsigned>(n_workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(
      workers, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back(work);
    }
    for (std::thread& thread : pool) {
      thread.join();
    }
  }
  return rows;
}

std::string sweep_csv_header() {
  return "method,order,m_params,bias,sampling_cost,length_factor,"
         "runtime_scaling";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  for (const SweepRow& row : rows) {
    out += row.method;
    out += ',';
    out += std::to_string(row.order);
    out += ',';
    for (std::size_t i = 0; i < row.m_params.size(); ++i) {
      if (i) {
        out += ';';
      }
      out += std::to_string(row.m_params[i]);
    }
    out += ',';
    if (row.failed) {
      out += "FAILED,FAILED,FAILED,FAILED";
    } else {
      out += format_real(row.bias);
      out += ',';
      out += format_real(row.sampling_cost);
      out += ',';
      out += format_real(row.length_factor);
      out += ',';
      out += format_real(row.runtime_scaling);
    }
    out += '\n';
  }
  return out;
}

}  // namespace qem
