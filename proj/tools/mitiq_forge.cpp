// Distributed under the MIT License.
// See LICENSE.txt for details.
//
// mitiq-forge: command-line front end over the mitigation toolkit.
// Subcommands: sweep, metrics, boundary, certify, optimize-tiilm, plot.
// Exit codes: 0 success, 2 bad flags/config, 3 no solution / no
// tabulated row for the request.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qem/certify.hpp"
#include "qem/config.hpp"
#include "qem/errors.hpp"
#include "qem/metrics.hpp"
#include "qem/simulate.hpp"

namespace {

using qem::Real;

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

qem::NoiseKind parse_kind(const std::string& name) {
  if (name == "sn") return qem::NoiseKind::SN;
  if (name == "re") return qem::NoiseKind::RE;
  if (name == "ore") return qem::NoiseKind::ORE;
  if (name == "dephasing") return qem::NoiseKind::Dephasing;
  throw qem::InvalidConfig("unknown noise kind: " + name +
                           " (expected sn, re, ore or dephasing)");
}

Real parse_amount(const std::string& value, const char* what) {
  if (value.empty()) {
    throw qem::InvalidConfig(std::string("missing value for ") + what);
  }
  try {
    return Real(value);
  } catch (const std::exception&) {
    throw qem::InvalidConfig(std::string("bad number for ") + what + ": " +
                             value);
  }
}

std::vector<long> parse_m_list(const std::string& text) {
  std::vector<long> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (item.empty()) {
      continue;
    }
    try {
      out.push_back(std::stol(item));
    } catch (const std::exception&) {
      throw qem::InvalidConfig("bad insertion count: " + item);
    }
  }
  return out;
}

std::string join_m_list(const std::vector<long>& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) {
      out += ';';
    }
    out += std::to_string(m[i]);
  }
  return out;
}

std::optional<unsigned> env_digits() {
  const char* raw = std::getenv("MITIQ_FORGE_DIGITS");
  if (raw == nullptr || *raw == '\0') {
    return std::nullopt;
  }
  char* end = nullptr;
  const unsigned long value = std::strtoul(raw, &end, 10);
  if (end == raw || *end != '\0' || value == 0) {
    throw qem::InvalidConfig(std::string("bad MITIQ_FORGE_DIGITS value: ") +
                             raw);
  }
  return static_cast<unsigned>(value);
}

/// Precision for one-shot queries: the flag, the environment override,
/// or the library default.
unsigned tool_digits(unsigned cli_digits) {
  if (cli_digits != 0) {
    return cli_digits;
  }
  if (const auto env = env_digits()) {
    return *env;
  }
  return 50;
}

/// Precision for sweeps: the flag, then the config, then the environment
/// override, then the plot defaults (500/1500 digits by size).
unsigned sweep_digits(unsigned cli_digits, const qem::ExperimentConfig& c) {
  if (cli_digits != 0) {
    return cli_digits;
  }
  if (c.precision_digits != 0) {
    return c.precision_digits;
  }
  if (const auto env = env_digits()) {
    return *env;
  }
  return qem::resolved_digits(c);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw qem::InvalidConfig("cannot open output file: " + path);
  }
  out << content;
  if (!out) {
    throw qem::InvalidConfig("failed writing output file: " + path);
  }
}

std::string fmt(const Real& x) { return qem::format_real(x, 15); }

// ---------------------------------------------------------------------------
// metrics subcommand
// ---------------------------------------------------------------------------

struct MetricsArgs {
  std::string method = "unmitigated";
  std::string noise = "sn";
  std::string amplitude = "0";
  std::string angle = "0";
  std::string a_param = "1";
  std::string m_list;
  int order = 0;
  long n_gates = 18;
  unsigned digits = 0;
  std::string format = "table";
};

qem::NoiseChannelSpec spec_from_args(qem::NoiseKind kind,
                                     const std::string& amplitude,
                                     const std::string& angle,
                                     const std::string& a_param) {
  const Real amount = parse_amount(amplitude, "--amplitude");
  const Real a = parse_amount(a_param, "--a-param");
  switch (kind) {
    case qem::NoiseKind::SN:
      return qem::NoiseChannelSpec::sn(amount, a);
    case qem::NoiseKind::Dephasing:
      return qem::NoiseChannelSpec::dephasing(amount);
    case qem::NoiseKind::RE:
      return qem::NoiseChannelSpec::re(amount);
    case qem::NoiseKind::ORE:
      return qem::NoiseChannelSpec::ore(amount,
                                        parse_amount(angle, "--angle"));
  }
  throw qem::InvalidConfig("unknown noise kind");
}

int run_metrics(const MetricsArgs& args) {
  qem::PrecisionContext context(tool_digits(args.digits));
  const qem::MethodSelector selector = qem::selector_from_name(args.method);
  const qem::NoiseKind kind = parse_kind(args.noise);
  const qem::NoiseChannelSpec spec =
      spec_from_args(kind, args.amplitude, args.angle, args.a_param);
  std::vector<long> schedule = parse_m_list(args.m_list);
  if (selector.method == qem::Method::TIILM && schedule.empty() &&
      spec.is_noise_free()) {
    schedule = {0, 1};  // nothing to tune against
  }
  const qem::MitigationPlan plan = qem::assemble_plan(
      selector, spec, args.n_gates, args.order, schedule);
  const qem::MetricsReport report =
      qem::metrics(plan, Real(args.n_gates), args.n_gates);
  if (args.format == "csv") {
    std::cout << "method,order,m_params,sampling_cost,length_factor,"
                 "width_factor,area_factor,runtime_scaling,"
                 "mitigated_noise_level\n"
              << args.method << ',' << plan.order << ','
              << join_m_list(plan.m_values) << ','
              << fmt(report.sampling_cost) << ',' << fmt(report.length_factor)
              << ',' << fmt(report.width_factor) << ','
              << fmt(report.area_factor) << ',' << fmt(report.runtime_scaling)
              << ',' << fmt(report.mitigated_noise_level) << "\n";
  } else {
    std::cout << "method = " << args.method << "\n"
              << "order = " << plan.order << "\n"
              << "m_params = " << join_m_list(plan.m_values) << "\n"
              << "sampling_cost = " << fmt(report.sampling_cost) << "\n"
              << "length_factor = " << fmt(report.length_factor) << "\n"
              << "width_factor = " << fmt(report.width_factor) << "\n"
              << "area_factor = " << fmt(report.area_factor) << "\n"
              << "runtime_scaling = " << fmt(report.runtime_scaling) << "\n"
              << "mitigated_noise_level = "
              << fmt(report.mitigated_noise_level) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// boundary subcommand
// ---------------------------------------------------------------------------

struct BoundaryArgs {
  std::string method = "clm";
  std::string noise = "sn";
  std::string target_bias;
  std::string target_scaling;
  std::string a_param = "1";
  long n_gates = 180;
  unsigned digits = 0;
  std::string format = "table";
};

int run_boundary(const BoundaryArgs& args) {
  qem::PrecisionContext context(tool_digits(args.digits));
  const qem::MethodSelector selector = qem::selector_from_name(args.method);
  const qem::NoiseKind kind = parse_kind(args.noise);
  const Real boundary = qem::noise_boundary(
      selector, kind, parse_amount(args.target_bias, "--target-bias"),
      parse_amount(args.target_scaling, "--target-scaling"), args.n_gates,
      parse_amount(args.a_param, "--a-param"));
  if (args.format == "csv") {
    std::cout << "method,noise,target_bias,target_scaling,n_gates,boundary\n"
              << args.method << ',' << args.noise << ',' << args.target_bias
              << ',' << args.target_scaling << ',' << args.n_gates << ','
              << fmt(boundary) << "\n";
  } else {
    std::cout << "boundary = " << fmt(boundary) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// certify subcommand
// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string method = "clm";
  std::string noise = "sn";
  unsigned digits = 0;
  std::string format = "table";
};

std::string designation(const qem::CertificationVerdict& verdict) {
  const std::pair<qem::Verdict, char> cells[] = {
      {verdict.scalable, 'S'},
      {verdict.unbounded, 'U'},
      {verdict.precise, 'P'},
      {verdict.efficient, 'E'},
      {verdict.robust, 'R'},
  };
  std::string out;
  for (const auto& [value, letter] : cells) {
    if (value == qem::Verdict::Yes) {
      out += letter;
    } else if (value == qem::Verdict::Quasi) {
      out += static_cast<char>(std::tolower(letter));
    }
  }
  return out.empty() ? "NONE" : out;
}

int run_certify(const CertifyArgs& args) {
  qem::PrecisionContext context(tool_digits(args.digits));
  const qem::MethodSelector selector = qem::selector_from_name(args.method);
  const qem::NoiseKind kind = parse_kind(args.noise);
  if (!qem::certifiable(selector, kind)) {
    throw qem::NotTabulated("method '" + args.method +
                            "' has no certified row under noise '" +
                            args.noise + "'");
  }
  const qem::CertificationVerdict verdict = qem::certify(selector, kind);
  if (args.format == "csv") {
    std::cout << "method,noise,scalable,unbounded,precise,efficient,robust,"
                 "designation\n"
              << args.method << ',' << args.noise << ','
              << qem::verdict_name(verdict.scalable) << ','
              << qem::verdict_name(verdict.unbounded) << ','
              << qem::verdict_name(verdict.precise) << ','
              << qem::verdict_name(verdict.efficient) << ','
              << qem::verdict_name(verdict.robust) << ','
              << designation(verdict) << "\n";
  } else {
    std::cout << "method = " << args.method << "\n"
              << "noise = " << args.noise << "\n"
              << "scalable = " << qem::verdict_name(verdict.scalable) << "\n"
              << "unbounded = " << qem::verdict_name(verdict.unbounded)
              << "\n"
              << "precise = " << qem::verdict_name(verdict.precise) << "\n"
              << "efficient = " << qem::verdict_name(verdict.efficient)
              << "\n"
              << "robust = " << qem::verdict_name(verdict.robust) << "\n"
              << "designation = " << designation(verdict) << "\n"
              << "notes = " << verdict.notes << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// optimize-tiilm subcommand
// ---------------------------------------------------------------------------

struct OptimizeArgs {
  std::string noise = "sn";
  std::string amplitude;
  std::string level;
  std::string angle = "0";
  std::string a_param = "1";
  long n_gates = 18;
  unsigned digits = 0;
  std::string format = "table";
};

int run_optimize(const OptimizeArgs& args) {
  qem::PrecisionContext context(tool_digits(args.digits));
  const qem::NoiseKind kind = parse_kind(args.noise);
  if (args.amplitude.empty() == args.level.empty()) {
    throw qem::InvalidConfig(
        "give exactly one of --amplitude (per gate) and --level (whole "
        "circuit)");
  }
  std::string amplitude = args.amplitude;
  if (!args.level.empty()) {
    const Real total = parse_amount(args.level, "--level");
    const Real n(args.n_gates);
    const bool stochastic =
        kind == qem::NoiseKind::SN || kind == qem::NoiseKind::Dephasing;
    amplitude = qem::format_real(stochastic ? total / (2 * n) : total / n);
  }
  const qem::NoiseChannelSpec spec =
      spec_from_args(kind, amplitude, args.angle, args.a_param);
  const qem::TiilmOptimum best = qem::optimize_tiilm(spec, args.n_gates);
  if (args.format == "csv") {
    std::cout << "m_params,fallback\n"
              << join_m_list(best.m_values) << ','
              << (best.fallback ? "yes" : "no") << "\n";
  } else {
    std::cout << "m_values = " << join_m_list(best.m_values) << "\n"
              << "fallback = " << (best.fallback ? "yes" : "no") << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// sweep subcommand
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config_path;
  std::string out_path;
  unsigned digits = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 0;
};

int run_sweep_cmd(const SweepArgs& args) {
  // First parse only picks the working precision; the second parse happens
  // inside the precision scope so the level strings keep every digit.
  const qem::ExperimentConfig peek = qem::load_config(args.config_path);
  qem::PrecisionContext context(sweep_digits(args.digits, peek));
  qem::ExperimentConfig config = qem::load_config(args.config_path);
  if (args.seed_set) {
    config.seed = args.seed;
  }
  qem::validate_config(config);
  const std::vector<qem::SweepRow> rows =
      qem::run_sweep(config, args.workers);
  const std::string csv = qem::sweep_to_csv(rows);
  const std::string path =
      args.out_path.empty() ? config.output_path : args.out_path;
  if (path.empty() || path == "-") {
    std::cout << csv;
  } else {
    write_file(path, csv);
    std::cout << "wrote " << rows.size() << " rows to " << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// plot subcommand
// ---------------------------------------------------------------------------

struct CsvPoint {
  std::string method;
  double bias = 0;
  double scaling = 1;
};

std::vector<CsvPoint> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) {
    throw qem::InvalidConfig("empty CSV");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != qem::sweep_csv_header()) {
    throw qem::InvalidConfig("unexpected CSV header: " + line);
  }
  std::vector<CsvPoint> points;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 7) {
      throw qem::InvalidConfig("malformed CSV row: " + line);
    }
    if (fields[3] == "FAILED") {
      continue;  // overflow sentinel rows carry no plottable data
    }
    CsvPoint point;
    point.method = fields[0];
    char* end = nullptr;
    point.bias = std::strtod(fields[3].c_str(), &end);
    if (end != fields[3].c_str() + fields[3].size()) {
      throw qem::InvalidConfig("bad bias value: " + fields[3]);
    }
    point.scaling = std::strtod(fields[6].c_str(), &end);
    if (end != fields[6].c_str() + fields[6].size()) {
      throw qem::InvalidConfig("bad runtime scaling value: " + fields[6]);
    }
    points.push_back(point);
  }
  if (points.empty()) {
    throw qem::InvalidConfig("CSV carries no data rows");
  }
  return points;
}

std::string svg_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", v);
  return buffer;
}

std::string render_svg(const std::vector<CsvPoint>& points) {
  // Series keyed by method, in first-appearance order.
  std::vector<std::string> methods;
  for (const CsvPoint& p : points) {
    bool seen = false;
    for (const std::string& m : methods) {
      seen = seen || m == p.method;
    }
    if (!seen) {
      methods.push_back(p.method);
    }
  }
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
                                  "#bcbd22", "#7f7f7f", "#aec7e8", "#ffbb78"};
  const int n_colors = static_cast<int>(sizeof(palette) / sizeof(*palette));
  const auto color_of = [&](const std::string& method) {
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (methods[i] == method) {
        return palette[i % n_colors];
      }
    }
    return palette[0];
  };

  // Log-log ranges rounded out to whole decades.
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 1;
  bool any_x = false, any_y = false;
  for (const CsvPoint& p : points) {
    if (p.bias > 0 && std::isfinite(p.bias)) {
      const double e = std::log10(p.bias);
      x_lo = any_x ? std::min(x_lo, e) : e;
      x_hi = any_x ? std::max(x_hi, e) : e;
      any_x = true;
    }
    if (p.scaling > 0 && std::isfinite(p.scaling)) {
      const double e = std::log10(p.scaling);
      y_lo = any_y ? std::min(y_lo, e) : e;
      y_hi = any_y ? std::max(y_hi, e) : e;
      any_y = true;
    }
  }
  if (!any_x) {
    x_lo = -6;
    x_hi = 0;
  }
  x_lo = std::floor(x_lo);
  x_hi = std::ceil(x_hi);
  if (x_hi <= x_lo) {
    x_hi = x_lo + 1;
  }
  y_lo = std::floor(std::min(y_lo, 0.0));
  y_hi = std::ceil(y_hi);
  if (y_hi <= y_lo) {
    y_hi = y_lo + 1;
  }

  const double left = 80, right = 770, top = 40, bottom = 540;
  const auto px = [&](double bias) {
    return left +
           (std::log10(bias) - x_lo) / (x_hi - x_lo) * (right - left);
  };
  const auto py = [&](double scaling) {
    return bottom -
           (std::log10(scaling) - y_lo) / (y_hi - y_lo) * (bottom - top);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
         "height=\"600\" viewBox=\"0 0 800 600\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" "
         "fill=\"white\"/>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\""
      << right - left << "\" height=\"" << bottom - top
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade grid and tick labels.
  const int x_step =
      std::max(1, static_cast<int>(std::ceil((x_hi - x_lo) / 10.0)));
  for (int e = static_cast<int>(x_lo); e <= static_cast<int>(x_hi);
       e += x_step) {
    const double x = px(std::pow(10.0, e));
    svg << "<line x1=\"" << svg_number(x) << "\" y1=\"" << top << "\" x2=\""
        << svg_number(x) << "\" y2=\"" << bottom
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << svg_number(x) << "\" y=\"" << bottom + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">1e" << e
        << "</text>\n";
  }
  const int y_step =
      std::max(1, static_cast<int>(std::ceil((y_hi - y_lo) / 10.0)));
  for (int e = static_cast<int>(y_lo); e <= static_cast<int>(y_hi);
       e += y_step) {
    const double y = py(std::pow(10.0, e));
    svg << "<line x1=\"" << left << "\" y1=\"" << svg_number(y) << "\" x2=\""
        << right << "\" y2=\"" << svg_number(y)
        << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << svg_number(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 40
      << "\" font-size=\"14\" text-anchor=\"middle\">bias</text>\n"
      << "<text x=\"20\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "20 "
      << (top + bottom) / 2 << ")\">runtime scaling</text>\n";

  // Reference line at the unmitigated bias.
  for (const CsvPoint& p : points) {
    if (p.method == "unmitigated" && p.bias > 0 && std::isfinite(p.bias)) {
      const double x = px(p.bias);
      svg << "<line x1=\"" << svg_number(x) << "\" y1=\"" << top << "\" x2=\""
          << svg_number(x) << "\" y2=\"" << bottom
          << "\" stroke=\"black\" stroke-dasharray=\"8,4\"/>\n";
      break;
    }
  }

  // Horizontal lines for unbiased rows, scatter points for the rest.
  for (const CsvPoint& p : points) {
    if (!(p.scaling > 0) || !std::isfinite(p.scaling)) {
      continue;
    }
    const char* color = color_of(p.method);
    if (p.bias > 0 && std::isfinite(p.bias)) {
      svg << "<circle cx=\"" << svg_number(px(p.bias)) << "\" cy=\""
          << svg_number(py(p.scaling)) << "\" r=\"5\" fill=\"" << color
          << "\"/>\n";
    } else {
      svg << "<line x1=\"" << left << "\" y1=\""
          << svg_number(py(p.scaling)) << "\" x2=\"" << right << "\" y2=\""
          << svg_number(py(p.scaling)) << "\" stroke=\"" << color
          << "\" stroke-dasharray=\"6,3\" stroke-width=\"2\"/>\n";
    }
  }

  // Legend: one labelled swatch per method series.
  double legend_y = top + 14;
  for (const std::string& method : methods) {
    svg << "<rect x=\"" << right - 170 << "\" y=\"" << legend_y - 10
        << "\" width=\"12\" height=\"12\" fill=\"" << color_of(method)
        << "\"/>\n"
        << "<text x=\"" << right - 152 << "\" y=\"" << legend_y
        << "\" font-size=\"12\">" << method << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";
  return svg.str();
}

struct PlotArgs {
  std::string csv_path;
  std::string out_path;
};

int run_plot(const PlotArgs& args) {
  std::ifstream in(args.csv_path, std::ios::binary);
  if (!in) {
    throw qem::InvalidConfig("cannot read CSV file: " + args.csv_path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  const std::vector<CsvPoint> points = parse_sweep_csv(text.str());
  std::string out = args.out_path;
  if (out.empty()) {
    out = args.csv_path;
    const auto dot = out.find_last_of('.');
    if (dot != std::string::npos && out.find('/', dot) == std::string::npos) {
      out.erase(dot);
    }
    out += ".svg";
  }
  write_file(out, render_svg(points));
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical toolkit for linear quantum error mitigation"};
  app.require_subcommand(1);

  MetricsArgs metrics_args;
  CLI::App* metrics_cmd =
      app.add_subcommand("metrics", "evaluate plan cost metrics");
  metrics_cmd->add_option("--method", metrics_args.method, "method name");
  metrics_cmd->add_option("--noise", metrics_args.noise,
                          "noise kind: sn|re|ore|dephasing");
  metrics_cmd->add_option("--amplitude", metrics_args.amplitude,
                          "per-gate amplitude (p or phi)");
  metrics_cmd->add_option("--angle", metrics_args.angle,
                          "per-gate angle for ore");
  metrics_cmd->add_option("--a-param,--a", metrics_args.a_param,
                          "stochastic closure parameter");
  metrics_cmd->add_option("--order", metrics_args.order, "expansion order");
  metrics_cmd->add_option("--m", metrics_args.m_list,
                          "insertion schedule, e.g. 0;246");
  metrics_cmd->add_option("--n-gates", metrics_args.n_gates, "circuit size");
  metrics_cmd->add_option("--digits", metrics_args.digits,
                          "working precision");
  metrics_cmd->add_option("--format", metrics_args.format, "table|csv");

  BoundaryArgs boundary_args;
  CLI::App* boundary_cmd =
      app.add_subcommand("boundary", "solve the noise boundary");
  boundary_cmd->add_option("--method", boundary_args.method, "method name");
  boundary_cmd->add_option("--noise", boundary_args.noise,
                           "noise kind: sn|re|dephasing");
  boundary_cmd
      ->add_option("--target-bias", boundary_args.target_bias,
                   "bias tolerance")
      ->required();
  boundary_cmd
      ->add_option("--target-scaling", boundary_args.target_scaling,
                   "runtime scaling budget")
      ->required();
  boundary_cmd->add_option("--n-gates", boundary_args.n_gates,
                           "circuit size");
  boundary_cmd->add_option("--a-param,--a", boundary_args.a_param,
                           "stochastic closure parameter");
  boundary_cmd->add_option("--digits", boundary_args.digits,
                           "working precision");
  boundary_cmd->add_option("--format", boundary_args.format, "table|csv");

  CertifyArgs certify_args;
  CLI::App* certify_cmd =
      app.add_subcommand("certify", "run the qualitative certification");
  certify_cmd->add_option("--method", certify_args.method, "method name");
  certify_cmd->add_option("--noise", certify_args.noise,
                          "noise kind: sn|re|dephasing");
  certify_cmd->add_option("--digits", certify_args.digits,
                          "working precision");
  certify_cmd->add_option("--format", certify_args.format, "table|csv");

  OptimizeArgs optimize_args;
  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize-tiilm", "tune the identity-insertion schedule");
  optimize_cmd->add_option("--noise", optimize_args.noise,
                           "noise kind: sn|re|dephasing");
  optimize_cmd->add_option("--amplitude", optimize_args.amplitude,
                           "per-gate amplitude (p or phi)");
  optimize_cmd->add_option("--level", optimize_args.level,
                           "whole-circuit noise level");
  optimize_cmd->add_option("--a-param,--a", optimize_args.a_param,
                           "stochastic closure parameter");
  optimize_cmd->add_option("--n-gates", optimize_args.n_gates,
                           "circuit size");
  optimize_cmd->add_option("--digits", optimize_args.digits,
                           "working precision");
  optimize_cmd->add_option("--format", optimize_args.format, "table|csv");

  SweepArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run an experiment sweep to CSV");
  sweep_cmd->add_option("--config", sweep_args.config_path, "config file")
      ->required();
  sweep_cmd->add_option("--out", sweep_args.out_path,
                        "output path ('-' for stdout)");
  sweep_cmd->add_option("--digits", sweep_args.digits, "working precision");
  sweep_cmd->add_option("--seed", sweep_args.seed, "estimator seed")
      ->trigger_on_parse();
  sweep_cmd->add_option("--workers", sweep_args.workers,
                        "worker threads (0 = hardware)");

  PlotArgs plot_args;
  CLI::App* plot_cmd =
      app.add_subcommand("plot", "render a sweep CSV as a log-log SVG");
  plot_cmd->add_option("csv", plot_args.csv_path, "sweep CSV input")
      ->required();
  plot_cmd->add_option("--out", plot_args.out_path, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  sweep_args.seed_set = sweep_cmd->count("--seed") > 0;

  try {
    if (metrics_cmd->parsed()) {
      return run_metrics(metrics_args);
    }
    if (boundary_cmd->parsed()) {
      return run_boundary(boundary_args);
    }
    if (certify_cmd->parsed()) {
      return run_certify(certify_args);
    }
    if (optimize_cmd->parsed()) {
      return run_optimize(optimize_args);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep_cmd(sweep_args);
    }
    if (plot_cmd->parsed()) {
      return run_plot(plot_args);
    }
  } catch (const qem::NoSolution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qem::NotTabulated& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const qem::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
