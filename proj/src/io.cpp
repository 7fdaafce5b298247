#include "greedyicl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "greedyicl/errors.hpp"
#include "json.hpp"

namespace greedyicl {
namespace {

using nlohmann::ordered_json;

struct CsvLine {
  std::size_t number;
  std::string_view text;
};

std::vector<CsvLine> split_lines(std::string_view text) {
  std::vector<CsvLine> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back({++number, line});
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  // Trailing blank lines are tolerated, interior ones are not.
  while (!lines.empty() && lines.back().text.empty()) lines.pop_back();
  return lines;
}

std::vector<long long> parse_fields(const CsvLine& line, std::size_t expected) {
  std::vector<long long> values;
  std::string_view rest = line.text;
  while (true) {
    const auto comma = rest.find(',');
    std::string_view field = rest.substr(0, comma);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
      throw DataError("line " + std::to_string(line.number) + ": '" + std::string(field) + "' is not an integer");
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (values.size() != expected)
    throw DataError("line " + std::to_string(line.number) + ": expected " + std::to_string(expected) +
                    " fields, found " + std::to_string(values.size()));
  return values;
}

void expect_header(const std::vector<CsvLine>& lines, std::string_view header) {
  if (lines.empty() || lines.front().text != header)
    throw DataError("line 1: expected header '" + std::string(header) + "'");
}

ordered_json real(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_real(v));
}

ordered_json matrix(const std::vector<std::vector<double>>& m) {
  ordered_json out = ordered_json::array();
  for (const auto& row : m) {
    ordered_json r = ordered_json::array();
    for (double v : row) r.push_back(real(v));
    out.push_back(r);
  }
  return out;
}

ordered_json icl_json(const IclValue& v) {
  return {{"log_lik", real(v.log_lik)},
          {"log_prior", real(v.log_prior)},
          {"total", real(v.total)},
          {"stranded", v.stranded}};
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing '" + path + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot move output into place at '" + path + "'");
  }
}

DynamicNetwork parse_edge_list(std::string_view text, const EdgeListOptions& options) {
  const auto lines = split_lines(text);
  expect_header(lines, "t,i,j");
  const long long shift = options.one_based ? 1 : 0;
  std::vector<EdgeRow> rows;
  long long max_t = -1, max_node = -1;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = parse_fields(lines[k], 3);
    const long long t = f[0] - shift, i = f[1] - shift, j = f[2] - shift;
    const std::string where = "line " + std::to_string(lines[k].number) + ": ";
    if (t < 0 || i < 0 || j < 0) throw DataError(where + "negative index");
    if (i == j) throw DataError(where + "self-edge");
    if (options.num_times && t >= *options.num_times)
      throw DataError(where + "time frame exceeds the declared number of frames");
    if (options.num_nodes && std::max(i, j) >= *options.num_nodes)
      throw DataError(where + "node index exceeds the declared number of nodes");
    if (std::max({t, i, j}) > 1'000'000'000) throw DataError(where + "index too large");
    max_t = std::max(max_t, t);
    max_node = std::max({max_node, i, j});
    rows.push_back({static_cast<int>(t), static_cast<int>(i), static_cast<int>(j)});
  }
  const int num_times = options.num_times.value_or(static_cast<int>(max_t + 1));
  const int num_nodes = options.num_nodes.value_or(static_cast<int>(max_node + 1));
  if (num_times <= 0 || num_nodes <= 0)
    throw DataError("cannot infer network dimensions from an empty edge list");
  return DynamicNetwork(rows, num_nodes, num_times, options.directed);
}

DynamicNetwork read_edge_list(const std::string& path, const EdgeListOptions& options) {
  return parse_edge_list(read_text_file(path), options);
}

std::string format_edge_list(const DynamicNetwork& net, bool one_based) {
  const int shift = one_based ? 1 : 0;
  std::string out = "t,i,j\n";
  for (const auto& e : net.edge_list())
    out += std::to_string(e.t + shift) + "," + std::to_string(e.i + shift) + "," + std::to_string(e.j + shift) + "\n";
  return out;
}

void write_edge_list(const std::string& path, const DynamicNetwork& net, bool one_based) {
  write_text_file(path, format_edge_list(net, one_based));
}

Partition parse_partition(std::string_view text, std::optional<int> num_times, std::optional<int> num_nodes) {
  const auto lines = split_lines(text);
  expect_header(lines, "t,node,group");
  struct Entry {
    long long t, node, group;
    std::size_t line;
  };
  std::vector<Entry> entries;
  long long max_t = -1, max_node = -1, max_group = -1;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto f = parse_fields(lines[k], 3);
    if (f[0] < 0 || f[1] < 0 || f[2] < 0)
      throw DataError("line " + std::to_string(lines[k].number) + ": negative value");
    if (std::max({f[0], f[1], f[2]}) > 1'000'000'000)
      throw DataError("line " + std::to_string(lines[k].number) + ": value too large");
    entries.push_back({f[0], f[1], f[2], lines[k].number});
    max_t = std::max(max_t, f[0]);
    max_node = std::max(max_node, f[1]);
    max_group = std::max(max_group, f[2]);
  }
  const int tt = num_times.value_or(static_cast<int>(max_t + 1));
  const int n = num_nodes.value_or(static_cast<int>(max_node + 1));
  if (tt <= 0 || n <= 0) throw DataError("partition file has no rows");
  if (max_t >= tt || max_node >= n) throw DataError("partition exceeds the expected dimensions");

  std::vector<int> labels(static_cast<std::size_t>(tt) * n, -1);
  for (const auto& e : entries) {
    int& slot = labels[static_cast<std::size_t>(e.t) * n + e.node];
    if (slot >= 0) throw DataError("line " + std::to_string(e.line) + ": duplicate entry for this (t, node)");
    slot = static_cast<int>(e.group);
  }
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] < 0)
      throw DataError("partition has no group for node " + std::to_string(k % n) + " at frame " +
                      std::to_string(k / n));
  return Partition(std::move(labels), tt, n, static_cast<int>(max_group + 1));
}

Partition read_partition(const std::string& path, std::optional<int> num_times, std::optional<int> num_nodes) {
  return parse_partition(read_text_file(path), num_times, num_nodes);
}

std::string format_partition(const Partition& p) {
  std::string out = "t,node,group\n";
  for (int t = 0; t < p.num_times(); ++t)
    for (int i = 0; i < p.num_nodes(); ++i)
      out += std::to_string(t) + "," + std::to_string(i) + "," + std::to_string(p(t, i)) + "\n";
  return out;
}

void write_partition(const std::string& path, const Partition& p) { write_text_file(path, format_partition(p)); }

std::string summary_json(const SummaryReport& r) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["nonempty_per_frame"] = r.nonempty_per_frame;
  doc["group_sizes"] = r.group_sizes;
  ordered_json out_deg = ordered_json::array(), in_deg = ordered_json::array();
  for (double v : r.avg_out_degree) out_deg.push_back(real(v));
  for (double v : r.avg_in_degree) in_deg.push_back(real(v));
  doc["avg_out_degree"] = out_deg;
  doc["avg_in_degree"] = in_deg;
  doc["transition_means"] = matrix(r.transition_means);
  ordered_json conn = ordered_json::array();
  for (const auto& row : r.connection_means) {
    ordered_json jr = ordered_json::array();
    for (const auto& v : row) jr.push_back(v ? real(*v) : ordered_json(nullptr));
    conn.push_back(jr);
  }
  doc["connection_means"] = conn;
  doc["icl"] = icl_json(r.icl);
  return dump(doc);
}

std::string fit_log_json(const FitReport& report, const Hyperparameters& hyper) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["hyperparameters"] = {{"a", real(hyper.a)}, {"b", real(hyper.b)}, {"delta", real(hyper.delta)}};
  doc["best_run"] = report.best_run;
  ordered_json runs = ordered_json::array();
  for (const auto& run : report.runs) {
    ordered_json trace = ordered_json::array();
    for (double v : run.trace) trace.push_back(real(v));
    runs.push_back({{"strategy", run.strategy},
                    {"restart", run.restart},
                    {"seed", run.seed},
                    {"capacity", run.capacity},
                    {"num_groups", run.num_groups},
                    {"sweeps", run.sweeps},
                    {"moves_accepted", run.moves_accepted},
                    {"merges", run.merges},
                    {"hit_sweep_cap", run.hit_sweep_cap},
                    {"seconds", real(run.seconds)},
                    {"icl", icl_json(run.icl)},
                    {"trace", trace}});
  }
  doc["runs"] = runs;
  return dump(doc);
}

std::string simulation_log_json(const SimConfig& cfg, const SimOutput& sim) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["config"] = {{"nodes", cfg.num_nodes},       {"times", cfg.num_times},
                   {"groups", cfg.num_groups},     {"pi", real(cfg.pi)},
                   {"theta0", real(cfg.theta0)},   {"eps0", real(cfg.eps0)},
                   {"perturb_scale", real(cfg.perturb_scale)}, {"directed", cfg.directed},
                   {"seed", cfg.seed}};
  doc["theta_real"] = matrix(sim.theta_real);
  doc["pi_matrix"] = matrix(sim.pi_matrix);
  doc["total_edges"] = sim.network.total_edges();
  return dump(doc);
}

std::string format_frame_counts(const SummaryReport& report) {
  std::string out = "t,nonempty_groups\n";
  for (std::size_t t = 0; t < report.nonempty_per_frame.size(); ++t)
    out += std::to_string(t) + "," + std::to_string(report.nonempty_per_frame[t]) + "\n";
  return out;
}

}  // namespace greedyicl
