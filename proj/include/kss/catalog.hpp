#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "kss/colouring.hpp"
#include "kss/graph.hpp"
#include "kss/graph6.hpp"
#include "kss/grid.hpp"
#include "kss/grid_embed.hpp"
#include "json.hpp"

#ifndef KSS_VERSION
#define KSS_VERSION "0.0.0"
#endif

namespace kss {

struct GraphFlags {
  bool square_free = false;
  bool connected = false;
  bool min_degree_3 = false;
  bool every_vertex_in_triangle = false;
  bool three_colourable = false;
  bool four_colourable = false;
  bool colourable_101 = false;

  /// Implications that hold for every graph.
  bool consistent() const {
    if (three_colourable && !four_colourable) return false;
    if (three_colourable && !colourable_101) return false;
    return true;
  }
};

inline GraphFlags compute_flags(const Graph& g) {
  GraphFlags f;
  f.square_free = is_square_free(g);
  f.connected = is_connected(g);
  f.min_degree_3 = g.n() > 0 && min_degree(g) >= 3;
  f.every_vertex_in_triangle = every_vertex_in_triangle(g);
  f.three_colourable = is_k_colourable(g, 3);
  f.four_colourable = f.three_colourable || is_k_colourable(g, 4);
  f.colourable_101 = is_101_colourable(g);
  return f;
}

struct GridResult {
  std::optional<int> embedded_n;  // smallest N in the ladder with an embedding
  int max_tried = 0;
  bool budget_exceeded = false;
  GridEmbedding witness;
};

struct IntervalSummary {
  std::string verdict;
  double delta = 0;
  std::uint64_t contractions = 0;
};

struct CatalogRecord {
  std::string graph6;
  int n = 0;
  GraphFlags flags;
  std::string reject;  // candidate_filter outcome
  std::optional<GridResult> grid;
  std::optional<IntervalSummary> interval;
  std::string timestamp;  // volatile: dropped at compaction
  std::string version = KSS_VERSION;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json to_json(const CatalogRecord& r) {
  nlohmann::json j{{"graph6", r.graph6},
                   {"n", r.n},
                   {"flags",
                    {{"square_free", r.flags.square_free},
                     {"connected", r.flags.connected},
                     {"min_degree_3", r.flags.min_degree_3},
                     {"every_vertex_in_triangle", r.flags.every_vertex_in_triangle},
                     {"three_colourable", r.flags.three_colourable},
                     {"four_colourable", r.flags.four_colourable},
                     {"colourable_101", r.flags.colourable_101}}},
                   {"reject", r.reject},
                   {"version", r.version}};
  if (r.grid) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& d : r.grid->witness) witness.push_back(to_json(d));
    j["grid"] = {{"embedded_n", r.grid->embedded_n ? nlohmann::json(*r.grid->embedded_n) : nlohmann::json()},
                 {"max_tried", r.grid->max_tried},
                 {"budget_exceeded", r.grid->budget_exceeded},
                 {"witness", witness}};
  }
  if (r.interval)
    j["interval"] = {{"verdict", r.interval->verdict},
                     {"delta", r.interval->delta},
                     {"contractions", r.interval->contractions}};
  if (!r.timestamp.empty()) j["timestamp"] = r.timestamp;
  return j;
}

inline CatalogRecord record_from_json(const nlohmann::json& j) {
  CatalogRecord r;
  r.graph6 = j.at("graph6").get<std::string>();
  r.n = j.at("n").get<int>();
  const auto& f = j.at("flags");
  r.flags.square_free = f.at("square_free").get<bool>();
  r.flags.connected = f.at("connected").get<bool>();
  r.flags.min_degree_3 = f.at("min_degree_3").get<bool>();
  r.flags.every_vertex_in_triangle = f.at("every_vertex_in_triangle").get<bool>();
  r.flags.three_colourable = f.at("three_colourable").get<bool>();
  r.flags.four_colourable = f.at("four_colourable").get<bool>();
  r.flags.colourable_101 = f.at("colourable_101").get<bool>();
  r.reject = j.at("reject").get<std::string>();
  r.version = j.value("version", "");
  r.timestamp = j.value("timestamp", "");
  if (j.contains("grid")) {
    GridResult g;
    const auto& jg = j["grid"];
    if (!jg.at("embedded_n").is_null()) g.embedded_n = jg["embedded_n"].get<int>();
    g.max_tried = jg.at("max_tried").get<int>();
    g.budget_exceeded = jg.value("budget_exceeded", false);
    for (const auto& d : jg.at("witness")) g.witness.push_back({d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()});
    r.grid = g;
  }
  if (j.contains("interval")) {
    const auto& ji = j["interval"];
    r.interval = IntervalSummary{ji.at("verdict").get<std::string>(), ji.at("delta").get<double>(),
                                 ji.at("contractions").get<std::uint64_t>()};
  }
  return r;
}

/// Re-derives what a record claims: flags from the graph, and the grid
/// witness by integer arithmetic. Returns an empty string when it holds.
inline std::string revalidate(const CatalogRecord& r) {
  const Graph g = graph6_decode(r.graph6);
  if (g.n() != r.n) return "vertex count mismatch";
  if (!r.flags.consistent()) return "inconsistent flags";
  if (!r.flags.colourable_101 && is_101_colourable(g)) return "claimed uncolourable but a 101-colouring exists";
  if (r.flags.colourable_101 && !is_101_colourable(g)) return "claimed colourable but none exists";
  if (r.grid && r.grid->embedded_n && !valid_grid_embedding(g, r.grid->witness, *r.grid->embedded_n))
    return "grid witness does not re-validate";
  return "";
}

/// Sorted by (n, graph6), duplicates dropped, timestamps removed.
inline std::vector<std::string> compact_lines(std::vector<CatalogRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.n != b.n ? a.n < b.n : a.graph6 < b.graph6;
  });
  std::vector<std::string> out;
  const CatalogRecord* last = nullptr;
  for (auto& r : records) {
    if (last != nullptr && last->n == r.n && last->graph6 == r.graph6) continue;
    r.timestamp.clear();
    out.push_back(to_json(r).dump());
    last = &r;
  }
  return out;
}

inline std::vector<CatalogRecord> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<CatalogRecord> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(record_from_json(nlohmann::json::parse(line)));
  return out;
}

// ---------------------------------------------------------------------------
// Count report

struct CountRow {
  int n = 0;
  std::optional<std::uint64_t> count;
  double fitted_log10 = 0;
};

/// Per-n counts plus a least-squares fit of log10(count) against n, reported
/// for n up to extrapolate_to. Rows beyond the data carry only the fit.
inline std::vector<CountRow> report_counts(const std::map<int, std::uint64_t>& counts, int extrapolate_to = 0) {
  if (counts.empty()) throw std::invalid_argument("report_counts: empty catalog");
  // Fit over the nontrivial tail when there is one: tiny n is not log-linear.
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, c] : counts)
    if (c > 0 && n >= 5) pts.push_back({n, std::log10(static_cast<double>(c))});
  if (pts.size() < 2) {
    pts.clear();
    for (const auto& [n, c] : counts)
      if (c > 0) pts.push_back({n, std::log10(static_cast<double>(c))});
  }
  double slope = 0, intercept = pts.empty() ? 0 : pts[0].second;
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double k = static_cast<double>(pts.size());
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    intercept = (sy - slope * sx) / k;
  }
  std::vector<CountRow> rows;
  const int last = std::max(counts.rbegin()->first, extrapolate_to);
  for (int n = counts.begin()->first; n <= last; ++n) {
    CountRow row{n, std::nullopt, intercept + slope * n};
    if (auto it = counts.find(n); it != counts.end()) row.count = it->second;
    rows.push_back(row);
  }
  return rows;
}

inline std::string counts_csv(const std::vector<CountRow>& rows) {
  std::ostringstream os;
  os << "n,count,extrapolated_log10_count\n";
  for (const auto& r : rows) {
    os << r.n << ',';
    if (r.count) os << *r.count;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r.fitted_log10);
    os << ',' << buf << '\n';
  }
  return os.str();
}

}  // namespace kss
