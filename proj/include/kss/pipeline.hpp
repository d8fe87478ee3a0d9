#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "kss/catalog.hpp"
#include "kss/colouring.hpp"
#include "kss/grid_embed.hpp"
#include "kss/interval_embed.hpp"
#include "kss/orderly.hpp"
#include "json.hpp"

namespace kss {

namespace fs = std::filesystem;

struct JobSpec {
  int n_min = 1;
  int n_max = 1;
  EnumFilters filters;
  std::vector<int> grid_ladder{1, 2, 3, 4, 5, 8};
  std::uint64_t grid_budget = kDefaultGridNodeLimit;
  std::uint64_t interval_budget = 100'000;
  double delta = kDefaultDelta;
  int tickets_depth = kDefaultSplitDepth;
  int workers = 1;
  bool record_all = false;  // otherwise only candidates and uncolourable graphs
  fs::path out;

  void validate() const {
    if (n_min < 1 || n_max < n_min || n_max > kMaxVertices) throw std::invalid_argument("job: n range must satisfy 1 <= min <= max <= 64");
    for (int N : grid_ladder)
      if (N < 1 || N > 32) throw std::invalid_argument("job: grid N must be in 1..32");
    if (interval_budget == 0 || grid_budget == 0) throw std::invalid_argument("job: budgets must be positive");
    if (!(delta >= kMinDelta && delta < 1)) throw std::invalid_argument("job: delta must be in [2^-26, 1)");
    if (tickets_depth < 1) throw std::invalid_argument("job: tickets depth must be >= 1");
    if (workers < 1) throw std::invalid_argument("job: workers must be >= 1");
    if (out.empty()) throw std::invalid_argument("job: output directory required");
  }

  /// Everything that determines the results; workers and paths are excluded.
  nlohmann::json to_json() const {
    return {{"n_min", n_min},
            {"n_max", n_max},
            {"filters", {{"square_free", filters.square_free}, {"connected", filters.connected}}},
            {"grid_ladder", grid_ladder},
            {"grid_budget", grid_budget},
            {"interval_budget", interval_budget},
            {"delta", delta},
            {"tickets_depth", tickets_depth},
            {"record_all", record_all}};
  }
};

struct StageCounts {
  std::uint64_t enumerated = 0;
  std::uint64_t candidates = 0;    // passed candidate_filter
  std::uint64_t uncolourable = 0;  // not 101-colourable
  std::uint64_t grid_embedded = 0;
  std::uint64_t interval_unembeddable = 0;
  std::uint64_t interval_embeddable = 0;
};

struct SearchSummary {
  std::map<int, StageCounts> per_n;
  std::size_t tickets_total = 0;
  std::size_t tickets_skipped = 0;  // already done on resume
  std::size_t tickets_failed = 0;
  std::vector<std::string> failures;
  std::vector<std::string> conjecture_log;  // interval-embeddable but never grid-embedded
  bool complete = false;                    // every ticket done and compacted
};

struct RunControl {
  bool resume = false;
  // Stop after this many tickets in this run (simulated interruption).
  std::size_t max_tickets = static_cast<std::size_t>(-1);
};

namespace detail {

inline std::string shard_name(int n, const std::string& ticket) {
  std::string s = "n" + std::to_string(n) + "_" + ticket + ".jsonl";
  std::replace(s.begin(), s.end(), ':', '-');
  return s;
}

struct TicketLogEntry {
  int n;
  std::string ticket;
  std::uint64_t count;
};

// Lines "<n> <ticket-id> done <count>"; a torn last line is ignored.
inline std::vector<TicketLogEntry> read_ticket_log(const fs::path& path) {
  std::vector<TicketLogEntry> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    TicketLogEntry e;
    std::string word, tail;
    if ((ls >> e.n >> e.ticket >> word >> e.count) && word == "done" && !(ls >> tail)) out.push_back(e);
  }
  return out;
}

inline CatalogRecord process_graph(const Graph& g, const JobSpec& spec, bool& keep) {
  CatalogRecord r;
  r.graph6 = graph6_encode(g);
  r.n = g.n();
  r.flags = compute_flags(g);
  r.reject = to_string(candidate_filter(g));
  r.timestamp = utc_timestamp();
  keep = spec.record_all || r.reject == std::string("pass") || !r.flags.colourable_101;
  if (r.flags.colourable_101) return r;
  GridResult grid;
  for (int N : spec.grid_ladder) {
    grid.max_tried = N;
    const auto e = grid_embed(g, N, spec.grid_budget);
    if (e.outcome == GridOutcome::kBudgetExceeded) grid.budget_exceeded = true;
    if (e.outcome == GridOutcome::kEmbedded) {
      grid.embedded_n = N;
      grid.witness = e.embedding;
      break;
    }
  }
  r.grid = grid;
  if (g.edges().empty()) return r;
  DecideOptions opt;
  opt.budget = spec.interval_budget;
  opt.delta = spec.delta;
  const auto v = decide_embeddability(g, opt);
  r.interval = IntervalSummary{to_string(v.kind), v.delta, v.stats.contractions};
  return r;
}

}  // namespace detail

inline fs::path catalog_path(const fs::path& out) { return out / "catalog.jsonl"; }

/// Ticket-log counts per n: the number of graphs emitted by finished tickets.
inline std::map<int, std::uint64_t> ticket_counts(const fs::path& out) {
  std::map<int, std::uint64_t> counts;
  for (const auto& e : detail::read_ticket_log(out / "tickets.log")) counts[e.n] += e.count;
  return counts;
}

/// Merge the shards of finished tickets into catalog.jsonl (sorted,
/// deduplicated, timestamps dropped) and return per-n stage counts.
inline std::map<int, StageCounts> compact(const fs::path& out) {
  std::vector<CatalogRecord> all;
  std::map<int, StageCounts> counts;
  for (const auto& e : detail::read_ticket_log(out / "tickets.log")) {
    counts[e.n].enumerated += e.count;
    const auto shard = out / "shards" / detail::shard_name(e.n, e.ticket);
    for (auto& r : read_jsonl(shard)) all.push_back(std::move(r));
  }
  const auto lines = compact_lines(all);
  const fs::path tmp = out / "catalog.jsonl.tmp";
  {
    std::ofstream os(tmp, std::ios::trunc);
    for (const auto& l : lines) os << l << '\n';
    if (!os) throw std::runtime_error("cannot write catalog");
  }
  fs::rename(tmp, catalog_path(out));
  for (const auto& line : lines) {
    const auto r = record_from_json(nlohmann::json::parse(line));
    auto& c = counts[r.n];
    c.candidates += r.reject == "pass";
    c.uncolourable += !r.flags.colourable_101;
    c.grid_embedded += r.grid && r.grid->embedded_n;
    if (r.interval) {
      c.interval_unembeddable += r.interval->verdict == to_string(VerdictKind::kProvedUnembeddable);
      c.interval_embeddable += r.interval->verdict == to_string(VerdictKind::kProvedEmbeddable);
    }
  }
  return counts;
}

/// Enumerate -> filter -> colour -> grid -> interval, one ticket at a time on
/// a worker pool. Finished tickets are appended to tickets.log after their
/// shard is in place, so a resumed run redoes only unfinished tickets.
inline SearchSummary run_search(const JobSpec& spec, const RunControl& control = {}) {
  spec.validate();
  fs::create_directories(spec.out / "shards");
  const fs::path job_file = spec.out / "job.json";
  const fs::path log_file = spec.out / "tickets.log";
  if (control.resume && fs::exists(job_file)) {
    std::ifstream in(job_file);
    if (nlohmann::json::parse(in) != spec.to_json())
      throw std::invalid_argument("resume: job specification differs from the one on disk");
  } else {
    if (!control.resume) fs::remove(log_file);
    std::ofstream(job_file) << spec.to_json().dump(2) << '\n';
  }

  std::set<std::pair<int, std::string>> done;
  for (const auto& e : detail::read_ticket_log(log_file)) done.insert({e.n, e.ticket});
  // A torn last line (crash mid-append) is rewritten without it.
  {
    const auto entries = detail::read_ticket_log(log_file);
    std::ofstream os(log_file, std::ios::trunc);
    for (const auto& e : entries) os << e.n << ' ' << e.ticket << " done " << e.count << '\n';
  }

  struct Work {
    int n;
    SubtreeTicket ticket;
  };
  std::vector<Work> work;
  SearchSummary summary;
  for (int n = spec.n_min; n <= spec.n_max; ++n)
    for (auto& t : make_tickets(n, spec.filters, spec.tickets_depth)) {
      ++summary.tickets_total;
      if (done.count({n, t.id()})) {
        ++summary.tickets_skipped;
        continue;
      }
      work.push_back({n, std::move(t)});
    }

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> started{0};
  std::mutex mu;
  std::ofstream log(log_file, std::ios::app);
  auto worker = [&] {
    while (true) {
      if (started.fetch_add(1) >= control.max_tickets) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const Work& w = work[i];
      const std::string id = w.ticket.id();
      try {
        std::vector<std::string> lines;
        std::uint64_t count = 0;
        enumerate(w.n, spec.filters, [&](const Graph& g) {
          ++count;
          bool keep = false;
          const auto r = detail::process_graph(g, spec, keep);
          if (keep) lines.push_back(to_json(r).dump());
        }, &w.ticket);
        const fs::path shard = spec.out / "shards" / detail::shard_name(w.n, id);
        const fs::path tmp = shard.string() + ".tmp";
        {
          std::ofstream os(tmp, std::ios::trunc);
          for (const auto& l : lines) os << l << '\n';
          os.flush();
          if (!os) throw std::runtime_error("cannot write shard " + shard.string());
        }
        fs::rename(tmp, shard);
        std::lock_guard lock(mu);
        log << w.n << ' ' << id << " done " << count << '\n';
        log.flush();
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        ++summary.tickets_failed;
        summary.failures.push_back(std::to_string(w.n) + ' ' + id + ": " + e.what());
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < spec.workers; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  log.close();

  const auto finished = detail::read_ticket_log(log_file);
  summary.complete = finished.size() == summary.tickets_total;
  summary.per_n = compact(spec.out);
  for (const auto& r : read_jsonl(catalog_path(spec.out)))
    if (r.interval && r.interval->verdict == to_string(VerdictKind::kProvedEmbeddable) &&
        !(r.grid && r.grid->embedded_n))
      summary.conjecture_log.push_back(r.graph6);
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [n, c] : summary.per_n)
    s[std::to_string(n)] = {{"enumerated", c.enumerated},       {"candidates", c.candidates},
                            {"uncolourable", c.uncolourable},   {"grid_embedded", c.grid_embedded},
                            {"interval_unembeddable", c.interval_unembeddable},
                            {"interval_embeddable", c.interval_embeddable}};
  std::ofstream(spec.out / "summary.json")
      << nlohmann::json{{"complete", summary.complete},
                        {"per_n", s},
                        {"tickets_total", summary.tickets_total},
                        {"conjecture_log", summary.conjecture_log}}
             .dump(2)
      << '\n';
  return summary;
}

}  // namespace kss
