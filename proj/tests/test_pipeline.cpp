#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "kss/brute_force.hpp"
#include "kss/catalog.hpp"
#include "kss/pipeline.hpp"
#include "kss/verify.hpp"
#include "test_util.hpp"

namespace kss {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("kss_pipeline_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

JobSpec small_job(const fs::path& out, int n_max = 8) {
  JobSpec spec;
  spec.n_min = 1;
  spec.n_max = n_max;
  spec.tickets_depth = 5;
  spec.grid_ladder = {1, 2};
  spec.interval_budget = 2000;
  spec.record_all = true;
  spec.out = out;
  return spec;
}

std::uint64_t direct_count(int n) {
  std::uint64_t c = 0;
  enumerate(n, {}, [&](const Graph&) { ++c; });
  return c;
}

TEST(Pipeline, CountsMatchOracleAndDirectEnumeration) {
  const auto out = scratch("counts");
  auto spec = small_job(out, 9);
  spec.record_all = false;
  const auto s = run_search(spec);
  ASSERT_TRUE(s.complete);
  EXPECT_EQ(s.tickets_failed, 0u);
  const auto counts = ticket_counts(out);
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(counts.at(n), brute::brute_force_classes(n, {}).size()) << n;
  for (int n = 8; n <= 9; ++n) EXPECT_EQ(counts.at(n), direct_count(n)) << n;
  for (const auto& [n, c] : s.per_n) EXPECT_EQ(c.enumerated, counts.at(n));
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "job.json"));
  fs::remove_all(out);
}

TEST(Pipeline, RecordsRevalidate) {
  const auto out = scratch("revalidate");
  const auto s = run_search(small_job(out, 7));
  ASSERT_TRUE(s.complete);
  const auto records = read_jsonl(catalog_path(out));
  std::uint64_t total = 0;
  for (const auto& [n, c] : s.per_n) total += c.enumerated;
  EXPECT_EQ(records.size(), total);
  for (const auto& r : records) {
    EXPECT_EQ(revalidate(r), "") << r.graph6;
    EXPECT_TRUE(r.timestamp.empty());
    // Every graph this small has a 101-colouring, so no later stage runs.
    EXPECT_TRUE(r.flags.colourable_101);
    EXPECT_FALSE(r.grid.has_value());
  }
  fs::remove_all(out);
}

TEST(Pipeline, UncolourableGraphRunsEveryStage) {
  JobSpec spec = small_job("unused");
  spec.grid_ladder = {1, 2};
  spec.interval_budget = 50;
  const Graph g = graph6_decode(
      "^{eCKA@OA?g?O@O?G?H??G?C_?@??G___OGGC@@OO_O@@A?A?P@@C?a?OPC?C@a??Q?g??aOC?@@OO?");
  bool keep = false;
  const auto r = detail::process_graph(g, spec, keep);
  EXPECT_TRUE(keep);
  EXPECT_FALSE(r.flags.colourable_101);
  ASSERT_TRUE(r.grid.has_value());
  EXPECT_EQ(r.grid->embedded_n, 2);
  ASSERT_TRUE(r.interval.has_value());
  EXPECT_EQ(revalidate(r), "");
  auto bad = r;
  bad.grid->witness[0] = bad.grid->witness[1];
  EXPECT_NE(revalidate(bad), "");
  bad = r;
  bad.flags.colourable_101 = true;
  EXPECT_NE(revalidate(bad), "");
}

TEST(Pipeline, WorkerCountDoesNotChangeCatalog) {
  const auto a = scratch("w1"), b = scratch("w3");
  auto sa = small_job(a), sb = small_job(b);
  sb.workers = 3;
  ASSERT_TRUE(run_search(sa).complete);
  ASSERT_TRUE(run_search(sb).complete);
  EXPECT_EQ(slurp(catalog_path(a)), slurp(catalog_path(b)));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Pipeline, RerunIsByteIdentical) {
  const auto out = scratch("rerun");
  ASSERT_TRUE(run_search(small_job(out)).complete);
  const std::string first = slurp(catalog_path(out));
  ASSERT_TRUE(run_search(small_job(out)).complete);
  EXPECT_EQ(first, slurp(catalog_path(out)));
  fs::remove_all(out);
}

TEST(Pipeline, InterruptedRunsResumeToIdenticalCatalog) {
  const auto ref = scratch("ref");
  auto spec = small_job(ref);
  const auto full = run_search(spec);
  ASSERT_TRUE(full.complete);
  const std::string expected = slurp(catalog_path(ref));

  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 4; ++trial) {
    const auto out = scratch("resume" + std::to_string(trial));
    spec.out = out;
    spec.workers = 1 + trial % 2;
    std::uniform_int_distribution<std::size_t> stop(0, full.tickets_total - 1);
    RunControl first;
    first.max_tickets = stop(rng);
    const auto partial = run_search(spec, first);
    EXPECT_FALSE(partial.complete);

    // Crash residue: a half-written shard and a torn log line.
    std::ofstream(out / "shards" / "n8_junk.jsonl.tmp") << "{\"graph6\":";
    std::ofstream(out / "tickets.log", std::ios::app) << "8 5:1f do";

    RunControl more;
    more.resume = true;
    std::size_t runs = 0;
    SearchSummary s;
    do {
      more.max_tickets = 1 + stop(rng) / 2;
      s = run_search(spec, more);
      ++runs;
    } while (!s.complete && runs < 100);
    ASSERT_TRUE(s.complete);
    EXPECT_EQ(slurp(catalog_path(out)), expected) << "trial " << trial;
    EXPECT_EQ(detail::read_ticket_log(out / "tickets.log").size(), full.tickets_total);
    EXPECT_EQ(ticket_counts(out), ticket_counts(ref));
    fs::remove_all(out);
  }
  fs::remove_all(ref);
}

TEST(Pipeline, ResumeSkipsFinishedTickets) {
  const auto out = scratch("skip");
  const auto spec = small_job(out);
  const auto full = run_search(spec);
  RunControl resume;
  resume.resume = true;
  const auto again = run_search(spec, resume);
  EXPECT_EQ(again.tickets_skipped, full.tickets_total);
  EXPECT_TRUE(again.complete);
  fs::remove_all(out);
}

TEST(Pipeline, ResumeRejectsDifferentJob) {
  const auto out = scratch("mismatch");
  auto spec = small_job(out, 6);
  run_search(spec);
  spec.delta = 1e-3;
  RunControl resume;
  resume.resume = true;
  EXPECT_THROW(run_search(spec, resume), std::invalid_argument);
  fs::remove_all(out);
}

TEST(Pipeline, InvalidJobsAreRejected) {
  auto spec = small_job(scratch("invalid"));
  spec.n_min = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_job(scratch("invalid"));
  spec.workers = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_job("");
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Catalog, RecordRoundTrip) {
  CatalogRecord r;
  r.graph6 = "Bw";
  r.n = 3;
  r.flags = compute_flags(test::complete(3));
  r.reject = "pass";
  r.grid = GridResult{1, 1, false, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  r.interval = IntervalSummary{"proved-embeddable", 1e-4, 7};
  r.timestamp = "2026-01-01T00:00:00Z";
  const auto j = to_json(r);
  EXPECT_EQ(to_json(record_from_json(j)), j);
  EXPECT_EQ(revalidate(r), "");
}

TEST(Catalog, FlagsOfSmallGraphs) {
  const auto k3 = compute_flags(test::complete(3));
  EXPECT_TRUE(k3.square_free && k3.connected && k3.every_vertex_in_triangle && k3.three_colourable);
  EXPECT_FALSE(k3.min_degree_3);
  const auto k4 = compute_flags(test::complete(4));
  EXPECT_FALSE(k4.square_free);
  EXPECT_FALSE(k4.three_colourable);
  EXPECT_TRUE(k4.four_colourable);
  EXPECT_FALSE(k4.colourable_101);
  EXPECT_TRUE(k4.consistent());
}

TEST(Catalog, CompactionSortsAndDeduplicates) {
  CatalogRecord a, b;
  a.graph6 = "Bw";
  a.n = 3;
  a.timestamp = "x";
  b.graph6 = "A_";
  b.n = 2;
  const auto lines = compact_lines({a, b, a});
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_NE(lines[0].find("\"A_\""), std::string::npos);
  EXPECT_EQ(lines[1].find("timestamp"), std::string::npos);
}

TEST(Report, CountsAgainstOracle) {
  std::map<int, std::uint64_t> counts;
  for (int n = 1; n <= 7; ++n) counts[n] = brute::brute_force_classes(n, {}).size();
  EXPECT_EQ(counts[3], 2u);
  EXPECT_EQ(counts[4], 3u);
  const auto rows = report_counts(counts, 10);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(*rows[2].count, 2u);
  EXPECT_EQ(*rows[3].count, 3u);
  EXPECT_FALSE(rows[9].count.has_value());
  EXPECT_GT(rows[9].fitted_log10, rows[6].fitted_log10);
  const auto csv = counts_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,count,extrapolated_log10_count");
  EXPECT_NE(csv.find("\n4,3,"), std::string::npos);
  EXPECT_NE(csv.find("\n10,,"), std::string::npos);
}

TEST(Report, ExactGeometricFit) {
  const auto rows = report_counts({{5, 100}, {6, 1000}, {7, 10000}}, 8);
  EXPECT_NEAR(rows.back().fitted_log10, 5.0, 1e-9);
}

TEST(Report, EmptyCatalogThrows) { EXPECT_THROW(report_counts({}), std::invalid_argument); }

TEST(VerifyKnown, FastBundlesPass) {
  for (const std::string name : {"grid-counts", "counts-vs-oracle", "prop5-prefixes"}) {
    const auto rep = verify_known(name);
    EXPECT_TRUE(rep.passed) << name;
    EXPECT_FALSE(rep.lines.empty());
  }
}

TEST(VerifyKnown, UnknownBundleThrows) { EXPECT_THROW(verify_known("nope"), std::invalid_argument); }

}  // namespace
}  // namespace kss
