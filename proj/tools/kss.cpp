#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kss/catalog.hpp"
#include "kss/colouring.hpp"
#include "kss/graph6.hpp"
#include "kss/grid_embed.hpp"
#include "kss/interval_embed.hpp"
#include "kss/orderly.hpp"
#include "kss/pipeline.hpp"
#include "kss/polynomial.hpp"
#include "kss/verify.hpp"

namespace {

using namespace kss;
namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;
constexpr int kInconclusive = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "7", "3..9" or "3-9".
std::pair<int, int> parse_range(const std::string& s) {
  for (const std::string sep : {"..", "-"}) {
    if (auto p = s.find(sep); p != std::string::npos && p > 0)
      return {std::stoi(s.substr(0, p)), std::stoi(s.substr(p + sep.size()))};
  }
  const int n = std::stoi(s);
  return {n, n};
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto [lo, hi] = parse_range(item);
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list: " + s);
  return out;
}

EnumFilters parse_filters(const std::string& s) {
  EnumFilters f{false, false};
  if (s == "none") return f;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "square-free") f.square_free = true;
    else if (item == "connected") f.connected = true;
    else throw UsageError("unknown filter '" + item + "' (square-free, connected, none)");
  }
  return f;
}

// A graph6 string, or a file holding one graph6 per line.
std::vector<Graph> read_graphs(const std::string& arg) {
  std::vector<Graph> out;
  if (fs::exists(arg)) {
    std::ifstream in(arg);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) out.push_back(graph6_decode(line));
  } else {
    out.push_back(graph6_decode(arg));
  }
  if (out.empty()) throw UsageError("no graphs in " + arg);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kochen-Specker search toolkit"};
  app.set_version_flag("--version", KSS_VERSION);
  app.require_subcommand(1);

  std::string n_arg, filters_arg = "square-free,connected", grid_arg = "1,2,3,4,5,8", out, resume_arg, graph_arg;
  std::string ticket_arg, name_arg;
  std::uint64_t budget = 0;
  double delta = kDefaultDelta;
  int depth = kDefaultSplitDepth, workers = 1, extrapolate_to = 30, count = 100;
  bool count_only = false, record_all = false, shadow = false, resume_flag = false;
  std::uint64_t seed = 1;
  std::string density_arg = "0.1,0.2,0.3";

  auto* enumerate_cmd = app.add_subcommand("enumerate", "Canonical graphs, one graph6 per line");
  enumerate_cmd->add_option("--n", n_arg, "Vertex count or range a..b")->required();
  enumerate_cmd->add_option("--filters", filters_arg, "square-free,connected | square-free | connected | none");
  enumerate_cmd->add_option("--tickets-depth", depth, "Split depth for --ticket");
  enumerate_cmd->add_option("--ticket", ticket_arg, "Enumerate only this subtree");
  enumerate_cmd->add_flag("--count", count_only, "Print counts per n instead of graphs");
  enumerate_cmd->add_option("--out", out, "Output file");

  auto* colour_cmd = app.add_subcommand("colour", "101-colourability and k-colourability");
  colour_cmd->add_option("graph", graph_arg, "graph6 string or file")->required();
  colour_cmd->add_option("--out", out, "Output file");

  auto* grid_cmd = app.add_subcommand("embed-grid", "Exact embedding on cubic grids");
  grid_cmd->add_option("graph", graph_arg, "graph6 string or file")->required();
  grid_cmd->add_option("--grid-n", grid_arg, "Grid parameters, e.g. 2 or 1,2,3,8");
  grid_cmd->add_option("--budget", budget, "Search node limit per grid");
  grid_cmd->add_option("--out", out, "Output file");

  auto* interval_cmd = app.add_subcommand("embed-interval", "Interval branch-and-prune embeddability");
  interval_cmd->add_option("graph", graph_arg, "graph6 string")->required();
  interval_cmd->add_option("--budget", budget, "Contraction steps");
  interval_cmd->add_option("--delta", delta, "Minimum separation of directions");
  interval_cmd->add_option("--resume", resume_arg, "Checkpoint to continue from");
  interval_cmd->add_option("--out", out, "Checkpoint written when inconclusive");
  interval_cmd->add_flag("--shadow", shadow, "Re-check refutations with exact rational rounding");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Enumerate, filter, colour and embed with tickets");
  pipeline_cmd->add_option("--n", n_arg, "Vertex count or range a..b")->required();
  pipeline_cmd->add_option("--filters", filters_arg, "Enumeration filters");
  pipeline_cmd->add_option("--grid-n", grid_arg, "Grid ladder");
  pipeline_cmd->add_option("--budget", budget, "Interval contraction steps per survivor");
  pipeline_cmd->add_option("--delta", delta, "Minimum separation of directions");
  pipeline_cmd->add_option("--tickets-depth", depth, "Split depth");
  pipeline_cmd->add_option("--workers", workers, "Worker threads");
  pipeline_cmd->add_flag("--resume", resume_flag, "Skip tickets already done");
  pipeline_cmd->add_flag("--record-all", record_all, "Store every graph, not only candidates");
  pipeline_cmd->add_option("--out", out, "Output directory")->required();

  auto* verify_cmd = app.add_subcommand("verify-known", "Re-run a bundle of known results");
  verify_cmd->add_option("name", name_arg, "grid-counts | odd-grid-colourability | n2-critical-31 | "
                                           "counts-vs-oracle | prop5-prefixes")
      ->required();
  verify_cmd->add_option("--out", out, "Write the report with artifacts as JSON");

  auto* report_cmd = app.add_subcommand("report", "Counts per n with a log-linear extrapolation");
  report_cmd->add_option("dir", graph_arg, "Pipeline output directory")->required();
  report_cmd->add_option("--n", extrapolate_to, "Extrapolate up to this n");
  report_cmd->add_option("--out", out, "CSV file");

  auto* cnf_cmd = app.add_subcommand("export-cnf", "DIMACS CNF of the 101-colouring problem");
  cnf_cmd->add_option("graph", graph_arg, "graph6 string")->required();
  cnf_cmd->add_option("--out", out, "Output file");

  auto* poly_cmd = app.add_subcommand("export-poly", "Embedding polynomial as text");
  poly_cmd->add_option("graph", graph_arg, "graph6 string")->required();
  poly_cmd->add_option("--out", out, "Output file");

  auto* random_cmd = app.add_subcommand("random", "Seeded random graphs that pass the filters");
  random_cmd->add_option("--n", n_arg, "Vertex count or range")->required();
  random_cmd->add_option("--density", density_arg, "Comma-separated edge probabilities");
  random_cmd->add_option("--count", count, "Graphs drawn per (n, density)");
  random_cmd->add_option("--seed", seed, "Random seed");
  random_cmd->add_option("--filters", filters_arg, "Filters applied to the draws");
  random_cmd->add_option("--out", out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (enumerate_cmd->parsed()) {
      const auto [lo, hi] = parse_range(n_arg);
      if (lo < 1 || hi < lo || hi > kMaxVertices) throw UsageError("--n out of range");
      const EnumFilters filters = parse_filters(filters_arg);
      Output o(out);
      for (int n = lo; n <= hi; ++n) {
        std::optional<SubtreeTicket> ticket;
        if (!ticket_arg.empty()) ticket = SubtreeTicket::from_id(ticket_arg);
        std::uint64_t total = 0;
        enumerate(n, filters, [&](const Graph& g) {
          ++total;
          if (!count_only) o.os() << graph6_encode(g) << '\n';
        }, ticket ? &*ticket : nullptr);
        if (count_only) o.os() << n << ' ' << total << '\n';
      }
      return kOk;
    }
    if (colour_cmd->parsed()) {
      Output o(out);
      for (const Graph& g : read_graphs(graph_arg)) {
        const auto r = solve_101(g);
        nlohmann::json j{{"graph6", graph6_encode(g)},
                         {"n", g.n()},
                         {"colourable_101", r.colourable()},
                         {"three_colourable", is_k_colourable(g, 3)},
                         {"four_colourable", is_k_colourable(g, 4)},
                         {"candidate_filter", to_string(candidate_filter(g))}};
        j["colouring"] = r.colourable() ? colouring_json(*r.colouring) : nlohmann::json();
        o.os() << j.dump() << '\n';
      }
      return kOk;
    }
    if (grid_cmd->parsed()) {
      Output o(out);
      bool inconclusive = false;
      for (const Graph& g : read_graphs(graph_arg)) {
        nlohmann::json j{{"graph6", graph6_encode(g)}};
        nlohmann::json attempts = nlohmann::json::array();
        bool budget_hit = false, found = false;
        for (int N : parse_list(grid_arg)) {
          const auto r = grid_embed(g, N, budget == 0 ? kDefaultGridNodeLimit : budget);
          attempts.push_back({{"N", N}, {"outcome", to_string(r.outcome)}, {"nodes", r.nodes}});
          budget_hit = budget_hit || r.outcome == GridOutcome::kBudgetExceeded;
          if (r.outcome == GridOutcome::kEmbedded) {
            j["N"] = N;
            j["embedding"] = embedding_json(r.embedding);
            found = true;
            break;
          }
        }
        j["embedded"] = found;
        j["attempts"] = attempts;
        inconclusive = inconclusive || (!found && budget_hit);
        o.os() << j.dump() << '\n';
      }
      return inconclusive ? kInconclusive : kOk;
    }
    if (interval_cmd->parsed()) {
      const Graph g = graph6_decode(graph_arg);
      DecideOptions opt;
      opt.budget = budget == 0 ? kDefaultIntervalBudget : budget;
      opt.delta = delta;
      opt.shadow_check = shadow;
      if (!resume_arg.empty()) {
        std::ifstream in(resume_arg);
        if (!in) throw UsageError("cannot read checkpoint " + resume_arg);
        opt.resume = load_checkpoint(nlohmann::json::parse(in), g, delta);
      }
      const auto v = decide_embeddability(g, opt);
      std::cout << verdict_json(v).dump() << '\n';
      if (v.kind == VerdictKind::kInconclusive) {
        if (!out.empty()) std::ofstream(out) << checkpoint_json(g, v).dump() << '\n';
        return kInconclusive;
      }
      return kOk;
    }
    if (pipeline_cmd->parsed()) {
      JobSpec spec;
      std::tie(spec.n_min, spec.n_max) = parse_range(n_arg);
      spec.filters = parse_filters(filters_arg);
      spec.grid_ladder = parse_list(grid_arg);
      if (budget != 0) spec.interval_budget = budget;
      spec.delta = delta;
      spec.tickets_depth = depth;
      spec.workers = workers;
      spec.record_all = record_all;
      spec.out = out;
      RunControl control;
      control.resume = resume_flag;
      const auto summary = run_search(spec, control);
      nlohmann::json per_n = nlohmann::json::object();
      for (const auto& [n, c] : summary.per_n)
        per_n[std::to_string(n)] = {{"enumerated", c.enumerated}, {"candidates", c.candidates},
                                    {"uncolourable", c.uncolourable}, {"grid_embedded", c.grid_embedded}};
      std::cout << nlohmann::json{{"complete", summary.complete},
                                  {"tickets", summary.tickets_total},
                                  {"skipped", summary.tickets_skipped},
                                  {"failed", summary.failures},
                                  {"per_n", per_n},
                                  {"conjecture_log", summary.conjecture_log}}
                       .dump(2)
                << '\n';
      for (const auto& r : read_jsonl(catalog_path(spec.out)))
        if (const auto why = revalidate(r); !why.empty()) {
          std::cerr << "record " << r.graph6 << ": " << why << '\n';
          return kVerifyFailed;
        }
      return summary.complete ? kOk : kInconclusive;
    }
    if (verify_cmd->parsed()) {
      const auto& names = known_bundles();
      if (std::find(names.begin(), names.end(), name_arg) == names.end())
        throw UsageError("unknown bundle '" + name_arg + "'");
      const auto rep = verify_known(name_arg);
      for (const auto& line : rep.lines) std::cout << line << '\n';
      std::cout << (rep.passed ? "PASS " : "FAIL ") << rep.name << '\n';
      if (!out.empty())
        std::ofstream(out) << nlohmann::json{{"name", rep.name}, {"passed", rep.passed}, {"lines", rep.lines},
                                             {"artifacts", rep.artifacts}}
                                  .dump()
                           << '\n';
      return rep.passed ? kOk : kVerifyFailed;
    }
    if (report_cmd->parsed()) {
      const auto counts = ticket_counts(graph_arg);
      if (counts.empty()) throw UsageError("no finished tickets in " + graph_arg);
      Output o(out);
      o.os() << counts_csv(report_counts(counts, extrapolate_to));
      return kOk;
    }
    if (cnf_cmd->parsed()) {
      Output o(out);
      o.os() << export_dimacs_101(graph6_decode(graph_arg));
      return kOk;
    }
    if (poly_cmd->parsed()) {
      Output o(out);
      o.os() << export_polynomial(graph6_decode(graph_arg)).to_text();
      return kOk;
    }
    if (random_cmd->parsed()) {
      const auto [lo, hi] = parse_range(n_arg);
      if (lo < 1 || hi < lo || hi > kMaxVertices) throw UsageError("--n out of range");
      const EnumFilters filters = parse_filters(filters_arg);
      std::vector<double> densities;
      std::stringstream ss(density_arg);
      for (std::string item; std::getline(ss, item, ',');) densities.push_back(std::stod(item));
      std::mt19937_64 rng(seed);
      Output o(out);
      for (int n = lo; n <= hi; ++n)
        for (double p : densities) {
          std::bernoulli_distribution coin(p);
          for (int i = 0; i < count; ++i) {
            Graph g(n);
            for (int a = 0; a < n; ++a)
              for (int b = a + 1; b < n; ++b)
                if (coin(rng)) g.add_edge(a, b);
            if (filters.square_free && !is_square_free(g)) continue;
            if (filters.connected && !is_connected(g)) continue;
            o.os() << graph6_encode(g) << '\n';
          }
        }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
