#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

// Small CDCL solver specialised for the short clauses of colouring problems:
// two-watched-literal propagation, first-UIP learning, activity-ordered
// decisions with phase saving, and Luby restarts. Fully deterministic.
namespace kss::sat {

using Lit = int;  // 2 * var + (negated ? 1 : 0)

inline constexpr Lit pos(int var) { return 2 * var; }
inline constexpr Lit neg(int var) { return 2 * var + 1; }
inline constexpr int var_of(Lit l) { return l >> 1; }
inline constexpr Lit negate(Lit l) { return l ^ 1; }

enum class Status { kSat, kUnsat, kUnknown };

struct Stats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t propagations = 0;
};

class Solver {
 public:
  explicit Solver(int num_vars)
      : n_(num_vars),
        value_(num_vars, kUndef),
        level_(num_vars, 0),
        reason_(num_vars, -1),
        watches_(2 * static_cast<std::size_t>(num_vars)),
        activity_(num_vars, 0.0),
        phase_(num_vars, 0),
        seen_(num_vars, 0),
        heap_pos_(num_vars, -1) {}

  int num_vars() const { return n_; }

  /// Initial branching priority; larger is tried first. Ties by lower index.
  void set_priority(int var, double priority) { activity_[var] = priority; }
  /// Value tried first when branching on var.
  void set_phase(int var, bool value) { phase_[var] = value ? 1 : 0; }

  void add_clause(std::vector<Lit> lits) {
    if (unsat_) return;
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == negate(lits[i - 1])) return;  // tautology
    if (lits.empty()) {
      unsat_ = true;
      return;
    }
    if (lits.size() == 1) {
      units_.push_back(lits[0]);
      return;
    }
    attach(std::move(lits), false);
  }

  /// kUnknown only when conflict_limit is reached.
  Status solve(std::uint64_t conflict_limit = UINT64_MAX) {
    if (unsat_) return Status::kUnsat;
    for (Lit u : units_) {
      if (lit_value(u) == kFalse) return finish(Status::kUnsat);
      if (lit_value(u) == kUndef) assign(u, -1);
    }
    if (propagate() >= 0) return finish(Status::kUnsat);
    for (int v = 0; v < n_; ++v) heap_insert(v);

    std::uint64_t restart_index = 0;
    std::uint64_t until_restart = luby(restart_index) * kRestartBase;
    std::vector<Lit> learnt;
    while (true) {
      const int conflict = propagate();
      if (conflict >= 0) {
        ++stats_.conflicts;
        if (decision_level() == 0) return finish(Status::kUnsat);
        if (stats_.conflicts > conflict_limit) return finish(Status::kUnknown);
        int back_level = 0;
        analyze(conflict, learnt, back_level);
        backtrack(back_level);
        if (learnt.size() == 1) {
          assign(learnt[0], -1);
        } else {
          const int cref = attach(learnt, true);
          assign(learnt[0], cref);
        }
        decay();
        if (--until_restart == 0) {
          ++restart_index;
          until_restart = luby(restart_index) * kRestartBase;
          backtrack(0);
        }
        if (learnt_count_ > max_learnts_) reduce_learnts();
        continue;
      }
      const int var = pick_branch();
      if (var < 0) return finish(Status::kSat);
      ++stats_.decisions;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      assign(phase_[var] ? pos(var) : neg(var), -1);
    }
  }

  /// Model after kSat.
  const std::vector<bool>& model() const { return model_; }
  const Stats& stats() const { return stats_; }

 private:
  static constexpr std::int8_t kUndef = -1, kFalse = 0, kTrue = 1;
  static constexpr std::uint64_t kRestartBase = 100;

  struct Clause {
    std::vector<Lit> lits;
    double activity = 0.0;
    bool learnt = false;
    bool removed = false;
  };

  static std::uint64_t luby(std::uint64_t i) {
    // Luby sequence 1 1 2 1 1 2 4 ..., zero-based.
    std::uint64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::uint64_t{1} << seq;
  }

  std::int8_t lit_value(Lit l) const {
    const std::int8_t v = value_[var_of(l)];
    if (v == kUndef) return kUndef;
    return (l & 1) ? static_cast<std::int8_t>(1 - v) : v;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int attach(std::vector<Lit> lits, bool learnt) {
    const int cref = static_cast<int>(clauses_.size());
    watches_[negate(lits[0])].push_back(cref);
    watches_[negate(lits[1])].push_back(cref);
    clauses_.push_back({std::move(lits), 0.0, learnt, false});
    if (learnt) {
      ++learnt_count_;
      bump_clause(cref);
    }
    return cref;
  }

  void assign(Lit l, int reason) {
    const int v = var_of(l);
    value_[v] = (l & 1) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Returns a conflicting clause index, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      const Lit p = trail_[qhead_++];  // p became true; clauses watching ~p... stored under p
      ++stats_.propagations;
      auto& ws = watches_[p];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const int cref = ws[i];
        Clause& c = clauses_[cref];
        if (c.removed) continue;
        const Lit false_lit = negate(p);
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        if (lit_value(c.lits[0]) == kTrue) {
          ws[keep++] = cref;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (lit_value(c.lits[k]) != kFalse) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[negate(c.lits[1])].push_back(cref);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = cref;
        if (lit_value(c.lits[0]) == kFalse) {
          for (std::size_t r = i + 1; r < ws.size(); ++r) ws[keep++] = ws[r];
          ws.resize(keep);
          qhead_ = trail_.size();
          return cref;
        }
        assign(c.lits[0], cref);
      }
      ws.resize(keep);
    }
    return -1;
  }

  void analyze(int conflict, std::vector<Lit>& learnt, int& back_level) {
    learnt.assign(1, 0);
    int pending = 0;
    Lit p = -1;
    std::size_t index = trail_.size();
    int cref = conflict;
    do {
      Clause& c = clauses_[cref];
      if (c.learnt) bump_clause(cref);
      for (Lit q : c.lits) {
        if (p >= 0 && q == p) continue;
        const int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        bump_var(v);
        if (level_[v] >= decision_level()) ++pending;
        else learnt.push_back(q);
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      cref = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = negate(p);

    back_level = 0;
    std::size_t max_i = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      if (level_[var_of(learnt[i])] > back_level) {
        back_level = level_[var_of(learnt[i])];
        max_i = i;
      }
    }
    if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    for (std::size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
  }

  void backtrack(int level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i > static_cast<std::size_t>(trail_lim_[level]); --i) {
      const int v = var_of(trail_[i - 1]);
      phase_[v] = value_[v] == kTrue ? 1 : 0;
      value_[v] = kUndef;
      reason_[v] = -1;
      heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  int pick_branch() {
    while (!heap_.empty()) {
      const int v = heap_pop();
      if (value_[v] == kUndef) return v;
    }
    return -1;
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) sift_up(heap_pos_[v]);
  }

  void bump_clause(int cref) {
    clauses_[cref].activity += clause_inc_;
    if (clauses_[cref].activity > 1e20) {
      for (auto& c : clauses_) c.activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  void decay() {
    var_inc_ /= 0.95;
    clause_inc_ /= 0.999;
  }

  bool locked(int cref) const {
    const Lit l = clauses_[cref].lits[0];
    return lit_value(l) == kTrue && reason_[var_of(l)] == cref;
  }

  void reduce_learnts() {
    std::vector<int> candidates;
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
      if (clauses_[i].learnt && !clauses_[i].removed && clauses_[i].lits.size() > 2 && !locked(i))
        candidates.push_back(i);
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
      if (clauses_[a].activity != clauses_[b].activity)
        return clauses_[a].activity < clauses_[b].activity;
      return a < b;
    });
    for (std::size_t i = 0; i < candidates.size() / 2; ++i) {
      clauses_[candidates[i]].removed = true;
      clauses_[candidates[i]].lits.clear();
      clauses_[candidates[i]].lits.shrink_to_fit();
      --learnt_count_;
    }
    max_learnts_ = max_learnts_ + max_learnts_ / 10;
  }

  Status finish(Status s) {
    if (s == Status::kSat) {
      model_.assign(n_, false);
      for (int v = 0; v < n_; ++v) model_[v] = value_[v] == kTrue;
    }
    return s;
  }

  // Max-heap on (activity, -index).
  bool heap_less(int a, int b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }
  void heap_insert(int v) {
    if (heap_pos_[v] >= 0) return;
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    sift_up(heap_pos_[v]);
  }
  int heap_pop() {
    const int top = heap_[0];
    heap_pos_[top] = -1;
    const int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      sift_down(0);
    }
    return top;
  }
  void sift_up(int i) {
    const int v = heap_[i];
    while (i > 0) {
      const int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void sift_down(int i) {
    const int v = heap_[i];
    const int size = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= size) break;
      if (child + 1 < size && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  int n_;
  bool unsat_ = false;
  std::vector<Lit> units_;
  std::vector<std::int8_t> value_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::vector<int>> watches_;
  std::vector<Clause> clauses_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  std::vector<std::int8_t> phase_;
  std::vector<std::int8_t> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  std::size_t learnt_count_ = 0;
  std::size_t max_learnts_ = 20000;
  std::vector<bool> model_;
  Stats stats_;
};

}  // namespace kss::sat
