#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "graylearn/solver.hpp"

namespace graylearn {

namespace {

// Internal literal: 2*v + (negated ? 1 : 0), v 0-based.
using ILit = std::uint32_t;
inline ILit mk(int v, bool neg) { return 2u * static_cast<ILit>(v) + (neg ? 1u : 0u); }
inline int var_of(ILit l) { return static_cast<int>(l >> 1); }
inline ILit neg(ILit l) { return l ^ 1u; }
inline ILit from_dimacs(Lit l) { return mk(std::abs(l) - 1, l < 0); }

enum : std::uint8_t { kTrue = 0, kFalse = 1, kUndef = 2 };

struct Clause {
  std::vector<ILit> lits;
  bool learnt = false;
  bool deleted = false;
  std::uint32_t lbd = 0;
  double activity = 0;
};

struct Watch {
  Clause* clause;
  ILit blocker;
};

class VarHeap {
 public:
  explicit VarHeap(const std::vector<double>& act) : act_(act) {}

  void grow(int n) { index_.assign(n, -1); }
  bool contains(int v) const { return index_[v] >= 0; }
  bool empty() const { return heap_.empty(); }

  void insert(int v) {
    if (contains(v)) return;
    index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    up(index_[v]);
  }
  void increased(int v) {
    if (contains(v)) up(index_[v]);
  }
  int pop() {
    const int top = heap_[0];
    heap_[0] = heap_.back();
    index_[heap_[0]] = 0;
    heap_.pop_back();
    index_[top] = -1;
    if (!heap_.empty()) down(0);
    return top;
  }

 private:
  bool better(int a, int b) const {
    return act_[a] > act_[b] || (act_[a] == act_[b] && a < b);
  }
  void up(int i) {
    const int v = heap_[i];
    while (i > 0) {
      const int p = (i - 1) / 2;
      if (!better(v, heap_[p])) break;
      heap_[i] = heap_[p];
      index_[heap_[i]] = i;
      i = p;
    }
    heap_[i] = v;
    index_[v] = i;
  }
  void down(int i) {
    const int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (2 * i + 1 < n) {
      int c = 2 * i + 1;
      if (c + 1 < n && better(heap_[c + 1], heap_[c])) ++c;
      if (!better(heap_[c], v)) break;
      heap_[i] = heap_[c];
      index_[heap_[i]] = i;
      i = c;
    }
    heap_[i] = v;
    index_[v] = i;
  }

  const std::vector<double>& act_;
  std::vector<int> heap_;
  std::vector<int> index_;
};

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

class Cdcl {
 public:
  Cdcl(const CnfInstance& cnf, std::uint64_t seed) : heap_(activity_) {
    n_ = static_cast<int>(cnf.num_vars());
    value_.assign(n_, kUndef);
    level_.assign(n_, 0);
    reason_.assign(n_, nullptr);
    phase_.assign(n_, false);
    activity_.assign(n_, 0.0);
    seen_.assign(n_, 0);
    watches_.resize(2 * static_cast<std::size_t>(n_));
    heap_.grow(n_);
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> jitter(0.0, 1e-5);
      for (int v = 0; v < n_; ++v) {
        activity_[v] = jitter(rng);
        phase_[v] = (rng() & 1u) != 0;
      }
    }
    for (int v = 0; v < n_; ++v) heap_.insert(v);

    if (cnf.trivially_unsat()) ok_ = false;
    std::vector<ILit> lits;
    for (std::size_t i = 0; ok_ && i < cnf.num_clauses(); ++i) {
      lits.clear();
      for (Lit l : cnf.clause(i)) lits.push_back(from_dimacs(l));
      add_original(lits);
    }
  }

  SolveStatus run(const SolveBudget& budget) {
    if (!ok_) return SolveStatus::Unsat;
    if (propagate()) return SolveStatus::Unsat;
    start_ = std::chrono::steady_clock::now();
    max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
    for (int restart = 0;; ++restart) {
      const auto limit = static_cast<std::uint64_t>(luby(2.0, restart) * 100.0);
      const SolveStatus s = search(limit, budget);
      if (s != SolveStatus::Unknown) return s;
      if (out_of_budget(budget)) return SolveStatus::Unknown;
      ++stats_.restarts;
    }
  }

  Model model() const {
    Model m(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) m.set(v + 1, value_[v] == kTrue);
    return m;
  }

  const SolverStats& stats() const { return stats_; }

 private:
  std::uint8_t lit_value(ILit l) const {
    const std::uint8_t v = value_[var_of(l)];
    return v == kUndef ? kUndef : static_cast<std::uint8_t>(v ^ (l & 1u));
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void add_original(std::vector<ILit>& lits) {
    std::sort(lits.begin(), lits.end());
    std::vector<ILit> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i]) && (lits[i] & 1u) == 0) return;
      if (!kept.empty() && kept.back() == lits[i]) continue;
      const std::uint8_t v = lit_value(lits[i]);
      if (v == kTrue) return;
      if (v == kFalse) continue;
      kept.push_back(lits[i]);
    }
    if (kept.empty()) {
      ok_ = false;
      return;
    }
    if (kept.size() == 1) {
      enqueue(kept[0], nullptr);
      if (propagate()) ok_ = false;
      return;
    }
    auto c = std::make_unique<Clause>();
    c->lits = std::move(kept);
    attach(c.get());
    clauses_.push_back(std::move(c));
  }

  void attach(Clause* c) {
    watches_[neg(c->lits[0])].push_back({c, c->lits[1]});
    watches_[neg(c->lits[1])].push_back({c, c->lits[0]});
  }

  void enqueue(ILit l, Clause* reason) {
    const int v = var_of(l);
    value_[v] = (l & 1u) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Returns the conflicting clause, or nullptr.
  Clause* propagate() {
    Clause* conflict = nullptr;
    while (qhead_ < trail_.size()) {
      const ILit p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      const ILit false_lit = neg(p);
      while (i < ws.size()) {
        Watch w = ws[i];
        if (w.clause->deleted) {
          ++i;
          continue;
        }
        if (lit_value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = *w.clause;
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        ++i;
        const ILit first = c.lits[0];
        if (first != w.blocker && lit_value(first) == kTrue) {
          ws[j++] = {&c, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k)
          if (lit_value(c.lits[k]) != kFalse) {
            std::swap(c.lits[1], c.lits[k]);
            watches_[neg(c.lits[1])].push_back({&c, first});
            moved = true;
            break;
          }
        if (moved) continue;
        ws[j++] = {&c, first};
        if (lit_value(first) == kFalse) {
          conflict = &c;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, &c);
        }
      }
      ws.resize(j);
      if (conflict) break;
    }
    return conflict;
  }

  void bump_var(int v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_.increased(v);
  }
  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (auto& l : learnts_) l->activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  std::uint32_t abstract_level(int v) const { return 1u << (level_[v] & 31); }

  bool redundant(ILit p, std::uint32_t levels) {
    stack_.clear();
    stack_.push_back(p);
    const std::size_t top = to_clear_.size();
    while (!stack_.empty()) {
      const int v = var_of(stack_.back());
      stack_.pop_back();
      const Clause& c = *reason_[v];
      for (std::size_t i = 1; i < c.lits.size(); ++i) {
        const int u = var_of(c.lits[i]);
        if (seen_[u] || level_[u] == 0) continue;
        if (reason_[u] != nullptr && (abstract_level(u) & levels) != 0) {
          seen_[u] = 1;
          stack_.push_back(c.lits[i]);
          to_clear_.push_back(c.lits[i]);
        } else {
          for (std::size_t k = top; k < to_clear_.size(); ++k) seen_[var_of(to_clear_[k])] = 0;
          to_clear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(Clause* conflict, std::vector<ILit>& learnt, int& back_level) {
    learnt.clear();
    learnt.push_back(0);
    int pending = 0;
    ILit p = 0;
    bool have_p = false;
    std::size_t index = trail_.size();
    do {
      Clause& c = *conflict;
      if (c.learnt) bump_clause(c);
      for (std::size_t i = have_p ? 1 : 0; i < c.lits.size(); ++i) {
        const ILit q = c.lits[i];
        const int v = var_of(q);
        if (seen_[v] || level_[v] == 0) continue;
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) ++pending;
        else learnt.push_back(q);
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      have_p = true;
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = neg(p);

    to_clear_.assign(learnt.begin(), learnt.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var_of(learnt[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i)
      if (reason_[var_of(learnt[i])] == nullptr || !redundant(learnt[i], levels))
        learnt[j++] = learnt[i];
    learnt.resize(j);
    for (ILit l : to_clear_) seen_[var_of(l)] = 0;

    back_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      back_level = level_[var_of(learnt[1])];
    }
  }

  std::uint32_t compute_lbd(const std::vector<ILit>& lits) {
    ++lbd_stamp_;
    std::uint32_t n = 0;
    for (ILit l : lits) {
      const auto lv = static_cast<std::size_t>(level_[var_of(l)]);
      if (lbd_seen_.size() <= lv) lbd_seen_.resize(lv + 1, 0);
      if (lbd_seen_[lv] != lbd_stamp_) {
        lbd_seen_[lv] = lbd_stamp_;
        ++n;
      }
    }
    return n;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
      const int v = var_of(trail_[i]);
      value_[v] = kUndef;
      reason_[v] = nullptr;
      phase_[v] = (trail_[i] & 1u) == 0;
      heap_.insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool locked(const Clause* c) const {
    const int v = var_of(c->lits[0]);
    return reason_[v] == c && lit_value(c->lits[0]) == kTrue;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [](const auto& a, const auto& b) {
      if (a->lbd != b->lbd) return a->lbd > b->lbd;
      return a->activity < b->activity;
    });
    const std::size_t half = learnts_.size() / 2;
    std::vector<std::unique_ptr<Clause>> kept;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
      auto& c = learnts_[i];
      if (i < half && c->lbd > 2 && c->lits.size() > 2 && !locked(c.get())) {
        c->deleted = true;
        graveyard_.push_back(std::move(c));
        ++stats_.learnts_deleted;
      } else {
        kept.push_back(std::move(c));
      }
    }
    learnts_ = std::move(kept);
    for (auto& ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(), [](const Watch& w) { return w.clause->deleted; }),
               ws.end());
    graveyard_.clear();
  }

  bool out_of_budget(const SolveBudget& budget) const {
    if (budget.max_conflicts && stats_.conflicts >= *budget.max_conflicts) return true;
    if (budget.max_time && std::chrono::steady_clock::now() - start_ >= *budget.max_time)
      return true;
    return false;
  }

  SolveStatus search(std::uint64_t conflict_limit, const SolveBudget& budget) {
    std::uint64_t conflicts_here = 0;
    std::vector<ILit> learnt;
    for (;;) {
      Clause* conflict = propagate();
      if (conflict) {
        ++stats_.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) return SolveStatus::Unsat;
        int back_level = 0;
        analyze(conflict, learnt, back_level);
        cancel_until(back_level);
        if (learnt.size() == 1) {
          enqueue(learnt[0], nullptr);
        } else {
          auto c = std::make_unique<Clause>();
          c->lits = learnt;
          c->learnt = true;
          c->lbd = compute_lbd(learnt);
          attach(c.get());
          bump_clause(*c);
          enqueue(learnt[0], c.get());
          learnts_.push_back(std::move(c));
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((stats_.conflicts & 63u) == 0 && out_of_budget(budget)) {
          cancel_until(0);
          return SolveStatus::Unknown;
        }
        continue;
      }
      if (conflicts_here >= conflict_limit) {
        cancel_until(0);
        return SolveStatus::Unknown;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >=
          max_learnts_) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      int next = -1;
      while (!heap_.empty()) {
        const int v = heap_.pop();
        if (value_[v] == kUndef) {
          next = v;
          break;
        }
      }
      if (next < 0) return SolveStatus::Sat;
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(mk(next, !phase_[next]), nullptr);
    }
  }

  int n_ = 0;
  bool ok_ = true;
  std::vector<std::uint8_t> value_;
  std::vector<int> level_;
  std::vector<Clause*> reason_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<ILit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::unique_ptr<Clause>> clauses_;
  std::vector<std::unique_ptr<Clause>> learnts_;
  std::vector<std::unique_ptr<Clause>> graveyard_;
  VarHeap heap_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  std::vector<ILit> stack_;
  std::vector<ILit> to_clear_;
  std::vector<std::uint64_t> lbd_seen_;
  std::uint64_t lbd_stamp_ = 0;
  std::chrono::steady_clock::time_point start_;
  SolverStats stats_;
};

}  // namespace

SolveResult solve_cdcl(const CnfInstance& cnf, const SolveBudget& budget, std::uint64_t seed) {
  Cdcl solver(cnf, seed);
  SolveResult result;
  result.status = solver.run(budget);
  result.stats = solver.stats();
  if (result.status == SolveStatus::Sat) {
    result.model = solver.model();
    if (!satisfies(cnf, result.model))
      throw std::logic_error("CDCL produced a model that falsifies clause " +
                             std::to_string(first_falsified_clause(cnf, result.model)));
  }
  return result;
}

}  // namespace graylearn
