#include "graylearn/learner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "graylearn/dimacs.hpp"

namespace graylearn {

namespace {

SolveResult run_solver(const CnfInstance& cnf, const LearnerConfig& config, const std::string& stem,
                       std::size_t* counter) {
  if (counter) ++*counter;
  if (config.emit_dimacs) {
    static std::size_t serial = 0;
    write_dimacs_files(cnf, *config.emit_dimacs, std::to_string(serial++) + "_" + stem);
  }
  SolveResult r = solve(cnf, config.solver);
  if (r.status == SolveStatus::Unknown)
    throw std::runtime_error("solver budget exhausted on " + stem);
  return r;
}

std::string describe_mm_failure(const MmViolation& v) {
  return "rule " + std::to_string(v.rule) + ": " + v.detail;
}

}  // namespace

MinGenResult min_gen(const ObservationTable& t, std::size_t n_start, const LearnerConfig& config,
                     LearnerStats* stats) {
  const std::size_t limit = std::max<std::size_t>(1, t.prefix_words().size());
  for (std::size_t n = std::max<std::size_t>(1, n_start); n <= limit; ++n) {
    MmInstance inst = build_mm_instance(t, n, config.encoding);
    SolveResult r = run_solver(inst.cnf, config, "mm_n" + std::to_string(n),
                               stats ? &stats->mm_sat_calls : nullptr);
    if (r.status != SolveStatus::Sat) continue;
    MinGenResult out;
    out.mm = decode_mm(t, inst.mm, r.model);
    if (auto v = validate_mm(t, out.mm))
      throw std::logic_error("min_gen: decoded map invalid, " + describe_mm_failure(*v));
    out.transducer = resulting_transducer(t, out.mm);
    out.n = n;
    return out;
  }
  throw std::logic_error("min_gen: no merging map up to the singleton partition size");
}

std::optional<std::string> replay_failure(const ObservationTable& t, const Dfa& up,
                                          const CompetingWitness& w) {
  if (!up.accepts(w.u)) return "witness " + show(w.u) + " is outside Up";
  if (auto v = validate_mm(t, w.first)) return "first map: " + describe_mm_failure(*v);
  if (w.kind == CompetingKind::MutedOrOpen) {
    Transducer m = open_completion(t, w.first, w.added);
    if (!evaluate(m, w.u)) return "witness " + show(w.u) + " not accepted by the open completion";
    const auto muted = muted_pairs(t, w.first);
    const auto open = open_ends(t, w.first);
    const auto states = class_states(w.first);
    StateId q = m.initial_state();
    for (char a : w.u) {
      Word rep;
      for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == q) {
          rep = t.prefix_words()[i];
          break;
        }
      const ClassSymbol cs{rep, a};
      if (std::find(muted.begin(), muted.end(), cs) != muted.end() ||
          std::find(open.begin(), open.end(), cs) != open.end())
        return std::nullopt;
      q = m.transition(q, a)->target;
    }
    return "run of " + show(w.u) + " uses no muted or open transition";
  }
  if (!w.second) return "two-map witness without a second map";
  if (auto v = validate_mm(t, *w.second)) return "second map: " + describe_mm_failure(*v);
  const auto l = evaluate(resulting_transducer(t, w.first), w.u);
  const auto r = evaluate(resulting_transducer(t, *w.second), w.u);
  if (w.kind == CompetingKind::OutputMismatch) {
    if (!l || !r || *l == *r) return "outputs on " + show(w.u) + " do not differ";
  } else if (!l || r) {
    return "domains on " + show(w.u) + " do not differ";
  }
  return std::nullopt;
}

namespace {

// Distinct resulting transducers of size-n maps, compared exactly against the
// first one. nullopt when the enumeration limit is reached before the set of
// candidates is exhausted.
std::optional<std::optional<CompetingWitness>> compare_candidates(const ObservationTable& t,
                                                                  const Dfa& up, std::size_t n,
                                                                  const LearnerConfig& config,
                                                                  LearnerStats* stats) {
  MmInstance inst = build_mm_instance(t, n, config.encoding);
  std::optional<MergingMap> first;
  Transducer reference;
  for (std::size_t round = 0; round <= config.max_candidates; ++round) {
    SolveResult r = run_solver(inst.cnf, config, "cand_n" + std::to_string(n),
                               stats ? &stats->candidate_sat_calls : nullptr);
    if (r.status != SolveStatus::Sat) return std::optional<CompetingWitness>{};
    MergingMap mm = decode_mm(t, inst.mm, r.model);
    Transducer m = resulting_transducer(t, mm);
    if (!first) {
      first = mm;
      reference = std::move(m);
    } else if (auto w = equivalent_on(reference, m, up)) {
      CompetingWitness out;
      out.u = w->word;
      out.first = *first;
      out.second = std::move(mm);
      if (w->kind == WitnessKind::OutputMismatch) {
        out.kind = CompetingKind::OutputMismatch;
      } else {
        out.kind = CompetingKind::DomainMismatch;
        if (w->kind == WitnessKind::DomainRightOnly) std::swap(out.first, *out.second);
      }
      return std::optional<CompetingWitness>{std::move(out)};
    }
    std::vector<Lit> block;
    for (Lit l : transducer_literals(inst.mm, r.model, &up)) block.push_back(-l);
    inst.cnf.add_clause(block);
  }
  return std::nullopt;
}

}  // namespace

std::optional<CompetingWitness> competing_min_gen(const ObservationTable& t, const Dfa& up,
                                                  std::size_t n, const LearnerConfig& config,
                                                  LearnerStats* stats) {
  auto checked = [&](CompetingWitness w) {
    if (auto f = replay_failure(t, up, w)) throw std::logic_error("competing_min_gen: " + *f);
    return w;
  };
  auto exact = compare_candidates(t, up, n, config, stats);
  if (exact && *exact) return checked(std::move(**exact));
  if (!exact) {
    const std::size_t bound1 = wit1_length_bound(n, up);
    const std::size_t len1 = std::min(bound1, config.max_witness_len);
    if (len1 < bound1) {
      if (stats) ++stats->capped_searches;
      if (config.warn)
        config.warn("two-map witness search capped at length " + std::to_string(len1) + " (bound " +
                    std::to_string(bound1) + "); the search is incomplete");
    }
    for (Wit1Variant variant : {Wit1Variant::OutputMismatch, Wit1Variant::DomainMismatch}) {
      Wit1Instance inst = build_wit1(t, up, n, len1, variant, config.encoding);
      const bool output = variant == Wit1Variant::OutputMismatch;
      SolveResult r = run_solver(inst.cnf, config,
                                 std::string(output ? "wit1out" : "wit1dom") + "_n" + std::to_string(n),
                                 stats ? &stats->wit1_sat_calls : nullptr);
      if (r.status != SolveStatus::Sat) continue;
      CompetingWitness w;
      w.kind = output ? CompetingKind::OutputMismatch : CompetingKind::DomainMismatch;
      w.u = decode_input(inst.input, t.input_alphabet(), r.model);
      w.first = decode_mm(t, inst.left, r.model);
      w.second = decode_mm(t, inst.right, r.model);
      return checked(std::move(w));
    }
  }
  Wit2Instance inst = build_wit2(t, up, n, wit2_length_bound(n, up), config.encoding);
  SolveResult r = run_solver(inst.cnf, config, "wit2_n" + std::to_string(n),
                             stats ? &stats->wit2_sat_calls : nullptr);
  if (r.status != SolveStatus::Sat) return std::nullopt;
  Wit2Decoded d = decode_wit2(t, inst, r.model);
  CompetingWitness w;
  w.kind = CompetingKind::MutedOrOpen;
  w.u = std::move(d.u);
  w.first = std::move(d.mm);
  w.added = std::move(d.added);
  return checked(std::move(w));
}

LearnResult learn(Teacher& teacher, const Dfa& up, const Alphabet& output_alphabet,
                  const LearnerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  LearnerStats stats;
  MembershipOracle oracle(teacher, up);
  ObservationTable t(up.alphabet(), output_alphabet, oracle, config.table);
  std::size_t n = 1;
  std::map<std::size_t, std::set<Word>> witnesses_at;

  auto finish = [&] {
    stats.membership_queries = oracle.queries();
    stats.final_n = n;
    stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    while (stats.iterations < config.max_iterations) {
      ++stats.iterations;
      if (auto d = t.find_lcp_consistency_defect()) {
        t.add_suffixes(d->a + d->v, oracle);
        t.add_suffixes(d->a + d->v2, oracle);
        continue;
      }
      if (auto d = t.find_equiv_consistency_defect()) {
        t.add_suffixes(d->a + d->v, oracle);
        continue;
      }
      if (auto d = t.find_closure_defect()) {
        t.add_prefix(*d, oracle);
        continue;
      }
      MinGenResult mg = min_gen(t, n, config, &stats);
      n = mg.n;
      if (auto w = competing_min_gen(t, up, n, config, &stats)) {
        if (!witnesses_at[n].insert(w->u).second)
          throw std::logic_error("competing witness " + show(w->u) + " repeated at size " +
                                 std::to_string(n));
        ++stats.competing_witnesses;
        t.add_suffixes(w->u, oracle);
        continue;
      }
      ++stats.equivalence_queries;
      stats.candidate_sizes.push_back(mg.mm.size());
      auto cex = teacher.equivalence(product_restrict(mg.transducer, up));
      if (!cex) {
        LearnResult out;
        out.transducer = trim(mg.transducer);
        stats.learned_states = out.transducer.num_states();
        finish();
        out.stats = stats;
        return out;
      }
      t.add_suffixes(cex->word, oracle);
    }
  } catch (const LearnerError&) {
    throw;
  } catch (const std::runtime_error& e) {
    finish();
    throw LearnerError(e.what(), stats);
  }
  finish();
  throw LearnerError("iteration limit " + std::to_string(config.max_iterations) + " reached", stats);
}

}  // namespace graylearn
