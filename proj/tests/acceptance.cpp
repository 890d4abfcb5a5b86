// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "graylearn/encoding.hpp"
#include "graylearn/equivalence.hpp"
#include "graylearn/learner.hpp"
#include "graylearn/merging_map.hpp"
#include "graylearn/teacher.hpp"
#include "oracles.hpp"

using namespace graylearn;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string why) {
    pass = false;
    if (failures.size() < 5) failures.push_back(std::move(why));
  }
};

LearnerConfig quiet_config() {
  LearnerConfig c;
  c.warn = [](const std::string&) {};
  return c;
}

std::string str(const Transducer& m) {
  std::ostringstream os;
  os << m.num_states() << " states";
  return os.str();
}

// Random target and Up with a nonempty restricted domain.
std::pair<Transducer, Dfa> random_case(std::mt19937_64& rng, std::size_t max_states,
                                       std::size_t max_up) {
  for (;;) {
    const std::size_t ks = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    const std::size_t gs = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    const Alphabet sigma(std::string("abc").substr(0, ks));
    const Alphabet gamma(std::string("01").substr(0, gs));
    const std::size_t states = std::uniform_int_distribution<std::size_t>(1, max_states)(rng);
    const std::size_t ups = std::uniform_int_distribution<std::size_t>(1, max_up)(rng);
    Transducer target = fixtures::random_transducer(rng, states, sigma, gamma, 1);
    Dfa up = fixtures::random_dfa(rng, ups, sigma);
    if (!product_restrict(target, up).is_empty()) return {std::move(target), std::move(up)};
  }
}

// Random P and S over the case's alphabet.
std::pair<WordSet, WordSet> random_ps(std::mt19937_64& rng, const Alphabet& sigma) {
  const auto words = fixtures::words_up_to(sigma, 3);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  WordSet p{""}, s{""};
  const std::size_t np = std::uniform_int_distribution<std::size_t>(0, 3)(rng);
  const std::size_t ns = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  for (std::size_t i = 0; i < np; ++i) p.insert(words[pick(rng)]);
  for (std::size_t i = 0; i < ns; ++i) s.insert(words[pick(rng)]);
  return {p, s};
}

// ---------------------------------------------------------------------------

Outcome criterion_eq_bound() {
  Outcome o;
  std::mt19937_64 rng(20261015);
  std::size_t cases = 0, lower_only = 0, total_eq = 0;
  while (cases < 30) {
    auto [target, up] = random_case(rng, 4, 5);
    const Alphabet& gamma = target.output_alphabet();
    SimulatedTeacher teacher(target, up);
    LearnResult r;
    try {
      r = learn(teacher, up, gamma, quiet_config());
    } catch (const std::exception& e) {
      o.fail("case " + std::to_string(cases) + ": learner error " + e.what());
      ++cases;
      continue;
    }
    ++cases;
    const std::size_t eq = teacher.equivalence_queries();
    total_eq += eq;
    if (equivalent_on(r.transducer, product_restrict(target, up), up)) {
      o.fail("case " + std::to_string(cases) + ": learned transducer differs on Up");
      continue;
    }
    const auto min = oracles::minimal_restricted_size(target, up, r.transducer, 2);
    if (!min.exact) ++lower_only;
    if (eq > min.size)
      o.fail("case " + std::to_string(cases) + ": " + std::to_string(eq) + " equivalence queries, minimal size " +
             (min.exact ? "" : "≥ ") + std::to_string(min.size));
  }
  o.detail = std::to_string(cases) + " targets, " + std::to_string(total_eq) + " equivalence queries in total" +
             (lower_only ? ", " + std::to_string(lower_only) + " with lower bound only" : "");
  return o;
}

Outcome criterion_identity() {
  Outcome o;
  std::ostringstream detail;
  for (const auto& lang : fixtures::identity_languages()) {
    const Transducer id = fixtures::identity(lang.dfa.alphabet());
    SimulatedTeacher gray_teacher(id, lang.dfa);
    const LearnResult gray = learn(gray_teacher, lang.dfa, lang.dfa.alphabet(), quiet_config());
    SimulatedTeacher black_teacher(id, lang.dfa);
    const LearnResult black =
        learn(black_teacher, Dfa::universal(lang.dfa.alphabet()), lang.dfa.alphabet(), quiet_config());
    if (gray.transducer.num_states() != 1 || gray_teacher.equivalence_queries() != 1)
      o.fail(lang.name + ": graybox " + str(gray.transducer) + ", " +
             std::to_string(gray_teacher.equivalence_queries()) + " equivalence queries");
    if (black.transducer.num_states() < lang.trim_states)
      o.fail(lang.name + ": blackbox " + str(black.transducer) + " < " + std::to_string(lang.trim_states));
    if (equivalent_on(black.transducer, id, lang.dfa) || equivalent_on(gray.transducer, id, lang.dfa))
      o.fail(lang.name + ": learned transducer differs on Up");
    detail << lang.name << " " << gray.transducer.num_states() << "/" << gray_teacher.equivalence_queries()
           << " vs " << black.transducer.num_states() << "≥" << lang.trim_states << "; ";
  }
  o.detail = detail.str();
  return o;
}

Outcome criterion_running_example() {
  Outcome o;
  const Transducer tau = fixtures::tau_abc();
  const Dfa up = fixtures::up_abc();
  SimulatedTeacher teacher(tau, up);
  const LearnResult r = learn(teacher, up, Alphabet("1"), quiet_config());
  std::size_t checked = 0;
  for (const Word& u : fixtures::words_up_to(up.alphabet(), 10)) {
    if (!up.accepts(u)) continue;
    ++checked;
    if (evaluate(r.transducer, u) != evaluate(tau, u)) o.fail("disagreement on " + show(u));
  }
  if (r.transducer.num_states() > 3) o.fail("learned " + str(r.transducer));
  if (teacher.equivalence_queries() > 3)
    o.fail(std::to_string(teacher.equivalence_queries()) + " equivalence queries");
  o.detail = std::to_string(checked) + " words of Up checked, " + str(r.transducer) + ", " +
             std::to_string(teacher.equivalence_queries()) + " equivalence queries";
  return o;
}

// A table from a random target plus a merging map on it, either read off the
// target or returned by the SAT search at a random size bound.
struct TableAndMap {
  ObservationTable table;
  MergingMap mm;
  Transducer target;
  Dfa up;
};

TableAndMap random_table_and_map(std::mt19937_64& rng, std::size_t index) {
  auto [target, up] = random_case(rng, 3, 3);
  auto [p, s] = random_ps(rng, up.alphabet());
  ObservationTable t = fixtures::table_from(target, up, p, s, target.output_alphabet());
  MergingMap mm;
  if (index % 2 == 0) {
    mm = induced_mm(t, product_restrict(target, up));
  } else {
    const MinGenResult least = min_gen(t, 1, quiet_config());
    const std::size_t n = least.n + std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    MmInstance inst = build_mm_instance(t, n);
    const SolveResult res = solve_cdcl(inst.cnf, {}, index);
    mm = decode_mm(t, inst.mm, res.model);
  }
  return {std::move(t), std::move(mm), std::move(target), std::move(up)};
}

Outcome criterion_mm_invariants() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::size_t shrunk = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    TableAndMap c = random_table_and_map(rng, i);
    const std::string tag = "instance " + std::to_string(i) + ": ";
    if (auto v = validate_mm(c.table, c.mm)) {
      o.fail(tag + "map violates rule " + std::to_string(v->rule) + " " + v->detail);
      continue;
    }
    const Transducer m = resulting_transducer(c.table, c.mm);
    if (!is_compatible(m, c.table)) {
      o.fail(tag + "resulting transducer incompatible");
      continue;
    }
    const MergingMap induced = induced_mm(c.table, m);
    if (auto v = validate_mm(c.table, induced)) {
      o.fail(tag + "induced map violates rule " + std::to_string(v->rule));
      continue;
    }
    const Transducer m2 = resulting_transducer(c.table, induced);
    if (!is_compatible(m2, c.table)) o.fail(tag + "induced-then-resulting incompatible");
    if (m2.num_states() > m.num_states()) o.fail(tag + "induced-then-resulting grew");
    if (m2.num_states() < m.num_states()) ++shrunk;
  }
  o.detail = "500 instances, " + std::to_string(shrunk) + " shrank under induced-then-resulting";
  return o;
}

Outcome criterion_muted_open() {
  Outcome o;
  std::mt19937_64 rng(11);
  std::size_t done = 0, attempts = 0;
  std::size_t kinds[3] = {0, 0, 0};
  while (done < 200 && attempts < 20000) {
    ++attempts;
    TableAndMap c = random_table_and_map(rng, attempts);
    if (validate_mm(c.table, c.mm)) continue;
    const auto muted = muted_pairs(c.table, c.mm);
    const auto open = open_ends(c.table, c.mm);
    const int kind = static_cast<int>(done % 3);
    if (kind < 2 && muted.empty()) continue;
    if (kind == 2 && open.empty()) continue;
    Transducer m = resulting_transducer(c.table, c.mm);
    const auto states = class_states(c.mm);
    auto state_of = [&](const Word& rep) { return states[*c.table.index_of(rep)]; };
    const Alphabet& gamma = c.target.output_alphabet();
    auto random_word = [&] {
      const auto ws = fixtures::words_up_to(gamma, 2);
      return ws[std::uniform_int_distribution<std::size_t>(0, ws.size() - 1)(rng)];
    };
    std::string what;
    if (kind < 2) {
      const ClassSymbol& cs = muted[std::uniform_int_distribution<std::size_t>(0, muted.size() - 1)(rng)];
      const StateId q = state_of(cs.word);
      if (kind == 0) {
        m.remove_transition(q, cs.symbol);
        what = "delete muted " + show(cs.word) + cs.symbol;
      } else {
        const StateId to = m.transition(q, cs.symbol)->target;
        m.set_transition(q, cs.symbol, to, random_word());
        what = "rewrite muted " + show(cs.word) + cs.symbol;
      }
    } else {
      const ClassSymbol& cs = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
      const StateId to = static_cast<StateId>(
          std::uniform_int_distribution<std::size_t>(0, m.num_states() - 1)(rng));
      m.set_transition(state_of(cs.word), cs.symbol, to, random_word());
      what = "add open " + show(cs.word) + cs.symbol;
    }
    ++kinds[kind];
    ++done;
    if (!is_compatible(m, c.table)) o.fail("mutation " + std::to_string(done) + " (" + what + ") incompatible");
  }
  if (done < 200) o.fail("only " + std::to_string(done) + " mutations generated");
  o.detail = std::to_string(done) + " mutations (" + std::to_string(kinds[0]) + " delete, " +
             std::to_string(kinds[1]) + " rewrite, " + std::to_string(kinds[2]) + " open)";
  return o;
}

Outcome criterion_encoding() {
  Outcome o;
  std::size_t tables = 0, sat_calls = 0, decoded = 0;
  oracles::for_each_small_table(5, [&](const ObservationTable& t) {
    ++tables;
    const auto brute = oracles::min_mm_size(t, 3);
    for (std::size_t n = 1; n <= 3; ++n) {
      MmInstance inst = build_mm_instance(t, n);
      const SolveResult r = solve_cdcl(inst.cnf);
      ++sat_calls;
      const bool expect = brute && *brute <= n;
      const bool got = r.status == SolveStatus::Sat;
      if (expect != got) {
        o.fail("n=" + std::to_string(n) + " expected " + (expect ? "Sat" : "Unsat") + " on\n" + t.dump());
        continue;
      }
      if (!got) continue;
      const MergingMap mm = decode_mm(t, inst.mm, r.model);
      ++decoded;
      if (auto v = validate_mm(t, mm)) {
        o.fail("n=" + std::to_string(n) + " decoded map violates rule " + std::to_string(v->rule));
        continue;
      }
      if (mm.size() > n) o.fail("decoded map larger than n");
      const Transducer m = resulting_transducer(t, mm);
      for (const auto& [w, cell] : t.cells()) {
        const auto out = evaluate(m, w);
        if ((cell.is_output() && out != cell.output) || (cell.is_bottom() && out))
          o.fail("resulting transducer disagrees with cell " + show(w));
      }
    }
  });
  o.detail = std::to_string(tables) + " tables, " + std::to_string(sat_calls) + " solver calls, " +
             std::to_string(decoded) + " decoded maps replayed";
  return o;
}

bool uses_muted_or_open(const ObservationTable& t, const MergingMap& mm,
                        const std::vector<OpenTransition>& added, const Word& u) {
  const Transducer m = open_completion(t, mm, added);
  const auto states = class_states(mm);
  const auto muted = muted_pairs(t, mm);
  const auto open = open_ends(t, mm);
  StateId q = m.initial_state();
  for (char a : u) {
    for (const auto& cs : muted)
      if (cs.symbol == a && states[*t.index_of(cs.word)] == q) return true;
    for (const auto& cs : open)
      if (cs.symbol == a && states[*t.index_of(cs.word)] == q) return true;
    const auto& e = m.transition(q, a);
    if (!e) return false;
    q = e->target;
  }
  return false;
}

Outcome criterion_witnesses() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::size_t eq_witnesses = 0, use_witnesses = 0, wit1 = 0, wit2 = 0;

  for (std::size_t i = 0; i < 300; ++i) {
    auto [m1, up] = random_case(rng, 3, 4);
    Transducer m2 = fixtures::random_transducer(rng, 1 + i % 3, m1.input_alphabet(), m1.output_alphabet(), 1);
    if (auto w = equivalent_on(m1, m2, up)) {
      ++eq_witnesses;
      const std::size_t bound = difference_witness_bound(m1.num_states(), m2.num_states(), up.num_states());
      if (w->word.size() > bound) o.fail("equivalence witness " + show(w->word) + " over its bound");
      if (!up.accepts(w->word) || evaluate(m1, w->word) == evaluate(m2, w->word))
        o.fail("equivalence witness " + show(w->word) + " does not separate");
    }
    for (StateId q = 0; q < m1.num_states(); ++q)
      for (std::size_t a = 0; a < m1.input_alphabet().size(); ++a) {
        const char sym = m1.input_alphabet().symbol(a);
        if (!m1.transition(q, sym)) continue;
        const auto w = witness_using_transition(m1, up, {q, a});
        if (!w) continue;
        ++use_witnesses;
        if (w->size() > transition_witness_bound(m1.num_states(), up.num_states()))
          o.fail("transition witness " + show(*w) + " over its bound");
        bool used = false;
        StateId s = m1.initial_state();
        for (char c : *w) {
          used |= s == q && c == sym;
          s = m1.transition(s, c)->target;
        }
        if (!used || !up.accepts(*w) || !evaluate(m1, *w))
          o.fail("transition witness " + show(*w) + " does not replay");
      }
  }

  const LearnerConfig config = quiet_config();
  for (std::size_t i = 0; i < 150; ++i) {
    auto [target, up] = random_case(rng, 3, 3);
    auto [p, s] = random_ps(rng, up.alphabet());
    const ObservationTable t = fixtures::table_from(target, up, p, s, target.output_alphabet());
    const std::size_t n = min_gen(t, 1, config).n;
    const std::size_t bound1 = wit1_length_bound(n, up);
    const std::size_t len1 = std::min(bound1, config.max_witness_len);
    for (Wit1Variant variant : {Wit1Variant::OutputMismatch, Wit1Variant::DomainMismatch}) {
      Wit1Instance inst = build_wit1(t, up, n, len1, variant);
      const SolveResult r = solve_cdcl(inst.cnf);
      if (r.status != SolveStatus::Sat) continue;
      ++wit1;
      const Word u = decode_input(inst.input, t.input_alphabet(), r.model);
      const MergingMap a = decode_mm(t, inst.left, r.model), b = decode_mm(t, inst.right, r.model);
      if (u.size() > len1) o.fail("two-map witness " + show(u) + " over its bound");
      if (validate_mm(t, a) || validate_mm(t, b) || a.size() > n || b.size() > n) {
        o.fail("two-map witness maps invalid");
        continue;
      }
      const auto l = evaluate(resulting_transducer(t, a), u), rr = evaluate(resulting_transducer(t, b), u);
      const bool ok = variant == Wit1Variant::OutputMismatch ? (l && rr && *l != *rr) : (l && !rr);
      if (!up.accepts(u) || !ok) o.fail("two-map witness " + show(u) + " does not replay");
    }
    Wit2Instance inst = build_wit2(t, up, n, wit2_length_bound(n, up));
    const SolveResult r = solve_cdcl(inst.cnf);
    if (r.status != SolveStatus::Sat) continue;
    ++wit2;
    const Wit2Decoded d = decode_wit2(t, inst, r.model);
    if (d.u.size() > wit2_length_bound(n, up)) o.fail("completion witness " + show(d.u) + " over its bound");
    if (validate_mm(t, d.mm) || d.mm.size() > n) {
      o.fail("completion witness map invalid");
      continue;
    }
    if (!up.accepts(d.u) || !evaluate(open_completion(t, d.mm, d.added), d.u) ||
        !uses_muted_or_open(t, d.mm, d.added, d.u))
      o.fail("completion witness " + show(d.u) + " does not replay");
  }
  o.detail = std::to_string(eq_witnesses) + " equivalence, " + std::to_string(use_witnesses) + " transition, " +
             std::to_string(wit1) + " two-map, " + std::to_string(wit2) + " completion witnesses";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"equivalence queries bounded by minimal restricted size", criterion_eq_bound},
      {"identity on regular languages in one query", criterion_identity},
      {"running example", criterion_running_example},
      {"merging map invariants", criterion_mm_invariants},
      {"muted and open mutations", criterion_muted_open},
      {"merging map encoding against brute force", criterion_encoding},
      {"witness length bounds and replay", criterion_witnesses},
  };
  // Optional argument: run a single criterion by number.
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all &= o.pass;
    std::printf("%s %zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str(), secs);
    for (const auto& f : o.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
