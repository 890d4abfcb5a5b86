#include "fixtures.hpp"

#include <map>
#include <set>

#include "graylearn/teacher.hpp"

namespace fixtures {

Transducer tau_abc() {
  Transducer m(Alphabet("abc"), Alphabet("1"));
  for (int i = 0; i < 3; ++i) m.add_state();
  m.set_transition(0, 'a', 1, "");
  m.set_transition(0, 'b', 2, "1");
  m.set_transition(1, 'c', 1, "1");
  m.set_transition(2, 'c', 1, "");
  m.set_final(1, "");
  return m;
}

Dfa up_abc() {
  const StateId X = kNoState;
  // rows: states 0..2, columns a b c
  return Dfa(Alphabet("abc"), 3, 0, {1, 2, X, X, X, 1, X, X, 1}, {false, true, false});
}

Transducer fig1_left() {
  Transducer m = tau_abc();
  m.set_transition(2, 'a', 1, "");
  return m;
}

Transducer fig1_right() {
  Transducer m = tau_abc();
  m.set_transition(1, 'c', 1, "");
  return m;
}

ObservationTable fig1_table() {
  const WordSet p{"", "a", "b"};
  const WordSet s{"", "c"};
  const WordSet rows{"", "a", "b", "ac", "bc"};
  const std::map<Word, CellValue> cells{
      {"", CellValue::Bottom()},      {"c", CellValue::Bottom()},   {"a", CellValue::Output("")},
      {"ac", CellValue::Hash()},      {"b", CellValue::Bottom()},   {"bc", CellValue::Output("1")},
      {"acc", CellValue::Hash()},     {"bcc", CellValue::Hash()},
  };
  return ObservationTable::literal(Alphabet("abc"), Alphabet("1"), p, s, rows, cells);
}

Transducer identity(const Alphabet& sigma) {
  Transducer m(sigma, sigma);
  m.add_state();
  for (char a : sigma.symbols()) m.set_transition(0, a, 0, Word(1, a));
  m.set_final(0, "");
  return m;
}

namespace {

Dfa counter_dfa(const Alphabet& sigma, std::size_t states, const std::vector<StateId>& delta,
                const std::vector<bool>& accepting) {
  return Dfa(sigma, states, 0, delta, accepting);
}

}  // namespace

Dfa contains_abab() {
  return counter_dfa(Alphabet("ab"), 5, {1, 0, 1, 2, 3, 0, 1, 4, 4, 4}, {false, false, false, false, true});
}

Dfa avoid_abab() {
  return counter_dfa(Alphabet("ab"), 5, {1, 0, 1, 2, 3, 0, 1, 4, 4, 4}, {true, true, true, true, false});
}

std::vector<NamedLanguage> identity_languages() {
  std::vector<NamedLanguage> out;
  // #a ≡ 0 mod 3
  out.push_back({"a_mod3", counter_dfa(Alphabet("ab"), 3, {1, 0, 2, 1, 0, 2}, {true, false, false}), 3});
  // (a+bc)c*
  out.push_back({"abc", up_abc(), 3});
  // binary multiples of 5 (ε read as 0)
  {
    std::vector<StateId> d;
    for (StateId r = 0; r < 5; ++r) {
      d.push_back((2 * r) % 5);
      d.push_back((2 * r + 1) % 5);
    }
    out.push_back({"bin_mod5", counter_dfa(Alphabet("01"), 5, d, {true, false, false, false, false}), 5});
  }
  // no factor abab
  out.push_back({"no_abab", avoid_abab(), 4});
  // #a ≡ 0 mod 4 and #b even
  {
    std::vector<StateId> d;
    std::vector<bool> acc;
    for (StateId s = 0; s < 8; ++s) {
      const StateId na = s % 4, nb = s / 4;
      d.push_back((na + 1) % 4 + 4 * nb);
      d.push_back(na + 4 * ((nb + 1) % 2));
      acc.push_back(s == 0);
    }
    out.push_back({"a_mod4_b_even", counter_dfa(Alphabet("ab"), 8, d, acc), 8});
  }
  return out;
}

std::size_t trim_minimal_dfa_size(const Dfa& a) {
  const std::size_t n = a.num_states(), k = a.alphabet().size();
  // Moore partition refinement.
  std::vector<std::size_t> cls(n);
  for (std::size_t q = 0; q < n; ++q) cls[q] = a.is_accepting(q) ? 1 : 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<std::size_t> sig{cls[q]};
      for (std::size_t x = 0; x < k; ++x) sig.push_back(cls[a.next(q, x)]);
      next[q] = ids.try_emplace(sig, ids.size()).first->second;
    }
    const bool stable = ids.size() == std::set<std::size_t>(cls.begin(), cls.end()).size();
    cls = next;
    if (stable) break;
  }
  // Reachable classes that can reach acceptance.
  std::set<std::size_t> reach;
  std::vector<StateId> stack{a.initial_state()};
  std::set<StateId> seen{a.initial_state()};
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    for (std::size_t x = 0; x < k; ++x)
      if (seen.insert(a.next(q, x)).second) stack.push_back(a.next(q, x));
  }
  std::set<StateId> live;
  bool grew = true;
  for (StateId q : seen)
    if (a.is_accepting(q)) live.insert(q);
  while (grew) {
    grew = false;
    for (StateId q : seen) {
      if (live.count(q)) continue;
      for (std::size_t x = 0; x < k; ++x)
        if (live.count(a.next(q, x))) {
          live.insert(q);
          grew = true;
          break;
        }
    }
  }
  std::set<std::size_t> classes;
  for (StateId q : live) classes.insert(cls[q]);
  return classes.size();
}

namespace {

Word random_word(std::mt19937_64& rng, const Alphabet& gamma, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> sym(0, gamma.size() - 1);
  Word w;
  for (std::size_t i = len(rng); i > 0; --i) w += gamma.symbol(sym(rng));
  return w;
}

}  // namespace

Transducer random_transducer(std::mt19937_64& rng, std::size_t states, const Alphabet& sigma,
                             const Alphabet& gamma, std::size_t max_out, double edge_p) {
  Transducer m(sigma, gamma);
  for (std::size_t q = 0; q < states; ++q) m.add_state();
  std::bernoulli_distribution edge(edge_p), fin(0.5);
  std::uniform_int_distribution<StateId> target(0, static_cast<StateId>(states - 1));
  m.set_initial(0, random_word(rng, gamma, max_out));
  for (StateId q = 0; q < states; ++q) {
    for (char a : sigma.symbols())
      if (edge(rng)) m.set_transition(q, a, target(rng), random_word(rng, gamma, max_out));
    if (fin(rng)) m.set_final(q, random_word(rng, gamma, max_out));
  }
  return m;
}

Dfa random_dfa(std::mt19937_64& rng, std::size_t states, const Alphabet& sigma, double accept_p) {
  std::uniform_int_distribution<StateId> target(0, static_cast<StateId>(states - 1));
  std::bernoulli_distribution acc(accept_p);
  std::vector<StateId> delta;
  std::vector<bool> accepting;
  for (std::size_t q = 0; q < states; ++q) {
    for (std::size_t a = 0; a < sigma.size(); ++a) delta.push_back(target(rng));
    accepting.push_back(acc(rng));
  }
  return Dfa(sigma, states, 0, delta, accepting);
}

std::vector<Word> words_up_to(const Alphabet& sigma, std::size_t n) {
  std::vector<Word> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == n) continue;
    for (char a : sigma.symbols()) out.push_back(out[i] + a);
  }
  return out;
}

ObservationTable table_from(const Transducer& target, const Dfa& up, const WordSet& prefixes,
                            const WordSet& suffixes, const Alphabet& gamma) {
  SimulatedTeacher teacher(target, up);
  MembershipOracle oracle(teacher, up);
  ObservationTable t(up.alphabet(), gamma, oracle);
  for (const auto& p : prefixes) t.add_prefix(p, oracle);
  for (const auto& s : suffixes) t.add_suffixes(s, oracle);
  return t;
}

}  // namespace fixtures
