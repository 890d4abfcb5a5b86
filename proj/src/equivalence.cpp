#include "graylearn/equivalence.hpp"

#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace graylearn {

std::string_view to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::DomainLeftOnly: return "domain-left-only";
    case WitnessKind::DomainRightOnly: return "domain-right-only";
    case WitnessKind::OutputMismatch: return "output-mismatch";
    case WitnessKind::TransitionUse: return "transition-use";
  }
  return "?";
}

std::size_t difference_witness_bound(std::size_t m1, std::size_t m2, std::size_t up) {
  const std::size_t p = m1 * m2 * up;
  return 2 * p * p;
}

std::size_t transition_witness_bound(std::size_t m, std::size_t up) { return 2 * up * m; }

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// Synchronized product of two transducers (with an explicit dead state each)
// and a DFA. Only the control structure; outputs are read from the transducers.
class TripleSpace {
 public:
  TripleSpace(const Transducer& m1, const Transducer& m2, const Dfa& up)
      : m1_(m1), m2_(m2), up_(up), n1_(m1.num_states()), n2_(m2.num_states()),
        np_(up.num_states()), k_(up.alphabet().size()) {}

  std::size_t size() const { return (n1_ + 1) * (n2_ + 1) * np_; }
  std::size_t index(StateId s1, StateId s2, StateId p) const {
    return (static_cast<std::size_t>(s1) * (n2_ + 1) + s2) * np_ + p;
  }
  StateId dead1() const { return static_cast<StateId>(n1_); }
  StateId dead2() const { return static_cast<StateId>(n2_); }

  StateId start1() const { return m1_.is_empty() ? dead1() : m1_.initial_state(); }
  StateId start2() const { return m2_.is_empty() ? dead2() : m2_.initial_state(); }

  const std::optional<Edge>* step1(StateId s, std::size_t a) const {
    if (s == dead1()) return nullptr;
    const auto& e = m1_.transition(s, a);
    return e ? &e : nullptr;
  }
  const std::optional<Edge>* step2(StateId s, std::size_t a) const {
    if (s == dead2()) return nullptr;
    const auto& e = m2_.transition(s, a);
    return e ? &e : nullptr;
  }
  bool final1(StateId s) const { return s != dead1() && m1_.is_final(s); }
  bool final2(StateId s) const { return s != dead2() && m2_.is_final(s); }

  struct Triple {
    StateId s1, s2, p;
  };
  Triple decode(std::size_t i) const {
    const auto p = static_cast<StateId>(i % np_);
    i /= np_;
    return {static_cast<StateId>(i / (n2_ + 1)), static_cast<StateId>(i % (n2_ + 1)), p};
  }
  Triple successor(const Triple& t, std::size_t a) const {
    const auto* e1 = step1(t.s1, a);
    const auto* e2 = step2(t.s2, a);
    return {e1 ? (*e1)->target : dead1(), e2 ? (*e2)->target : dead2(), up_.next(t.p, a)};
  }

  // Reverse BFS distances to triples satisfying `goal`.
  template <class Goal>
  std::vector<std::size_t> distance_to(Goal goal) const {
    std::vector<std::vector<std::size_t>> pred(size());
    for (std::size_t i = 0; i < size(); ++i) {
      const Triple t = decode(i);
      for (std::size_t a = 0; a < k_; ++a) {
        const Triple s = successor(t, a);
        pred[index(s.s1, s.s2, s.p)].push_back(i);
      }
    }
    std::vector<std::size_t> dist(size(), kInf);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < size(); ++i)
      if (goal(decode(i))) {
        dist[i] = 0;
        queue.push_back(i);
      }
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      for (std::size_t j : pred[i])
        if (dist[j] == kInf) {
          dist[j] = dist[i] + 1;
          queue.push_back(j);
        }
    }
    return dist;
  }

  const Transducer& m1_;
  const Transducer& m2_;
  const Dfa& up_;
  std::size_t n1_, n2_, np_, k_;
};

struct Delay {
  Word left, right;
  bool incomparable = false;
  bool operator==(const Delay&) const = default;

  void append(const Word& a, const Word& b) {
    if (incomparable) return;
    left += a;
    right += b;
    std::size_t i = 0;
    while (i < left.size() && i < right.size() && left[i] == right[i]) ++i;
    left.erase(0, i);
    right.erase(0, i);
    if (!left.empty() && !right.empty()) {
      incomparable = true;
      left.clear();
      right.clear();
    }
  }
};

std::string config_key(std::size_t triple, const Delay& d) {
  std::string key = std::to_string(triple);
  key += d.incomparable ? '!' : ':';
  key += d.left;
  key += '\x1f';
  key += d.right;
  return key;
}

}  // namespace

std::optional<Witness> equivalent_on(const Transducer& m1, const Transducer& m2, const Dfa& up) {
  if (!(m1.input_alphabet() == up.alphabet()) || !(m2.input_alphabet() == up.alphabet()))
    throw std::invalid_argument("equivalent_on: input alphabets differ");
  const TripleSpace space(m1, m2, up);
  const Alphabet& sigma = up.alphabet();

  const auto joint = space.distance_to([&](const TripleSpace::Triple& t) {
    return space.final1(t.s1) && space.final2(t.s2) && up.is_accepting(t.p);
  });
  const auto useful = space.distance_to([&](const TripleSpace::Triple& t) {
    return up.is_accepting(t.p) && (space.final1(t.s1) || space.final2(t.s2));
  });

  struct Node {
    TripleSpace::Triple t;
    Delay delay;
    Word word;
  };
  const TripleSpace::Triple start{space.start1(), space.start2(), up.initial_state()};
  const std::size_t start_index = space.index(start.s1, start.s2, start.p);
  if (useful[start_index] == kInf) return std::nullopt;

  Delay d0;
  if (joint[start_index] != kInf)
    d0.append(m1.is_empty() ? Word{} : m1.initial_production(),
              m2.is_empty() ? Word{} : m2.initial_production());

  std::deque<Node> queue;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::size_t, Delay> first_delay;
  std::size_t depth_limit = kInf;

  auto note_delay = [&](std::size_t triple, const Delay& d, std::size_t length) {
    if (joint[triple] == kInf) return;
    auto [it, inserted] = first_delay.try_emplace(triple, d);
    // Two different delays on a jointly co-accessible triple (or an already
    // incomparable one) guarantee a difference within `joint` more steps.
    if ((!inserted && !(it->second == d)) || d.incomparable)
      depth_limit = std::min(depth_limit, length + joint[triple]);
  };

  seen.insert(config_key(start_index, d0));
  note_delay(start_index, d0, 0);
  queue.push_back({start, d0, {}});

  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    const auto& t = node.t;
    if (up.is_accepting(t.p)) {
      const bool f1 = space.final1(t.s1);
      const bool f2 = space.final2(t.s2);
      if (f1 && !f2) return Witness{node.word, WitnessKind::DomainLeftOnly};
      if (!f1 && f2) return Witness{node.word, WitnessKind::DomainRightOnly};
      if (f1 && f2) {
        Delay end = node.delay;
        end.append(*m1.final_output(t.s1), *m2.final_output(t.s2));
        if (end.incomparable || !end.left.empty() || !end.right.empty())
          return Witness{node.word, WitnessKind::OutputMismatch};
      }
    }
    if (node.word.size() + 1 > depth_limit) continue;
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      const TripleSpace::Triple s = space.successor(t, a);
      const std::size_t si = space.index(s.s1, s.s2, s.p);
      if (useful[si] == kInf) continue;
      Delay d;
      if (joint[si] != kInf) {
        d = node.delay;
        const auto* e1 = space.step1(t.s1, a);
        const auto* e2 = space.step2(t.s2, a);
        d.append(e1 ? (*e1)->output : Word{}, e2 ? (*e2)->output : Word{});
      }
      if (!seen.insert(config_key(si, d)).second) continue;
      note_delay(si, d, node.word.size() + 1);
      queue.push_back({s, std::move(d), node.word + sigma.symbol(a)});
    }
  }
  return std::nullopt;
}

std::optional<Word> witness_using_transition(const Transducer& m, const Dfa& up, TransitionRef t) {
  if (!(m.input_alphabet() == up.alphabet()))
    throw std::invalid_argument("witness_using_transition: input alphabets differ");
  if (t.state >= m.num_states() || t.symbol >= up.alphabet().size() ||
      !m.transition(t.state, t.symbol))
    throw std::invalid_argument("witness_using_transition: no such transition");
  const Alphabet& sigma = up.alphabet();
  const std::size_t np = up.num_states();
  const std::size_t size = m.num_states() * np;
  auto index = [&](StateId q, StateId p) { return static_cast<std::size_t>(q) * np + p; };

  // Shortlex-least access words in m × up.
  std::vector<std::optional<Word>> access(size);
  std::deque<std::pair<StateId, StateId>> queue;
  access[index(m.initial_state(), up.initial_state())] = Word{};
  queue.emplace_back(m.initial_state(), up.initial_state());
  while (!queue.empty()) {
    const auto [q, p] = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      const auto& e = m.transition(q, a);
      if (!e) continue;
      const StateId p2 = up.next(p, a);
      auto& slot = access[index(e->target, p2)];
      if (slot) continue;
      slot = *access[index(q, p)] + sigma.symbol(a);
      queue.emplace_back(e->target, p2);
    }
  }

  // Shortest completion from a product state to an accepting final pair.
  auto completion = [&](StateId q0, StateId p0) -> std::optional<Word> {
    std::vector<std::optional<Word>> seen(size);
    std::deque<std::pair<StateId, StateId>> bfs;
    seen[index(q0, p0)] = Word{};
    bfs.emplace_back(q0, p0);
    while (!bfs.empty()) {
      const auto [q, p] = bfs.front();
      bfs.pop_front();
      if (m.is_final(q) && up.is_accepting(p)) return seen[index(q, p)];
      for (std::size_t a = 0; a < sigma.size(); ++a) {
        const auto& e = m.transition(q, a);
        if (!e) continue;
        const StateId p2 = up.next(p, a);
        auto& slot = seen[index(e->target, p2)];
        if (slot) continue;
        slot = *seen[index(q, p)] + sigma.symbol(a);
        bfs.emplace_back(e->target, p2);
      }
    }
    return std::nullopt;
  };

  const Edge& edge = *m.transition(t.state, t.symbol);
  std::optional<Word> best;
  for (StateId p = 0; p < np; ++p) {
    const auto& prefix = access[index(t.state, p)];
    if (!prefix) continue;
    const auto suffix = completion(edge.target, up.next(p, t.symbol));
    if (!suffix) continue;
    Word candidate = *prefix + sigma.symbol(t.symbol) + *suffix;
    if (!best || ShortLex{}(candidate, *best)) best = std::move(candidate);
  }
  return best;
}

}  // namespace graylearn
