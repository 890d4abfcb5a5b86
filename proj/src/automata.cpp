#include "graylearn/automata.hpp"

#include <deque>
#include <map>
#include <stdexcept>
#include <utility>

namespace graylearn {

Transducer::Transducer(Alphabet input, Alphabet output)
    : input_(std::move(input)), output_(std::move(output)) {}

StateId Transducer::add_state() {
  const auto q = static_cast<StateId>(finals_.size());
  finals_.emplace_back();
  edges_.resize(edges_.size() + input_.size());
  if (initial_ == kNoState) initial_ = q;
  return q;
}

void Transducer::check_state(StateId q) const {
  if (q >= num_states())
    throw std::out_of_range("state " + std::to_string(q) + " out of range (" +
                            std::to_string(num_states()) + " states)");
}

void Transducer::set_initial(StateId q, Word production) {
  check_state(q);
  output_.check_word(production, "initial production");
  initial_ = q;
  w0_ = std::move(production);
}

void Transducer::set_transition(StateId from, char symbol, StateId to, Word output) {
  check_state(from);
  check_state(to);
  output_.check_word(output, "transition output");
  const auto a = input_.index_of(symbol);
  if (!a) throw std::invalid_argument(std::string("unknown input symbol '") + symbol + "'");
  edges_[from * input_.size() + *a] = Edge{to, std::move(output)};
}

void Transducer::remove_transition(StateId from, char symbol) {
  check_state(from);
  const auto a = input_.index_of(symbol);
  if (!a) throw std::invalid_argument(std::string("unknown input symbol '") + symbol + "'");
  edges_[from * input_.size() + *a].reset();
}

const std::optional<Edge>& Transducer::transition(StateId from, char symbol) const {
  const auto a = input_.index_of(symbol);
  if (!a) throw std::invalid_argument(std::string("unknown input symbol '") + symbol + "'");
  return transition(from, *a);
}

void Transducer::set_final(StateId q, Word output) {
  check_state(q);
  output_.check_word(output, "final output");
  finals_[q] = std::move(output);
}

void Transducer::clear_final(StateId q) {
  check_state(q);
  finals_[q].reset();
}

std::size_t Transducer::num_transitions() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.has_value();
  return n;
}

Dfa::Dfa(Alphabet alphabet, std::size_t num_states, StateId initial,
         std::vector<StateId> transitions, std::vector<bool> accepting)
    : alphabet_(std::move(alphabet)),
      initial_(initial),
      delta_(std::move(transitions)),
      accepting_(std::move(accepting)) {
  const std::size_t k = alphabet_.size();
  if (num_states == 0) throw std::invalid_argument("DFA needs at least one state");
  if (initial_ >= num_states) throw std::invalid_argument("DFA initial state out of range");
  if (delta_.size() != num_states * k)
    throw std::invalid_argument("DFA transition table has wrong size");
  if (accepting_.size() != num_states)
    throw std::invalid_argument("DFA accepting vector has wrong size");
  bool partial = false;
  for (StateId t : delta_) {
    if (t == kNoState) partial = true;
    else if (t >= num_states) throw std::invalid_argument("DFA transition target out of range");
  }
  if (partial) {
    const auto sink = static_cast<StateId>(num_states);
    for (auto& t : delta_)
      if (t == kNoState) t = sink;
    for (std::size_t a = 0; a < k; ++a) delta_.push_back(sink);
    accepting_.push_back(false);
  }
}

Dfa Dfa::universal(Alphabet alphabet) {
  const std::size_t k = alphabet.size();
  return Dfa(std::move(alphabet), 1, 0, std::vector<StateId>(k, 0), {true});
}

Dfa Dfa::empty_language(Alphabet alphabet) {
  const std::size_t k = alphabet.size();
  return Dfa(std::move(alphabet), 1, 0, std::vector<StateId>(k, 0), {false});
}

StateId Dfa::run(std::string_view w) const {
  StateId q = initial_;
  for (char c : w) {
    const auto a = alphabet_.index_of(c);
    if (!a) throw std::invalid_argument(std::string("unknown DFA symbol '") + c + "'");
    q = next(q, *a);
  }
  return q;
}

Run run(const Transducer& m, std::string_view u) {
  const Alphabet& sigma = m.input_alphabet();
  sigma.check_word(u, "input word");
  if (m.is_empty()) return {};
  Run r{m.initial_state(), m.initial_production()};
  for (char c : u) {
    const auto& e = m.transition(r.state, *sigma.index_of(c));
    if (!e) return {kNoState, std::move(r.output)};
    r.state = e->target;
    r.output += e->output;
  }
  return r;
}

std::optional<Word> evaluate(const Transducer& m, std::string_view u) {
  Run r = run(m, u);
  if (r.state == kNoState || !m.is_final(r.state)) return std::nullopt;
  return r.output + *m.final_output(r.state);
}

Transducer trim(const Transducer& m) {
  const std::size_t n = m.num_states();
  const std::size_t k = m.input_alphabet().size();
  Transducer out(m.input_alphabet(), m.output_alphabet());
  if (n == 0) return out;

  std::vector<bool> reach(n, false);
  std::deque<StateId> queue{m.initial_state()};
  reach[m.initial_state()] = true;
  while (!queue.empty()) {
    const StateId q = queue.front();
    queue.pop_front();
    for (std::size_t a = 0; a < k; ++a)
      if (const auto& e = m.transition(q, a); e && !reach[e->target]) {
        reach[e->target] = true;
        queue.push_back(e->target);
      }
  }

  std::vector<std::vector<StateId>> pred(n);
  for (StateId q = 0; q < n; ++q)
    for (std::size_t a = 0; a < k; ++a)
      if (const auto& e = m.transition(q, a)) pred[e->target].push_back(q);
  std::vector<bool> coreach(n, false);
  for (StateId q = 0; q < n; ++q)
    if (m.is_final(q)) {
      coreach[q] = true;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    const StateId q = queue.front();
    queue.pop_front();
    for (StateId p : pred[q])
      if (!coreach[p]) {
        coreach[p] = true;
        queue.push_back(p);
      }
  }

  if (!reach[m.initial_state()] || !coreach[m.initial_state()]) return out;
  std::vector<StateId> rename(n, kNoState);
  for (StateId q = 0; q < n; ++q)
    if (reach[q] && coreach[q]) rename[q] = out.add_state();
  out.set_initial(rename[m.initial_state()], m.initial_production());
  for (StateId q = 0; q < n; ++q) {
    if (rename[q] == kNoState) continue;
    for (std::size_t a = 0; a < k; ++a)
      if (const auto& e = m.transition(q, a); e && rename[e->target] != kNoState)
        out.set_transition(rename[q], m.input_alphabet().symbol(a), rename[e->target],
                           e->output);
    if (m.is_final(q)) out.set_final(rename[q], *m.final_output(q));
  }
  return out;
}

Transducer product_restrict(const Transducer& m, const Dfa& a) {
  if (!(m.input_alphabet() == a.alphabet()))
    throw std::invalid_argument("product_restrict: input alphabets differ");
  const Alphabet& sigma = m.input_alphabet();
  Transducer prod(sigma, m.output_alphabet());
  if (m.is_empty()) return prod;

  std::map<std::pair<StateId, StateId>, StateId> index;
  std::vector<std::pair<StateId, StateId>> pairs;
  auto intern = [&](StateId q, StateId p) {
    auto [it, inserted] = index.try_emplace({q, p}, kNoState);
    if (inserted) {
      it->second = prod.add_state();
      pairs.emplace_back(q, p);
    }
    return it->second;
  };
  intern(m.initial_state(), a.initial_state());
  prod.set_initial(0, m.initial_production());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [q, p] = pairs[i];
    for (std::size_t s = 0; s < sigma.size(); ++s) {
      const auto& e = m.transition(q, s);
      if (!e) continue;
      const StateId target = intern(e->target, a.next(p, s));
      prod.set_transition(static_cast<StateId>(i), sigma.symbol(s), target, e->output);
    }
    if (m.is_final(q) && a.is_accepting(p))
      prod.set_final(static_cast<StateId>(i), *m.final_output(q));
  }
  return trim(prod);
}

}  // namespace graylearn
