#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "graylearn/word.hpp"

namespace graylearn {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = std::numeric_limits<StateId>::max();

struct Edge {
  StateId target = kNoState;
  Word output;
  bool operator==(const Edge&) const = default;
};

/// Subsequential string transducer (Σ, Γ, Q, q0, w0, δ, δF).
///
/// A transducer with zero states is the empty transducer: it has no initial
/// state and implements the nowhere-defined function.
class Transducer {
 public:
  Transducer() = default;
  Transducer(Alphabet input, Alphabet output);

  const Alphabet& input_alphabet() const { return input_; }
  const Alphabet& output_alphabet() const { return output_; }

  std::size_t num_states() const { return finals_.size(); }
  bool is_empty() const { return finals_.empty(); }

  StateId add_state();

  /// Sets q0 and w0. Adding the first state makes it the initial state with w0 = ε.
  void set_initial(StateId q, Word production);
  StateId initial_state() const { return initial_; }
  const Word& initial_production() const { return w0_; }

  void set_transition(StateId from, char symbol, StateId to, Word output);
  void remove_transition(StateId from, char symbol);
  const std::optional<Edge>& transition(StateId from, std::size_t symbol_index) const {
    return edges_[from * input_.size() + symbol_index];
  }
  const std::optional<Edge>& transition(StateId from, char symbol) const;

  void set_final(StateId q, Word output);
  void clear_final(StateId q);
  const std::optional<Word>& final_output(StateId q) const { return finals_[q]; }
  bool is_final(StateId q) const { return finals_[q].has_value(); }

  std::size_t num_transitions() const;

  bool operator==(const Transducer&) const = default;

 private:
  void check_state(StateId q) const;

  Alphabet input_;
  Alphabet output_;
  StateId initial_ = kNoState;
  Word w0_;
  std::vector<std::optional<Edge>> edges_;
  std::vector<std::optional<Word>> finals_;
};

/// Deterministic finite automaton with a total transition map.
class Dfa {
 public:
  Dfa() = default;

  /// `transitions` is indexed by state * |Σ| + symbol index; kNoState entries
  /// are routed to a fresh rejecting sink so the result is total.
  Dfa(Alphabet alphabet, std::size_t num_states, StateId initial,
      std::vector<StateId> transitions, std::vector<bool> accepting);

  /// Σ*.
  static Dfa universal(Alphabet alphabet);
  /// ∅.
  static Dfa empty_language(Alphabet alphabet);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t num_states() const { return accepting_.size(); }
  StateId initial_state() const { return initial_; }
  StateId next(StateId q, std::size_t symbol_index) const {
    return delta_[q * alphabet_.size() + symbol_index];
  }
  bool is_accepting(StateId q) const { return accepting_[q]; }

  /// State reached after reading w from the initial state.
  StateId run(std::string_view w) const;
  bool accepts(std::string_view w) const { return accepting_[run(w)]; }

  bool operator==(const Dfa&) const = default;

 private:
  Alphabet alphabet_;
  StateId initial_ = 0;
  std::vector<StateId> delta_;
  std::vector<bool> accepting_;
};

inline bool dfa_accepts(const Dfa& a, std::string_view w) { return a.accepts(w); }

/// Outcome of running an input word through a transducer.
struct Run {
  StateId state = kNoState;  ///< kNoState when some transition is missing.
  Word output;               ///< w0 followed by the transition outputs read so far.
};

Run run(const Transducer& m, std::string_view u);

/// ⟦m⟧(u), or nullopt when u is outside the domain. Throws std::invalid_argument
/// for symbols outside the input alphabet.
std::optional<Word> evaluate(const Transducer& m, std::string_view u);

/// Removes states that are unreachable from q0 or cannot reach a final state.
/// Kept states retain their relative order.
Transducer trim(const Transducer& m);

/// Trimmed product m × a implementing ⟦m⟧ restricted to L(a).
Transducer product_restrict(const Transducer& m, const Dfa& a);

}  // namespace graylearn
