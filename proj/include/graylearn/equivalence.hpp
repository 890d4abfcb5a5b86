#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "graylearn/automata.hpp"

namespace graylearn {

enum class WitnessKind { DomainLeftOnly, DomainRightOnly, OutputMismatch, TransitionUse };

std::string_view to_string(WitnessKind kind);

struct Witness {
  Word word;
  WitnessKind kind = WitnessKind::OutputMismatch;
  bool operator==(const Witness&) const = default;
};

/// Length bound 2·(|m1|·|m2|·|up|)² under which a difference witness always exists.
std::size_t difference_witness_bound(std::size_t m1, std::size_t m2, std::size_t up);

/// Length bound 2·|up|·|m| for a word of L(up) ∩ dom(m) that uses a given transition.
std::size_t transition_witness_bound(std::size_t m, std::size_t up);

/// nullopt when ⟦m1⟧ and ⟦m2⟧ agree on L(up) (same domain, same outputs);
/// otherwise the shortlex-least word of L(up) on which they differ.
///
/// Breadth-first search over (q1, q2, p, delay) where delay is the pair of
/// unmatched output suffixes. Delays are only tracked for triples from which
/// both transducers can still accept together; elsewhere only domains matter.
std::optional<Witness> equivalent_on(const Transducer& m1, const Transducer& m2, const Dfa& up);

/// Identifies transition (state, symbol) of a transducer.
struct TransitionRef {
  StateId state = kNoState;
  std::size_t symbol = 0;
  bool operator==(const TransitionRef&) const = default;
};

/// Some shortest u ∈ L(up) ∩ dom(⟦m⟧) whose run traverses `t`, or nullopt.
std::optional<Word> witness_using_transition(const Transducer& m, const Dfa& up, TransitionRef t);

}  // namespace graylearn
