#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/table.hpp"

namespace fixtures {

using namespace graylearn;

/// ac^n ↦ 1^n and bc^n ↦ 1^n, domain exactly (a+bc)c*.
Transducer tau_abc();
/// (a+bc)c*.
Dfa up_abc();
/// Left transducer of the running example (extra b·a edge, c|1 loop).
Transducer fig1_left();
/// Right transducer of the running example (c|ε loop, no b·a edge).
Transducer fig1_right();
/// The table drawn next to the two transducers, cell for cell.
ObservationTable fig1_table();

/// One-state identity over `sigma`.
Transducer identity(const Alphabet& sigma);

/// Regular languages for the identity experiments, with their trim minimal DFA sizes.
struct NamedLanguage {
  std::string name;
  Dfa dfa;
  std::size_t trim_states;
};
std::vector<NamedLanguage> identity_languages();

/// Σ*ababΣ* and its complement over {a,b}.
Dfa contains_abab();
Dfa avoid_abab();

/// Number of states of the minimal DFA, not counting a rejecting sink.
std::size_t trim_minimal_dfa_size(const Dfa& a);

Transducer random_transducer(std::mt19937_64& rng, std::size_t states, const Alphabet& sigma,
                             const Alphabet& gamma, std::size_t max_out, double edge_p = 0.8);
Dfa random_dfa(std::mt19937_64& rng, std::size_t states, const Alphabet& sigma, double accept_p = 0.5);

/// All words over sigma of length ≤ n, shortlex.
std::vector<Word> words_up_to(const Alphabet& sigma, std::size_t n);

/// Table filled from a target (restricted to up) for the given P and S.
ObservationTable table_from(const Transducer& target, const Dfa& up, const WordSet& prefixes,
                            const WordSet& suffixes, const Alphabet& gamma);

}  // namespace fixtures
