#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/encoding.hpp"
#include "graylearn/merging_map.hpp"
#include "graylearn/solver.hpp"
#include "graylearn/table.hpp"
#include "graylearn/teacher.hpp"

namespace graylearn {

struct LearnerConfig {
  SolverConfig solver;
  EncodingOptions encoding;
  TableOptions table;
  /// Cap on the input length searched by the two-map witness formula.
  std::size_t max_witness_len = 24;
  /// Distinct minimal candidates compared by exact equivalence before the
  /// two-map formula is used instead.
  std::size_t max_candidates = 16;
  std::size_t max_iterations = 10000;
  /// When set, every solved instance is written there as DIMACS plus annotations.
  std::optional<std::filesystem::path> emit_dimacs;
  /// Receives warnings (for instance when the witness cap binds).
  std::function<void(const std::string&)> warn;
};

struct LearnerStats {
  std::size_t membership_queries = 0;
  std::size_t equivalence_queries = 0;
  std::size_t mm_sat_calls = 0;
  std::size_t candidate_sat_calls = 0;
  std::size_t wit1_sat_calls = 0;
  std::size_t wit2_sat_calls = 0;
  std::size_t competing_witnesses = 0;
  std::size_t iterations = 0;
  std::size_t final_n = 0;
  std::size_t learned_states = 0;
  std::size_t capped_searches = 0;
  double wall_ms = 0;
  /// MM size of each candidate sent to an equivalence query.
  std::vector<std::size_t> candidate_sizes;

  std::size_t solver_sat_calls() const {
    return mm_sat_calls + candidate_sat_calls + wit1_sat_calls + wit2_sat_calls;
  }
};

/// Raised when the learner stops early (iteration limit, solver budget).
class LearnerError : public std::runtime_error {
 public:
  LearnerError(const std::string& message, LearnerStats stats)
      : std::runtime_error(message), stats_(std::move(stats)) {}
  const LearnerStats& stats() const { return stats_; }

 private:
  LearnerStats stats_;
};

struct MinGenResult {
  Transducer transducer;
  MergingMap mm;
  std::size_t n = 0;
};

/// Smallest n ≥ n_start whose merging-map formula is satisfiable, with the
/// resulting transducer of the decoded map.
MinGenResult min_gen(const ObservationTable& t, std::size_t n_start, const LearnerConfig& config,
                     LearnerStats* stats = nullptr);

enum class CompetingKind { OutputMismatch, DomainMismatch, MutedOrOpen };

/// Decoded witness together with the maps that justify it.
struct CompetingWitness {
  Word u;
  CompetingKind kind = CompetingKind::OutputMismatch;
  MergingMap first;
  std::optional<MergingMap> second;      ///< The other map, for the two-map kinds.
  std::vector<OpenTransition> added;     ///< Open transitions, for MutedOrOpen.
};

/// nullopt when the witness replays: the maps are valid, u ∈ L(up), and u
/// separates the two resulting transducers (or runs through a muted or open
/// transition of the open completion). Otherwise a description of the failure.
std::optional<std::string> replay_failure(const ObservationTable& t, const Dfa& up,
                                          const CompetingWitness& w);

/// Some u ∈ L(up) on which two minimal candidates of size n can disagree, or
/// nullopt when none exists within the searched lengths.
///
/// Two-map witnesses are first looked for by enumerating the distinct
/// resulting transducers of size-n maps (at most config.max_candidates) and
/// comparing them with equivalent_on; if the enumeration does not finish, the
/// two-map formula is solved at the capped length. The muted/open formula
/// follows.
std::optional<CompetingWitness> competing_min_gen(const ObservationTable& t, const Dfa& up,
                                                  std::size_t n, const LearnerConfig& config,
                                                  LearnerStats* stats = nullptr);

struct LearnResult {
  Transducer transducer;  ///< Trimmed; its restriction to L(up) equals τ.
  LearnerStats stats;
};

LearnResult learn(Teacher& teacher, const Dfa& up, const Alphabet& output_alphabet,
                  const LearnerConfig& config = {});

}  // namespace graylearn
