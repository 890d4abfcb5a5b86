#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "graylearn/cnf.hpp"

namespace graylearn {

enum class SolveStatus { Sat, Unsat, Unknown };

std::string_view to_string(SolveStatus s);

/// Limits for one solve call. Without limits the solver never answers Unknown.
struct SolveBudget {
  std::optional<std::uint64_t> max_conflicts;
  std::optional<std::chrono::milliseconds> max_time;
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnts_deleted = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  Model model;  ///< Meaningful only for Sat; always satisfies the instance.
  SolverStats stats;
};

/// Internal CDCL solver. `seed` = 0 gives the default deterministic run; other
/// values perturb the initial activities and phases reproducibly.
SolveResult solve_cdcl(const CnfInstance& cnf, const SolveBudget& budget = {},
                       std::uint64_t seed = 0);

/// Backend selection: "internal" or "external:<command>". The external command
/// receives the CNF file path appended as last argument and must print
/// SAT-competition output (`s ...` and `v ...` lines).
struct SolverConfig {
  std::string backend = "internal";
  std::uint64_t seed = 0;
  SolveBudget budget;

  /// Reads GRAYLEARN_SOLVER if set, else keeps "internal".
  static SolverConfig from_environment();
};

/// Dispatches to the configured backend. Sat models are re-checked against
/// every clause; a bad model raises std::runtime_error.
SolveResult solve(const CnfInstance& cnf, const SolverConfig& config);

}  // namespace graylearn
