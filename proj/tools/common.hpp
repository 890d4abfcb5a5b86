#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "graylearn/learner.hpp"

namespace graylearn::cli {

/// Flags shared by `learn` and `bench`. A JSON config file may supply the same
/// keys ("max-witness-len", "solver", ...); flags given on the command line win.
struct RunFlags {
  std::optional<std::size_t> max_witness_len;
  std::optional<std::size_t> max_candidates;
  std::optional<std::string> solver;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iterations;
  std::optional<std::string> emit_dimacs;
  std::optional<std::string> stats;
  std::optional<std::string> config;
};

void add_run_flags(CLI::App& app, RunFlags& flags);

/// Merges the config file into `flags` (flags win). Throws std::runtime_error
/// on unreadable or malformed config files.
RunFlags resolve(const RunFlags& flags);

LearnerConfig learner_config(const RunFlags& resolved);

nlohmann::json stats_json(const LearnerStats& s);
std::string stats_text(const LearnerStats& s);

int run_bench(const std::filesystem::path& suite, const RunFlags& resolved, std::size_t jobs,
              const std::optional<std::string>& report);

}  // namespace graylearn::cli
