#include "graylearn/solver.hpp"

#include <array>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <unistd.h>

#include "graylearn/dimacs.hpp"

namespace graylearn {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "sat";
    case SolveStatus::Unsat: return "unsat";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

SolverConfig SolverConfig::from_environment() {
  SolverConfig config;
  if (const char* env = std::getenv("GRAYLEARN_SOLVER"); env && *env) config.backend = env;
  return config;
}

namespace {

std::string run_command(const std::string& command) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run external solver: " + command);
  std::string output;
  std::array<char, 4096> buf{};
  while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) output.append(buf.data(), n);
  pclose(pipe);
  return output;
}

SolveResult solve_external(const CnfInstance& cnf, const std::string& command) {
  static std::atomic<unsigned> counter{0};
  const auto path = std::filesystem::temp_directory_path() /
                    ("graylearn-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++) + ".cnf");
  {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << to_dimacs(cnf);
  }
  std::string output;
  try {
    output = run_command(command + " '" + path.string() + "'");
  } catch (...) {
    std::filesystem::remove(path);
    throw;
  }
  std::filesystem::remove(path);
  SolveResult result = from_dimacs_model(output, cnf.num_vars());
  if (result.status == SolveStatus::Sat) {
    Model m(cnf.num_vars());
    for (Var v = 1; static_cast<std::size_t>(v) <= cnf.num_vars(); ++v)
      if (static_cast<std::size_t>(v) <= result.model.num_vars()) m.set(v, result.model.value(v));
    result.model = std::move(m);
  }
  return result;
}

}  // namespace

SolveResult solve(const CnfInstance& cnf, const SolverConfig& config) {
  SolveResult result;
  if (config.backend == "internal") {
    result = solve_cdcl(cnf, config.budget, config.seed);
  } else if (config.backend.rfind("external:", 0) == 0) {
    result = solve_external(cnf, config.backend.substr(9));
  } else {
    throw std::invalid_argument("unknown solver backend '" + config.backend + "'");
  }
  if (result.status == SolveStatus::Sat && !satisfies(cnf, result.model))
    throw std::runtime_error("solver '" + config.backend + "' returned a model falsifying clause " +
                             std::to_string(first_falsified_clause(cnf, result.model)));
  return result;
}

}  // namespace graylearn
