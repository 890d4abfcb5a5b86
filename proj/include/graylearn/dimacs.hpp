#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "graylearn/cnf.hpp"
#include "graylearn/solver.hpp"

namespace graylearn {

class DimacsError : public std::runtime_error {
 public:
  DimacsError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// `p cnf V C` header followed by one 0-terminated clause per line. A trivially
/// unsatisfiable instance is written with an explicit empty clause ("0").
std::string to_dimacs(const CnfInstance& cnf);
CnfInstance from_dimacs(std::string_view text);

/// One line per annotated variable: "<var> <annotation>".
std::string annotations_text(const CnfInstance& cnf);

/// Parses SAT-competition solver output. Returns Sat with the `v` assignment
/// (unmentioned variables false), Unsat, or Unknown.
SolveResult from_dimacs_model(std::string_view text, std::size_t num_vars);
inline Model parse_model(std::string_view text, std::size_t num_vars) {
  return from_dimacs_model(text, num_vars).model;
}

/// Writes `<stem>.cnf` and `<stem>.vars` into `dir`.
void write_dimacs_files(const CnfInstance& cnf, const std::filesystem::path& dir,
                        const std::string& stem);

}  // namespace graylearn
