#include "graylearn/dimacs.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace graylearn {

DimacsError::DimacsError(std::size_t line, const std::string& message)
    : std::runtime_error("dimacs line " + std::to_string(line) + ": " + message), line_(line) {}

std::string to_dimacs(const CnfInstance& cnf) {
  std::string out;
  const std::size_t clauses = cnf.num_clauses() + (cnf.trivially_unsat() ? 1 : 0);
  out += "p cnf " + std::to_string(cnf.num_vars()) + ' ' + std::to_string(clauses) + '\n';
  for (std::size_t i = 0; i < cnf.num_clauses(); ++i) {
    for (Lit l : cnf.clause(i)) {
      out += std::to_string(l);
      out += ' ';
    }
    out += "0\n";
  }
  if (cnf.trivially_unsat()) out += "0\n";
  return out;
}

namespace {

long long parse_int(std::string_view tok, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw DimacsError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

template <class Fn>
void for_each_line(std::string_view text, Fn fn) {
  std::size_t number = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    fn(text.substr(pos, end - pos), number);
    pos = end + 1;
  }
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

CnfInstance from_dimacs(std::string_view text) {
  CnfInstance cnf;
  bool header = false;
  long long declared_clauses = 0;
  std::size_t seen_clauses = 0;
  std::vector<Lit> current;
  std::size_t last_line = 0;
  for_each_line(text, [&](std::string_view line, std::size_t number) {
    last_line = number;
    const auto toks = split(line);
    if (toks.empty() || toks[0][0] == 'c' || toks[0][0] == '%') return;
    if (toks[0] == "p") {
      if (header) throw DimacsError(number, "duplicate header");
      if (toks.size() != 4 || toks[1] != "cnf") throw DimacsError(number, "malformed header");
      const long long vars = parse_int(toks[2], number);
      declared_clauses = parse_int(toks[3], number);
      if (vars < 0 || declared_clauses < 0) throw DimacsError(number, "negative counts");
      cnf.new_vars(static_cast<std::size_t>(vars));
      header = true;
      return;
    }
    if (!header) throw DimacsError(number, "clause before 'p cnf' header");
    for (auto tok : toks) {
      const long long v = parse_int(tok, number);
      if (v == 0) {
        cnf.add_clause(current);
        current.clear();
        ++seen_clauses;
        continue;
      }
      if (static_cast<std::size_t>(std::llabs(v)) > cnf.num_vars())
        throw DimacsError(number, "literal " + std::to_string(v) + " exceeds declared variables");
      current.push_back(static_cast<Lit>(v));
    }
  });
  if (!header) throw DimacsError(last_line, "missing 'p cnf' header");
  if (!current.empty()) throw DimacsError(last_line, "last clause not terminated by 0");
  if (static_cast<long long>(seen_clauses) != declared_clauses)
    throw DimacsError(last_line, "header declares " + std::to_string(declared_clauses) +
                                     " clauses, found " + std::to_string(seen_clauses));
  return cnf;
}

std::string annotations_text(const CnfInstance& cnf) {
  std::ostringstream out;
  for (Var v = 1; static_cast<std::size_t>(v) <= cnf.num_vars(); ++v)
    if (!cnf.annotation(v).empty()) out << v << ' ' << cnf.annotation(v) << '\n';
  return out.str();
}

SolveResult from_dimacs_model(std::string_view text, std::size_t num_vars) {
  SolveResult result;
  std::vector<std::pair<Var, bool>> assigned;
  std::size_t max_var = num_vars;
  bool have_status = false;
  for_each_line(text, [&](std::string_view line, std::size_t number) {
    const auto toks = split(line);
    if (toks.empty()) return;
    if (toks[0] == "s") {
      if (toks.size() < 2) throw DimacsError(number, "empty status line");
      const std::string status(line.substr(line.find('s') + 1));
      if (status.find("UNSATISFIABLE") != std::string::npos) result.status = SolveStatus::Unsat;
      else if (status.find("SATISFIABLE") != std::string::npos) result.status = SolveStatus::Sat;
      else result.status = SolveStatus::Unknown;
      have_status = true;
    } else if (toks[0] == "v") {
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const long long v = parse_int(toks[i], number);
        if (v == 0) continue;
        const auto var = static_cast<Var>(std::llabs(v));
        max_var = std::max<std::size_t>(max_var, static_cast<std::size_t>(var));
        assigned.emplace_back(var, v > 0);
      }
    }
  });
  if (!have_status && !assigned.empty()) result.status = SolveStatus::Sat;
  if (result.status == SolveStatus::Sat) {
    result.model = Model(max_var);
    for (const auto& [v, b] : assigned) result.model.set(v, b);
  }
  return result;
}

void write_dimacs_files(const CnfInstance& cnf, const std::filesystem::path& dir,
                        const std::string& stem) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / (stem + ".cnf"));
    if (!out) throw std::runtime_error("cannot write " + (dir / (stem + ".cnf")).string());
    out << to_dimacs(cnf);
  }
  std::ofstream vars(dir / (stem + ".vars"));
  if (!vars) throw std::runtime_error("cannot write " + (dir / (stem + ".vars")).string());
  vars << annotations_text(cnf);
}

}  // namespace graylearn
