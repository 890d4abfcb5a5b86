#include "graylearn/automata_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace graylearn {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::istringstream in{std::string(text.substr(pos, end - pos))};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty() && line.tokens.front()[0] != '#') lines.push_back(std::move(line));
    pos = end + 1;
  }
  return lines;
}

std::size_t parse_number(const Line& line, std::size_t i, std::string_view what) {
  if (i >= line.tokens.size()) throw ParseError(line.number, "missing " + std::string(what));
  const std::string& tok = line.tokens[i];
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line.number, "expected " + std::string(what) + ", got '" + tok + "'");
  return value;
}

Word parse_word(const Line& line, std::size_t i, const Alphabet& alphabet, std::string_view what) {
  if (i >= line.tokens.size()) throw ParseError(line.number, "missing " + std::string(what));
  const std::string& tok = line.tokens[i];
  if (tok == "_") return {};
  for (char c : tok)
    if (!alphabet.contains(c))
      throw ParseError(line.number, std::string(what) + " uses symbol '" + c +
                                        "' outside alphabet {" + alphabet.symbols() + "}");
  return tok;
}

void expect_arity(const Line& line, std::size_t n) {
  if (line.tokens.size() != n)
    throw ParseError(line.number, "'" + line.tokens[0] + "' expects " + std::to_string(n - 1) +
                                      " arguments, got " +
                                      std::to_string(line.tokens.size() - 1));
}

Alphabet parse_alphabet(const Line& line, std::size_t i) {
  try {
    return Alphabet(line.tokens.at(i));
  } catch (const std::out_of_range&) {
    throw ParseError(line.number, "missing alphabet");
  } catch (const std::invalid_argument& e) {
    throw ParseError(line.number, e.what());
  }
}

StateId check_state(const Line& line, std::size_t i, std::size_t n) {
  const std::size_t q = parse_number(line, i, "state");
  if (q >= n)
    throw ParseError(line.number, "state " + std::to_string(q) + " out of range (states " +
                                      std::to_string(n) + ")");
  return static_cast<StateId>(q);
}

char parse_symbol(const Line& line, std::size_t i, const Alphabet& sigma) {
  const std::string& tok = line.tokens.at(i);
  if (tok.size() != 1 || !sigma.contains(tok[0]))
    throw ParseError(line.number, "'" + tok + "' is not an input symbol");
  return tok[0];
}

}  // namespace

std::string print_transducer(const Transducer& m) {
  std::ostringstream out;
  out << "alphabets " << m.input_alphabet().symbols() << ' ' << m.output_alphabet().symbols()
      << '\n';
  out << "states " << m.num_states() << '\n';
  if (m.is_empty()) return out.str();
  out << "init " << m.initial_state() << ' ' << show(m.initial_production()) << '\n';
  const Alphabet& sigma = m.input_alphabet();
  for (StateId q = 0; q < m.num_states(); ++q)
    for (std::size_t a = 0; a < sigma.size(); ++a)
      if (const auto& e = m.transition(q, a))
        out << "trans " << q << ' ' << sigma.symbol(a) << ' ' << show(e->output) << ' '
            << e->target << '\n';
  for (StateId q = 0; q < m.num_states(); ++q)
    if (m.is_final(q)) out << "final " << q << ' ' << show(*m.final_output(q)) << '\n';
  return out.str();
}

Transducer parse_transducer(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.size() < 2) throw ParseError(0, "transducer needs 'alphabets' and 'states' lines");
  const Line& head = lines[0];
  if (head.tokens[0] != "alphabets") throw ParseError(head.number, "expected 'alphabets'");
  expect_arity(head, 3);
  Transducer m(parse_alphabet(head, 1), parse_alphabet(head, 2));
  const Line& states = lines[1];
  if (states.tokens[0] != "states") throw ParseError(states.number, "expected 'states'");
  expect_arity(states, 2);
  const std::size_t n = parse_number(states, 1, "state count");
  for (std::size_t i = 0; i < n; ++i) m.add_state();

  bool seen_init = false;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::string& kw = line.tokens[0];
    if (kw == "init") {
      expect_arity(line, 3);
      if (seen_init) throw ParseError(line.number, "duplicate 'init'");
      seen_init = true;
      m.set_initial(check_state(line, 1, n),
                    parse_word(line, 2, m.output_alphabet(), "initial production"));
    } else if (kw == "trans") {
      expect_arity(line, 5);
      const StateId from = check_state(line, 1, n);
      const char a = parse_symbol(line, 2, m.input_alphabet());
      Word out = parse_word(line, 3, m.output_alphabet(), "transition output");
      const StateId to = check_state(line, 4, n);
      if (m.transition(from, a))
        throw ParseError(line.number, "nondeterministic: second transition on '" +
                                          std::string(1, a) + "' from state " +
                                          std::to_string(from));
      m.set_transition(from, a, to, std::move(out));
    } else if (kw == "final") {
      expect_arity(line, 3);
      const StateId q = check_state(line, 1, n);
      if (m.is_final(q)) throw ParseError(line.number, "duplicate final output");
      m.set_final(q, parse_word(line, 2, m.output_alphabet(), "final output"));
    } else {
      throw ParseError(line.number, "unknown declaration '" + kw + "'");
    }
  }
  if (n > 0 && !seen_init) throw ParseError(0, "missing 'init' line");
  return m;
}

std::string print_dfa(const Dfa& a) {
  std::ostringstream out;
  const Alphabet& sigma = a.alphabet();
  out << "alphabet " << sigma.symbols() << '\n';
  out << "states " << a.num_states() << '\n';
  out << "init " << a.initial_state() << '\n';
  out << "accept";
  for (StateId q = 0; q < a.num_states(); ++q)
    if (a.is_accepting(q)) out << ' ' << q;
  out << '\n';
  for (StateId q = 0; q < a.num_states(); ++q)
    for (std::size_t s = 0; s < sigma.size(); ++s)
      out << "trans " << q << ' ' << sigma.symbol(s) << ' ' << a.next(q, s) << '\n';
  return out.str();
}

Dfa parse_dfa(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.size() < 3) throw ParseError(0, "DFA needs 'alphabet', 'states' and 'init' lines");
  const Line& head = lines[0];
  if (head.tokens[0] != "alphabet") throw ParseError(head.number, "expected 'alphabet'");
  expect_arity(head, 2);
  Alphabet sigma = parse_alphabet(head, 1);
  const Line& states = lines[1];
  if (states.tokens[0] != "states") throw ParseError(states.number, "expected 'states'");
  expect_arity(states, 2);
  const std::size_t n = parse_number(states, 1, "state count");
  if (n == 0) throw ParseError(states.number, "DFA needs at least one state");
  const Line& init = lines[2];
  if (init.tokens[0] != "init") throw ParseError(init.number, "expected 'init'");
  expect_arity(init, 2);
  const StateId q0 = check_state(init, 1, n);

  std::vector<StateId> delta(n * sigma.size(), kNoState);
  std::vector<bool> accepting(n, false);
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::string& kw = line.tokens[0];
    if (kw == "accept") {
      for (std::size_t j = 1; j < line.tokens.size(); ++j) accepting[check_state(line, j, n)] = true;
    } else if (kw == "trans") {
      expect_arity(line, 4);
      const StateId from = check_state(line, 1, n);
      const char a = parse_symbol(line, 2, sigma);
      const StateId to = check_state(line, 3, n);
      auto& slot = delta[from * sigma.size() + *sigma.index_of(a)];
      if (slot != kNoState) throw ParseError(line.number, "nondeterministic transition");
      slot = to;
    } else {
      throw ParseError(line.number, "unknown declaration '" + kw + "'");
    }
  }
  return Dfa(std::move(sigma), n, q0, std::move(delta), std::move(accepting));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Transducer load_transducer(const std::filesystem::path& path) {
  return parse_transducer(read_file(path));
}

Dfa load_dfa(const std::filesystem::path& path) { return parse_dfa(read_file(path)); }

}  // namespace graylearn
