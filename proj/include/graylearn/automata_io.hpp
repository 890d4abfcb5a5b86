#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "graylearn/automata.hpp"

namespace graylearn {

/// Malformed transducer/DFA text. `line()` is 1-based, 0 when not line-specific.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Transducer text format, one declaration per line ('_' is the empty word):
//
//   alphabets abc 01
//   states 3
//   init 0 _
//   trans 0 a _ 1
//   final 1 _
//
// DFA text format:
//
//   alphabet abc
//   states 4
//   init 0
//   accept 1 3
//   trans 0 a 1
//
// Blank lines and lines starting with '#' are ignored. Missing DFA
// transitions go to a rejecting sink. print_* emits a canonical form with
// parse(print(x)) == x.

std::string print_transducer(const Transducer& m);
Transducer parse_transducer(std::string_view text);

std::string print_dfa(const Dfa& a);
Dfa parse_dfa(std::string_view text);

Transducer load_transducer(const std::filesystem::path& path);
Dfa load_dfa(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

}  // namespace graylearn
