#include "graylearn/word.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace graylearn {

Alphabet::Alphabet(std::string_view symbols) : symbols_(symbols) {
  if (symbols_.empty()) throw std::invalid_argument("alphabet must not be empty");
  std::sort(symbols_.begin(), symbols_.end());
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    const char c = symbols_[i];
    if (i > 0 && symbols_[i - 1] == c)
      throw std::invalid_argument(std::string("duplicate alphabet symbol '") + c + "'");
    if (c == '_' || c == '#' || std::isspace(static_cast<unsigned char>(c)) ||
        !std::isprint(static_cast<unsigned char>(c)))
      throw std::invalid_argument(std::string("reserved alphabet symbol '") + c + "'");
    index_[static_cast<unsigned char>(c)] = static_cast<int>(i);
  }
}

std::optional<std::size_t> Alphabet::index_of(char c) const {
  const int i = index_[static_cast<unsigned char>(c)];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

bool Alphabet::contains_word(std::string_view w) const {
  return std::all_of(w.begin(), w.end(), [&](char c) { return contains(c); });
}

void Alphabet::check_word(std::string_view w, std::string_view what) const {
  for (char c : w)
    if (!contains(c))
      throw std::invalid_argument(std::string(what) + ": symbol '" + c +
                                  "' is not in alphabet {" + symbols_ + "}");
}

Word strip_prefix(std::string_view p, std::string_view w) {
  if (!is_prefix(p, w))
    throw std::logic_error("strip_prefix: '" + std::string(p) + "' is not a prefix of '" +
                           std::string(w) + "'");
  return Word(w.substr(p.size()));
}

Word lcp(const Word& a, const Word& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  return a.substr(0, i);
}

Word lcp(const std::vector<Word>& words) {
  if (words.empty()) return {};
  Word acc = words.front();
  for (const auto& w : words) acc = lcp(acc, w);
  return acc;
}

std::vector<Word> prefixes_of(const Word& w) {
  std::vector<Word> out;
  out.reserve(w.size() + 1);
  for (std::size_t i = 0; i <= w.size(); ++i) out.push_back(w.substr(0, i));
  return out;
}

std::vector<Word> suffixes_of(const Word& w) {
  std::vector<Word> out;
  out.reserve(w.size() + 1);
  for (std::size_t i = 0; i <= w.size(); ++i) out.push_back(w.substr(w.size() - i));
  return out;
}

std::string show(const Word& w) { return w.empty() ? "_" : w; }

}  // namespace graylearn
