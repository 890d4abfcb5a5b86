#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace graylearn {

/// Input and output words are plain character strings over an Alphabet.
using Word = std::string;

/// Ordered finite set of symbols. Symbols are kept sorted, which fixes the
/// tie-breaking order used by every search in the library.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::string_view symbols);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  char symbol(std::size_t index) const { return symbols_[index]; }
  const std::string& symbols() const { return symbols_; }

  std::optional<std::size_t> index_of(char c) const;
  bool contains(char c) const { return index_of(c).has_value(); }
  bool contains_word(std::string_view w) const;

  /// Throws std::invalid_argument naming the first foreign symbol.
  void check_word(std::string_view w, std::string_view what) const;

  bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::string symbols_;
  std::vector<int> index_ = std::vector<int>(256, -1);
};

/// Shortlex order: shorter words first, then symbol by symbol.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using WordSet = std::set<Word, ShortLex>;

inline bool is_prefix(std::string_view p, std::string_view w) {
  return p.size() <= w.size() && w.compare(0, p.size(), p) == 0;
}

/// p^{-1} w. Precondition: is_prefix(p, w).
Word strip_prefix(std::string_view p, std::string_view w);

Word lcp(const Word& a, const Word& b);

/// Longest common prefix of a set of words; the empty set yields the empty word.
Word lcp(const std::vector<Word>& words);

/// All prefixes of w, shortest first (includes the empty word and w).
std::vector<Word> prefixes_of(const Word& w);
std::vector<Word> suffixes_of(const Word& w);

/// Printable form: the empty word is rendered as "_".
std::string show(const Word& w);

}  // namespace graylearn
