#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/table.hpp"

namespace graylearn {

/// Equivalence relation on P_T plus a partial output function f.
///
/// Both vectors are indexed like ObservationTable::prefix_words(). Class ids
/// are canonical: numbered by first occurrence in shortlex order, so the
/// least member of each class is its representative.
struct MergingMap {
  std::vector<std::size_t> block;
  std::vector<std::optional<Word>> f;

  std::size_t num_words() const { return block.size(); }
  std::size_t num_classes() const;
  /// Number of classes inside dom(f).
  std::size_t size() const;
  bool defined(std::size_t i) const { return f[i].has_value(); }
  bool equivalent(std::size_t i, std::size_t j) const { return block[i] == block[j]; }

  /// Renumbers classes by first occurrence.
  void canonicalize();

  bool operator==(const MergingMap&) const = default;
};

struct MmViolation {
  int rule = 0;  ///< 1..6 for the merging-map rules, 0 for a malformed map.
  std::string detail;
};

/// nullopt when `mm` satisfies all six rules on `t`, else the first violation.
std::optional<MmViolation> validate_mm(const ObservationTable& t, const MergingMap& mm);

/// State index per P_T word: classes in dom(f) numbered by representative,
/// kNoState for words outside dom(f).
std::vector<StateId> class_states(const MergingMap& mm);

/// Transducer whose states are the classes inside dom(f). Throws
/// std::logic_error if transitions or final outputs disagree across class members.
Transducer resulting_transducer(const ObservationTable& t, const MergingMap& mm);

/// Merging map read off the runs of a compatible transducer. Words with no run
/// share one class with f undefined. Throws std::invalid_argument if m is not
/// compatible with t.
MergingMap induced_mm(const ObservationTable& t, const Transducer& m);

/// Γ* cells reproduced exactly, ⊥ cells outside the domain, # cells free.
bool is_compatible(const Transducer& m, const ObservationTable& t);

/// A (class, symbol) pair; `word` is the class representative.
struct ClassSymbol {
  Word word;
  char symbol = 0;
  bool operator==(const ClassSymbol&) const = default;
};

std::vector<ClassSymbol> muted_pairs(const ObservationTable& t, const MergingMap& mm);
/// Open ends of classes inside dom(f).
std::vector<ClassSymbol> open_ends(const ObservationTable& t, const MergingMap& mm);

struct OpenTransition {
  Word from;  ///< Representative of the source class.
  char symbol = 0;
  Word to;    ///< Representative of the target class.
};

/// Resulting transducer plus one ε-output transition per listed open end.
/// Throws std::invalid_argument if an entry is not an open end of a state class.
Transducer open_completion(const ObservationTable& t, const MergingMap& mm,
                           const std::vector<OpenTransition>& added);

/// One line per class ("{members} rep=.. f=..") followed by muted and open listings.
std::string describe(const ObservationTable& t, const MergingMap& mm);

}  // namespace graylearn
