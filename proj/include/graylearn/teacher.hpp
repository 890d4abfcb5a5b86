#pragma once

#include <atomic>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/equivalence.hpp"

namespace graylearn {

/// Membership and equivalence oracle for a partial function τ.
class Teacher {
 public:
  virtual ~Teacher() = default;
  /// τ(u), or nullopt when u ∉ dom(τ).
  virtual std::optional<Word> membership(const Word& u) = 0;
  /// nullopt when ⟦m⟧ = τ, otherwise a word on which they differ.
  virtual std::optional<Witness> equivalence(const Transducer& m) = 0;
};

struct QueryRecord {
  enum class Kind { Membership, Equivalence } kind;
  Word input;   ///< Queried word, or the returned witness for equivalence queries.
  std::string answer;
};

/// Teacher backed by a hidden transducer. The target is restricted to Up at
/// construction, so dom(τ) ⊆ L(Up) always holds.
class SimulatedTeacher : public Teacher {
 public:
  SimulatedTeacher(const Transducer& target, const Dfa& up);

  std::optional<Word> membership(const Word& u) override;
  std::optional<Witness> equivalence(const Transducer& m) override;

  const Transducer& target() const { return target_; }
  std::size_t membership_queries() const { return membership_count_; }
  std::size_t equivalence_queries() const { return equivalence_count_; }

  std::vector<QueryRecord> log() const;
  /// One line per query: "kind<TAB>input<TAB>answer".
  std::string export_log() const;

 private:
  void record(QueryRecord r);

  Transducer target_;
  Dfa universe_;
  std::atomic<std::size_t> membership_count_{0};
  std::atomic<std::size_t> equivalence_count_{0};
  mutable std::mutex log_mutex_;
  std::vector<QueryRecord> log_;
};

}  // namespace graylearn
