#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/teacher.hpp"

namespace graylearn {

enum class CellKind { Output, Bottom, Hash };

/// Table entry: an output word, ⊥ (in Up, outside dom τ) or # (outside Up).
struct CellValue {
  CellKind kind = CellKind::Hash;
  Word output;

  static CellValue Output(Word w) { return {CellKind::Output, std::move(w)}; }
  static CellValue Bottom() { return {CellKind::Bottom, {}}; }
  static CellValue Hash() { return {CellKind::Hash, {}}; }

  bool is_output() const { return kind == CellKind::Output; }
  bool is_bottom() const { return kind == CellKind::Bottom; }
  bool is_hash() const { return kind == CellKind::Hash; }
  bool operator==(const CellValue&) const = default;
};

/// "⊥", "#", or the output word ("_" for ε).
std::string show(const CellValue& c);

/// Fills cells through a teacher. Words outside L(up) are answered # without a
/// query; every other word is queried at most once per oracle.
class MembershipOracle {
 public:
  MembershipOracle(Teacher& teacher, const Dfa& up) : teacher_(teacher), up_(up) {}

  CellValue classify(const Word& w);

  std::size_t queries() const { return log_.size(); }
  const std::vector<Word>& query_log() const { return log_; }
  const Dfa& up() const { return up_; }

 private:
  Teacher& teacher_;
  const Dfa& up_;
  std::unordered_map<Word, CellValue> cache_;
  std::vector<Word> log_;
};

struct EquivDefect {
  Word u, u2;
  char a = 0;
  Word v;
  bool operator==(const EquivDefect&) const = default;
};

struct LcpDefect {
  Word u;
  char a = 0;
  Word v, v2;
  bool operator==(const LcpDefect&) const = default;
};

struct TableOptions {
  /// Compare # as compatible with every cell in row_equiv instead of literally.
  bool hash_is_wildcard = false;
};

/// Observation table T: (P ∪ PΣ)·S → Γ* ∪ {⊥, #}, cells keyed by the full word.
class ObservationTable {
 public:
  ObservationTable() = default;

  /// P = S = {ε} filled through `oracle`.
  ObservationTable(Alphabet sigma, Alphabet gamma, MembershipOracle& oracle,
                   TableOptions options = {});

  /// Table with explicit rows and cells, bypassing any oracle. `rows` must
  /// contain P; every row·suffix word needs an entry in `cells`.
  static ObservationTable literal(Alphabet sigma, Alphabet gamma, const WordSet& prefixes,
                                  const WordSet& suffixes, const WordSet& rows,
                                  const std::map<Word, CellValue>& cells,
                                  TableOptions options = {});

  /// Adds u and its prefixes to P and fills the new cells.
  void add_prefix(const Word& u, MembershipOracle& oracle);
  /// Adds v and its suffixes to S and fills the new cells.
  void add_suffixes(const Word& v, MembershipOracle& oracle);

  const Alphabet& input_alphabet() const { return sigma_; }
  const Alphabet& output_alphabet() const { return gamma_; }
  const WordSet& prefixes() const { return prefixes_; }
  const WordSet& suffixes() const { return suffixes_; }
  const WordSet& rows() const { return rows_; }
  bool is_row(const Word& u) const { return rows_.count(u) != 0; }

  /// All filled words.
  const std::map<Word, CellValue, ShortLex>& cells() const { return cells_; }
  /// T̂(w), or nullptr when w is not a table word.
  const CellValue* cell(const Word& w) const;
  const CellValue& at(const Word& row, const Word& suffix) const;

  /// P_T: every prefix of a table word, shortlex ordered.
  const std::vector<Word>& prefix_words() const { return p_t_; }
  std::optional<std::size_t> index_of(const Word& u) const;
  bool in_prefix_words(const Word& u) const { return index_of(u).has_value(); }
  /// u ∈ P_Γ: some table word extending u holds an output.
  bool in_p_gamma(const Word& u) const;
  /// lcp of the outputs of all table words extending u (ε when u ∉ P_Γ).
  const Word& extension_lcp(const Word& u) const;
  /// Index of u·a in P_T (a given by its index in Σ), or -1.
  long child(std::size_t i, std::size_t a) const { return child_[i * sigma_.size() + a]; }
  /// T̂ of the i-th P_T word, or nullptr.
  const CellValue* cell_at(std::size_t i) const { return cell_of_[i] ? &*cell_of_[i] : nullptr; }
  /// Longest output among all cells.
  std::size_t max_cell_length() const { return max_cell_; }

  /// lcp_T(u): lcp of the output cells of row u.
  Word row_lcp(const Word& u) const;
  bool row_equiv(const Word& u, const Word& u2) const;

  /// Shortlex-least ua ∈ PΣ with no equivalent row in P.
  std::optional<Word> find_closure_defect() const;
  /// Least (u, u', a, v) with u ≡ u' in P, ua ≢ ua' distinguished by v and
  /// av ∉ S. Defects whose repair would not change S are skipped.
  std::optional<EquivDefect> find_equiv_consistency_defect() const;
  /// Least ua with lcp_T(u) not a prefix of lcp_T(ua); v, v' witness lcp_T(ua).
  std::optional<LcpDefect> find_lcp_consistency_defect() const;

  /// Aligned text: one line per row, one column per suffix.
  std::string dump() const;

  const TableOptions& options() const { return options_; }

 private:
  void fill(MembershipOracle& oracle);
  void refresh_rows();
  void refresh_derived();
  std::optional<Word> distinguishing_suffix(const Word& u, const Word& u2,
                                            const WordSet* exclude_prefixed_by,
                                            char a) const;

  Alphabet sigma_;
  Alphabet gamma_;
  TableOptions options_;
  WordSet prefixes_;
  WordSet suffixes_;
  WordSet rows_;
  bool explicit_rows_ = false;
  std::map<Word, CellValue, ShortLex> cells_;
  std::vector<Word> p_t_;
  std::unordered_map<Word, std::size_t> p_t_index_;
  std::vector<bool> p_gamma_;
  std::vector<Word> ext_lcp_;
  std::vector<long> child_;
  std::vector<std::optional<CellValue>> cell_of_;
  std::size_t max_cell_ = 0;
};

}  // namespace graylearn
