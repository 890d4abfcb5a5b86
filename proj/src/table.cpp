#include "graylearn/table.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace graylearn {

std::string show(const CellValue& c) {
  switch (c.kind) {
    case CellKind::Output: return show(c.output);
    case CellKind::Bottom: return "⊥";
    case CellKind::Hash: return "#";
  }
  return "?";
}

CellValue MembershipOracle::classify(const Word& w) {
  if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  CellValue value;
  if (!up_.accepts(w)) {
    value = CellValue::Hash();
  } else {
    log_.push_back(w);
    auto answer = teacher_.membership(w);
    value = answer ? CellValue::Output(std::move(*answer)) : CellValue::Bottom();
  }
  cache_.emplace(w, value);
  return value;
}

ObservationTable::ObservationTable(Alphabet sigma, Alphabet gamma, MembershipOracle& oracle,
                                   TableOptions options)
    : sigma_(std::move(sigma)), gamma_(std::move(gamma)), options_(options) {
  prefixes_.insert(Word{});
  suffixes_.insert(Word{});
  refresh_rows();
  fill(oracle);
}

ObservationTable ObservationTable::literal(Alphabet sigma, Alphabet gamma,
                                           const WordSet& prefixes, const WordSet& suffixes,
                                           const WordSet& rows,
                                           const std::map<Word, CellValue>& cells,
                                           TableOptions options) {
  ObservationTable t;
  t.sigma_ = std::move(sigma);
  t.gamma_ = std::move(gamma);
  t.options_ = options;
  t.prefixes_ = prefixes;
  t.suffixes_ = suffixes;
  t.rows_ = rows;
  t.explicit_rows_ = true;
  for (const auto& p : prefixes)
    if (!rows.count(p)) throw std::invalid_argument("literal table: prefix " + show(p) + " is not a row");
  for (const auto& r : rows)
    for (const auto& s : suffixes) {
      const Word w = r + s;
      auto it = cells.find(w);
      if (it == cells.end()) throw std::invalid_argument("literal table: missing cell " + show(w));
      t.cells_[w] = it->second;
    }
  t.refresh_derived();
  return t;
}

void ObservationTable::refresh_rows() {
  if (explicit_rows_) return;
  rows_ = prefixes_;
  for (const auto& u : prefixes_)
    for (char a : sigma_.symbols()) rows_.insert(u + a);
}

void ObservationTable::fill(MembershipOracle& oracle) {
  for (const auto& r : rows_)
    for (const auto& s : suffixes_) {
      Word w = r + s;
      if (cells_.count(w)) continue;
      CellValue value = oracle.classify(w);
      cells_.emplace(std::move(w), std::move(value));
    }
  refresh_derived();
}

void ObservationTable::add_prefix(const Word& u, MembershipOracle& oracle) {
  sigma_.check_word(u, "prefix");
  for (auto& p : prefixes_of(u)) prefixes_.insert(std::move(p));
  refresh_rows();
  fill(oracle);
}

void ObservationTable::add_suffixes(const Word& v, MembershipOracle& oracle) {
  sigma_.check_word(v, "suffix");
  for (auto& s : suffixes_of(v)) suffixes_.insert(std::move(s));
  fill(oracle);
}

void ObservationTable::refresh_derived() {
  WordSet pt;
  max_cell_ = 0;
  for (const auto& [w, c] : cells_) {
    for (auto& p : prefixes_of(w)) pt.insert(std::move(p));
    if (c.is_output()) max_cell_ = std::max(max_cell_, c.output.size());
  }
  p_t_.assign(pt.begin(), pt.end());
  p_t_index_.clear();
  for (std::size_t i = 0; i < p_t_.size(); ++i) p_t_index_[p_t_[i]] = i;
  const std::size_t k = sigma_.size();
  child_.assign(p_t_.size() * k, -1);
  cell_of_.assign(p_t_.size(), std::nullopt);
  for (std::size_t i = 0; i < p_t_.size(); ++i) {
    const Word& w = p_t_[i];
    if (const CellValue* c = cell(w)) cell_of_[i] = *c;
    if (!w.empty())
      child_[p_t_index_.at(w.substr(0, w.size() - 1)) * k + *sigma_.index_of(w.back())] =
          static_cast<long>(i);
  }
  p_gamma_.assign(p_t_.size(), false);
  ext_lcp_.assign(p_t_.size(), Word{});
  for (const auto& [w, c] : cells_) {
    if (!c.is_output()) continue;
    for (std::size_t len = 0; len <= w.size(); ++len) {
      const std::size_t i = p_t_index_.at(w.substr(0, len));
      if (!p_gamma_[i]) {
        p_gamma_[i] = true;
        ext_lcp_[i] = c.output;
      } else {
        ext_lcp_[i] = lcp(ext_lcp_[i], c.output);
      }
    }
  }
}

const CellValue* ObservationTable::cell(const Word& w) const {
  auto it = cells_.find(w);
  return it == cells_.end() ? nullptr : &it->second;
}

const CellValue& ObservationTable::at(const Word& row, const Word& suffix) const {
  const CellValue* c = cell(row + suffix);
  if (!c) throw std::out_of_range("no table cell for " + show(row) + "·" + show(suffix));
  return *c;
}

std::optional<std::size_t> ObservationTable::index_of(const Word& u) const {
  auto it = p_t_index_.find(u);
  if (it == p_t_index_.end()) return std::nullopt;
  return it->second;
}

bool ObservationTable::in_p_gamma(const Word& u) const {
  const auto i = index_of(u);
  return i && p_gamma_[*i];
}

const Word& ObservationTable::extension_lcp(const Word& u) const {
  static const Word empty;
  const auto i = index_of(u);
  return i ? ext_lcp_[*i] : empty;
}

Word ObservationTable::row_lcp(const Word& u) const {
  if (!is_row(u)) throw std::invalid_argument(show(u) + " is not a table row");
  std::vector<Word> outs;
  for (const auto& s : suffixes_)
    if (const auto& c = at(u, s); c.is_output()) outs.push_back(c.output);
  return lcp(outs);
}

namespace {

// Column comparison under ≡_T; l1, l2 are the row lcps.
bool column_agrees(const CellValue& c1, const CellValue& c2, const Word& l1, const Word& l2,
                   bool hash_is_wildcard) {
  if (hash_is_wildcard && (c1.is_hash() || c2.is_hash())) return true;
  if (c1.kind != c2.kind) return false;
  if (c1.is_output())
    return c1.output.compare(l1.size(), Word::npos, c2.output, l2.size(), Word::npos) == 0;
  return true;
}

}  // namespace

bool ObservationTable::row_equiv(const Word& u, const Word& u2) const {
  if (!is_row(u)) throw std::invalid_argument(show(u) + " is not a table row");
  if (!is_row(u2)) throw std::invalid_argument(show(u2) + " is not a table row");
  const Word l1 = row_lcp(u), l2 = row_lcp(u2);
  for (const auto& s : suffixes_)
    if (!column_agrees(at(u, s), at(u2, s), l1, l2, options_.hash_is_wildcard)) return false;
  return true;
}

std::optional<Word> ObservationTable::distinguishing_suffix(const Word& u, const Word& u2,
                                                            const WordSet* exclude_prefixed_by,
                                                            char a) const {
  const Word l1 = row_lcp(u), l2 = row_lcp(u2);
  for (const auto& s : suffixes_) {
    if (column_agrees(at(u, s), at(u2, s), l1, l2, options_.hash_is_wildcard)) continue;
    if (exclude_prefixed_by && exclude_prefixed_by->count(a + s)) continue;
    return s;
  }
  return std::nullopt;
}

std::optional<Word> ObservationTable::find_closure_defect() const {
  for (const auto& r : rows_) {
    if (prefixes_.count(r) || r.empty() || !prefixes_.count(r.substr(0, r.size() - 1))) continue;
    bool found = false;
    for (const auto& p : prefixes_)
      if (row_equiv(r, p)) {
        found = true;
        break;
      }
    if (!found) return r;
  }
  return std::nullopt;
}

std::optional<EquivDefect> ObservationTable::find_equiv_consistency_defect() const {
  for (auto i = prefixes_.begin(); i != prefixes_.end(); ++i)
    for (auto j = std::next(i); j != prefixes_.end(); ++j) {
      if (!row_equiv(*i, *j)) continue;
      for (char a : sigma_.symbols()) {
        const Word ua = *i + a, ua2 = *j + a;
        if (!is_row(ua) || !is_row(ua2) || !in_prefix_words(ua) || !in_prefix_words(ua2))
          continue;
        if (row_equiv(ua, ua2)) continue;
        if (auto v = distinguishing_suffix(ua, ua2, &suffixes_, a)) return EquivDefect{*i, *j, a, *v};
      }
    }
  return std::nullopt;
}

std::optional<LcpDefect> ObservationTable::find_lcp_consistency_defect() const {
  for (const auto& r : rows_) {
    if (r.empty()) continue;
    const Word u = r.substr(0, r.size() - 1);
    if (!is_row(u)) continue;
    std::vector<std::pair<Word, const Word*>> outs;
    for (const auto& s : suffixes_)
      if (const auto& c = at(r, s); c.is_output()) outs.emplace_back(s, &c.output);
    if (outs.empty()) continue;
    std::vector<Word> words;
    for (const auto& o : outs) words.push_back(*o.second);
    const Word lr = lcp(words);
    if (is_prefix(row_lcp(u), lr)) continue;
    const auto& [v, first] = outs.front();
    Word v2 = v;
    for (const auto& [s, out] : outs)
      if (lcp(*first, *out).size() == lr.size()) {
        v2 = s;
        break;
      }
    return LcpDefect{u, r.back(), v, v2};
  }
  return std::nullopt;
}

std::string ObservationTable::dump() const {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({""});
  for (const auto& s : suffixes_) grid[0].push_back(show(s));
  std::vector<Word> order(prefixes_.begin(), prefixes_.end());
  const std::size_t separator = order.size();
  for (const auto& r : rows_)
    if (!prefixes_.count(r)) order.push_back(r);
  for (const auto& r : order) {
    std::vector<std::string> line{show(r)};
    for (const auto& s : suffixes_) line.push_back(show(at(r, s)));
    grid.push_back(std::move(line));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  auto display_width = [](const std::string& s) {
    std::size_t n = 0;
    for (unsigned char c : s) n += (c & 0xC0) != 0x80;
    return n;
  };
  for (const auto& line : grid)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], display_width(line[c]));
  std::ostringstream out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i == 1 || i == separator + 1) {
      for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "-+-" : "") << std::string(width[c], '-');
      out << '\n';
    }
    for (std::size_t c = 0; c < grid[i].size(); ++c) {
      if (c) out << " | ";
      out << grid[i][c] << std::string(width[c] - display_width(grid[i][c]), ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace graylearn
