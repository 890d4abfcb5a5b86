#include "oracles.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "graylearn/equivalence.hpp"
#include "graylearn/merging_map.hpp"

namespace oracles {

namespace {

std::vector<Word> words_up_to(const Alphabet& gamma, std::size_t n) {
  std::vector<Word> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == n) continue;
    for (char a : gamma.symbols()) out.push_back(out[i] + a);
  }
  return out;
}

struct MmSearch {
  const ObservationTable& t;
  const std::vector<Word>& words;
  std::size_t max_n;
  std::vector<Word> tails;
  std::vector<std::size_t> parent;
  std::vector<bool> pg;
  std::vector<std::size_t> cls;  // max_n = undefined
  std::vector<std::optional<Word>> f;
  std::size_t best;

  MmSearch(const ObservationTable& table, std::size_t n)
      : t(table), words(table.prefix_words()), max_n(n), best(n + 1) {
    tails = words_up_to(t.output_alphabet(), t.max_cell_length());
    const std::size_t N = words.size();
    parent.assign(N, 0);
    pg.assign(N, false);
    cls.assign(N, max_n);
    f.assign(N, std::nullopt);
    for (std::size_t i = 0; i < N; ++i) {
      pg[i] = t.in_p_gamma(words[i]);
      if (!words[i].empty()) parent[i] = *t.index_of(words[i].substr(0, words[i].size() - 1));
    }
  }

  // Final-output agreement of word i with the earlier members of class c.
  bool finals_agree(std::size_t i, std::size_t c, const Word& fi) const {
    const CellValue* ci = t.cell_at(i);
    if (!ci || ci->is_hash()) return true;
    for (std::size_t j = 0; j < i; ++j) {
      if (cls[j] != c) continue;
      const CellValue* cj = t.cell_at(j);
      if (!cj || cj->is_hash()) continue;
      if (ci->is_bottom() != cj->is_bottom()) return false;
      if (ci->is_output() && strip_prefix(fi, ci->output) != strip_prefix(*f[j], cj->output))
        return false;
    }
    return true;
  }

  void dfs(std::size_t i, std::size_t used) {
    if (used >= best) return;
    if (i == words.size()) {
      MergingMap mm{cls, f};
      mm.canonicalize();
      if (!validate_mm(t, mm)) best = used;
      return;
    }
    if (!pg[i]) {
      cls[i] = max_n;
      f[i].reset();
      dfs(i + 1, used);
    }
    if (i > 0 && !f[parent[i]]) return;
    std::vector<Word> candidates;
    if (pg[i]) {
      const Word& l = t.extension_lcp(words[i]);
      for (std::size_t len = 0; len <= l.size(); ++len) {
        Word w = l.substr(0, len);
        if (i == 0 || is_prefix(*f[parent[i]], w)) candidates.push_back(std::move(w));
      }
    } else {
      for (const Word& z : tails) candidates.push_back((i == 0 ? Word{} : *f[parent[i]]) + z);
    }
    for (std::size_t c = 0; c < std::min(used + 1, max_n); ++c)
      for (const Word& w : candidates) {
        if (!finals_agree(i, c, w)) continue;
        cls[i] = c;
        f[i] = w;
        dfs(i + 1, std::max(used, c + 1));
      }
    cls[i] = max_n;
    f[i].reset();
  }
};

}  // namespace

std::optional<std::size_t> min_mm_size(const ObservationTable& t, std::size_t max_n) {
  MmSearch s(t, max_n);
  s.dfs(0, 0);
  if (s.best > max_n) return std::nullopt;
  return s.best;
}

void for_each_small_table(std::size_t max_words,
                          const std::function<void(const ObservationTable&)>& visit) {
  const Alphabet sigma("ab"), gamma("0");
  const std::vector<std::optional<CellValue>> leaf_cells{
      CellValue::Hash(), CellValue::Bottom(), CellValue::Output(""), CellValue::Output("0"),
      CellValue::Output("00")};
  const std::vector<std::optional<CellValue>> inner_cells{
      std::nullopt, CellValue::Bottom(), CellValue::Output(""), CellValue::Output("0"),
      CellValue::Output("00")};

  std::set<WordSet> trees;
  std::vector<WordSet> frontier{WordSet{""}};
  while (!frontier.empty()) {
    WordSet tree = frontier.back();
    frontier.pop_back();
    if (!trees.insert(tree).second) continue;
    if (tree.size() == max_words) continue;
    for (const Word& w : tree)
      for (char a : sigma.symbols())
        if (!tree.count(w + a)) {
          WordSet grown = tree;
          grown.insert(w + a);
          frontier.push_back(std::move(grown));
        }
  }

  for (const WordSet& tree : trees) {
    std::vector<Word> words(tree.begin(), tree.end());
    std::vector<bool> leaf;
    for (const Word& w : words)
      leaf.push_back(!tree.count(w + 'a') && !tree.count(w + 'b'));
    std::vector<std::size_t> choice(words.size(), 0);
    for (;;) {
      WordSet rows;
      std::map<Word, CellValue> cells;
      for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& c = (leaf[i] ? leaf_cells : inner_cells)[choice[i]];
        if (!c) continue;
        rows.insert(words[i]);
        cells.emplace(words[i], *c);
      }
      const WordSet prefixes = rows.count("") ? WordSet{""} : WordSet{};
      visit(ObservationTable::literal(sigma, gamma, prefixes, WordSet{""}, rows, cells));
      std::size_t pos = 0;
      while (pos < words.size() && ++choice[pos] == 5) choice[pos++] = 0;
      if (pos == words.size()) break;
    }
  }
}

namespace {

constexpr long kUnassigned = -2;
constexpr long kNone = -1;

struct Partial {
  std::size_t states = 0;
  Word w0;
  std::vector<long> target;                 // per (q, a)
  std::vector<Word> out;
  std::vector<long> fin;                    // kUnassigned, kNone, or 1
  std::vector<Word> fin_out;
  std::vector<long> run_state;              // per word, kNone when undefined
  std::vector<Word> run_out;
};

struct TransducerSearch {
  const Transducer& target;
  const Dfa& up;
  std::size_t k, cap;
  std::size_t K;
  std::vector<Word> words;
  std::vector<std::size_t> parent, symbol;
  std::vector<bool> in_up, has_ext;
  std::vector<std::optional<Word>> tau;
  std::vector<Word> ext_lcp;
  std::vector<Word> free_outputs;
  SizeSearch result;
  bool inconclusive = false;

  TransducerSearch(const Transducer& tg, const Dfa& u, std::size_t kk, std::size_t c, std::size_t depth)
      : target(tg), up(u), k(kk), cap(c), K(u.alphabet().size()) {
    free_outputs = words_up_to(tg.output_alphabet(), cap);
    // Up states from which acceptance is reachable.
    const std::size_t D = up.num_states();
    std::vector<bool> live(D, false);
    for (StateId p = 0; p < D; ++p) live[p] = up.is_accepting(p);
    for (bool grew = true; grew;) {
      grew = false;
      for (StateId p = 0; p < D; ++p)
        for (std::size_t a = 0; a < K && !live[p]; ++a)
          if (live[up.next(p, a)]) live[p] = grew = true;
    }
    std::vector<StateId> up_state;
    if (live[up.initial_state()]) {
      words.push_back("");
      parent.push_back(0);
      symbol.push_back(0);
      up_state.push_back(up.initial_state());
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i].size() == depth) continue;
      for (std::size_t a = 0; a < K; ++a) {
        const StateId p = up.next(up_state[i], a);
        if (!live[p]) continue;
        words.push_back(words[i] + up.alphabet().symbol(a));
        parent.push_back(i);
        symbol.push_back(a);
        up_state.push_back(p);
      }
    }
    const std::size_t N = words.size();
    in_up.resize(N);
    tau.resize(N);
    has_ext.assign(N, false);
    ext_lcp.assign(N, Word{});
    for (std::size_t i = 0; i < N; ++i) {
      in_up[i] = up.is_accepting(up_state[i]);
      tau[i] = evaluate(target, words[i]);
      if (tau[i] && !in_up[i]) tau[i].reset();
    }
    for (std::size_t i = N; i-- > 0;) {
      if (tau[i]) {
        ext_lcp[i] = has_ext[i] ? lcp(ext_lcp[i], *tau[i]) : *tau[i];
        has_ext[i] = true;
      }
      if (i == 0 || !has_ext[i]) continue;
      const std::size_t p = parent[i];
      ext_lcp[p] = has_ext[p] ? lcp(ext_lcp[p], ext_lcp[i]) : ext_lcp[i];
      has_ext[p] = true;
    }
  }

  // Applies the final-output constraint of word i, reached in state q with output x.
  static bool settle_final(Partial& s, std::size_t q, const Word& x, bool in_up,
                           const std::optional<Word>& tau) {
    if (!in_up) return true;
    if (tau) {
      if (!is_prefix(x, *tau)) return false;
      Word need = strip_prefix(x, *tau);
      if (s.fin[q] == kUnassigned) {
        s.fin[q] = 1;
        s.fin_out[q] = std::move(need);
        return true;
      }
      return s.fin[q] == 1 && s.fin_out[q] == need;
    }
    if (s.fin[q] == kUnassigned) s.fin[q] = kNone;
    return s.fin[q] == kNone;
  }

  std::vector<Word> output_choices(const Word& x, std::size_t i) const {
    if (!has_ext[i]) return free_outputs;
    std::vector<Word> out;
    if (!is_prefix(x, ext_lcp[i])) return out;
    const Word rest = strip_prefix(x, ext_lcp[i]);
    for (std::size_t len = 0; len <= rest.size(); ++len) out.push_back(rest.substr(0, len));
    return out;
  }

  Transducer build(const Partial& s) const {
    Transducer m(target.input_alphabet(), target.output_alphabet());
    for (std::size_t q = 0; q < s.states; ++q) m.add_state();
    m.set_initial(0, s.w0);
    for (std::size_t q = 0; q < s.states; ++q) {
      for (std::size_t a = 0; a < K; ++a)
        if (s.target[q * K + a] >= 0)
          m.set_transition(static_cast<StateId>(q), up.alphabet().symbol(a),
                           static_cast<StateId>(s.target[q * K + a]), s.out[q * K + a]);
      if (s.fin[q] == 1) m.set_final(static_cast<StateId>(q), s.fin_out[q]);
    }
    return m;
  }

  bool dfs(Partial& s, std::size_t i) {
    if (i == words.size()) {
      ++result.leaves;
      Transducer m = build(s);
      if (!equivalent_on(m, target, up)) {
        result.witness = std::move(m);
        return true;
      }
      inconclusive = true;
      return false;
    }
    const std::size_t p = parent[i], a = symbol[i];
    const long q = s.run_state[p];
    if (q == kNone) {
      s.run_state[i] = kNone;
      return dfs(s, i + 1);
    }
    const std::size_t slot = static_cast<std::size_t>(q) * K + a;
    auto follow = [&](Partial& st) {
      const long d = st.target[slot];
      if (d == kNone) {
        if (has_ext[i]) return false;
        st.run_state[i] = kNone;
        return dfs(st, i + 1);
      }
      Word x = st.run_out[p] + st.out[slot];
      if (has_ext[i] && !is_prefix(x, ext_lcp[i])) return false;
      if (!settle_final(st, static_cast<std::size_t>(d), x, in_up[i], tau[i])) return false;
      st.run_state[i] = d;
      st.run_out[i] = std::move(x);
      return dfs(st, i + 1);
    };
    if (s.target[slot] != kUnassigned) {
      Partial copy = s;
      return follow(copy);
    }
    if (!has_ext[i]) {
      Partial copy = s;
      copy.target[slot] = kNone;
      if (follow(copy)) return true;
    }
    const std::size_t top = std::min(s.states + 1, k);
    for (std::size_t d = 0; d < top; ++d)
      for (const Word& o : output_choices(s.run_out[p], i)) {
        Partial copy = s;
        if (d == copy.states) ++copy.states;
        copy.target[slot] = static_cast<long>(d);
        copy.out[slot] = o;
        if (follow(copy)) return true;
      }
    return false;
  }

  void run() {
    if (k == 0 || words.empty()) {
      result.result = Search::None;
      return;
    }
    const std::vector<Word> starts =
        has_ext[0] ? [&] {
          std::vector<Word> v;
          for (std::size_t len = 0; len <= ext_lcp[0].size(); ++len) v.push_back(ext_lcp[0].substr(0, len));
          return v;
        }()
                   : free_outputs;
    for (const Word& w0 : starts) {
      Partial s;
      s.states = 1;
      s.w0 = w0;
      s.target.assign(k * K, kUnassigned);
      s.out.assign(k * K, Word{});
      s.fin.assign(k, kUnassigned);
      s.fin_out.assign(k, Word{});
      s.run_state.assign(words.size(), kNone);
      s.run_out.assign(words.size(), Word{});
      if (!settle_final(s, 0, w0, in_up[0], tau[0])) continue;
      s.run_state[0] = 0;
      s.run_out[0] = w0;
      if (dfs(s, 1)) {
        result.result = Search::Found;
        return;
      }
    }
    result.result = inconclusive ? Search::Inconclusive : Search::None;
  }
};

}  // namespace

SizeSearch find_restricted_transducer(const Transducer& target, const Dfa& up, std::size_t k,
                                      std::size_t cap, std::size_t depth) {
  const Transducer restricted = product_restrict(target, up);
  TransducerSearch s(restricted, up, k, cap, depth);
  s.run();
  return std::move(s.result);
}

MinimalSize minimal_restricted_size(const Transducer& target, const Dfa& up, const Transducer& known,
                                    std::size_t cap) {
  const Transducer restricted = product_restrict(target, up);
  if (restricted.is_empty()) return {0, true};
  if (equivalent_on(known, restricted, up))
    throw std::invalid_argument("minimal_restricted_size: known transducer differs from the target on Up");
  const std::size_t base_depth = up.alphabet().size() <= 2 ? 7 : 5;
  for (std::size_t k = 1; k < known.num_states(); ++k) {
    SizeSearch r = find_restricted_transducer(target, up, k, cap, base_depth);
    if (r.result == Search::Inconclusive) r = find_restricted_transducer(target, up, k, cap, base_depth + 2);
    if (r.result == Search::Found) return {k, true};
    if (r.result == Search::Inconclusive) return {k, false};
  }
  return {known.num_states(), true};
}

}  // namespace oracles
