#include "graylearn/merging_map.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace graylearn {

std::size_t MergingMap::num_classes() const {
  std::size_t n = 0;
  for (std::size_t b : block) n = std::max(n, b + 1);
  return n;
}

std::size_t MergingMap::size() const {
  std::vector<bool> in_dom(num_classes(), false);
  for (std::size_t i = 0; i < block.size(); ++i)
    if (f[i]) in_dom[block[i]] = true;
  return static_cast<std::size_t>(std::count(in_dom.begin(), in_dom.end(), true));
}

void MergingMap::canonicalize() {
  std::map<std::size_t, std::size_t> rename;
  for (auto& b : block) {
    auto [it, inserted] = rename.try_emplace(b, rename.size());
    b = it->second;
  }
}

namespace {

// Shared per-table lookups for one merging map.
struct View {
  const ObservationTable& t;
  const MergingMap& mm;
  const std::vector<Word>& words;
  std::size_t k;
  std::vector<std::vector<std::size_t>> members;

  View(const ObservationTable& table, const MergingMap& m)
      : t(table), mm(m), words(table.prefix_words()), k(table.input_alphabet().size()) {
    members.resize(mm.num_classes());
    for (std::size_t i = 0; i < mm.block.size(); ++i) members[mm.block[i]].push_back(i);
  }

  // Some v ≡ u with va ∈ P_Γ.
  bool class_has_gamma_successor(std::size_t cls, std::size_t a) const {
    for (std::size_t v : members[cls]) {
      const long c = t.child(v, a);
      if (c >= 0 && t.in_p_gamma(words[c])) return true;
    }
    return false;
  }
  bool class_has_successor(std::size_t cls, std::size_t a) const {
    for (std::size_t v : members[cls])
      if (t.child(v, a) >= 0) return true;
    return false;
  }
};

std::string w(const Word& x) { return show(x); }

}  // namespace

std::optional<MmViolation> validate_mm(const ObservationTable& t, const MergingMap& mm) {
  const auto& words = t.prefix_words();
  const std::size_t n = words.size();
  if (mm.block.size() != n || mm.f.size() != n)
    return MmViolation{0, "map covers " + std::to_string(mm.block.size()) + " words, P_T has " +
                              std::to_string(n)};
  const View view(t, mm);
  const Alphabet& sigma = t.input_alphabet();

  for (const auto& cls : view.members)
    for (std::size_t i : cls)
      if (mm.defined(i) != mm.defined(cls.front()))
        return MmViolation{1, "f defined on " + w(words[mm.defined(i) ? i : cls.front()]) +
                                  " but not on equivalent " +
                                  w(words[mm.defined(i) ? cls.front() : i])};

  for (std::size_t i = 0; i < n; ++i) {
    if (!t.in_p_gamma(words[i])) continue;
    if (!mm.defined(i)) return MmViolation{2, "f(" + w(words[i]) + ") undefined on P_Γ word"};
    if (!is_prefix(*mm.f[i], t.extension_lcp(words[i])))
      return MmViolation{2, "f(" + w(words[i]) + ") = " + w(*mm.f[i]) +
                                " is not a prefix of every output extending it"};
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < view.k; ++a) {
      const long c = t.child(i, a);
      if (c < 0 || !mm.defined(c)) continue;
      if (!mm.defined(i) || !is_prefix(*mm.f[i], *mm.f[c]))
        return MmViolation{3, "f(" + w(words[c]) + ") defined but f(" + w(words[i]) +
                                  ") is not a defined prefix of it"};
    }

  for (std::size_t i = 0; i < n; ++i) {
    if (!mm.defined(i)) continue;
    for (std::size_t j : view.members[mm.block[i]]) {
      if (j <= i) continue;
      for (std::size_t a = 0; a < view.k; ++a) {
        const long ci = t.child(i, a), cj = t.child(j, a);
        if (ci < 0 || cj < 0) continue;
        if (!mm.equivalent(ci, cj))
          return MmViolation{4, w(words[i]) + " ≡ " + w(words[j]) + " but " + w(words[ci]) +
                                    " ≢ " + w(words[cj])};
        if (mm.defined(ci) && mm.defined(cj) &&
            strip_prefix(*mm.f[i], *mm.f[ci]) != strip_prefix(*mm.f[j], *mm.f[cj]))
          return MmViolation{4, "outputs of " + w(words[i]) + "·" + sigma.symbol(a) + " and " +
                                    w(words[j]) + "·" + sigma.symbol(a) + " disagree"};
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const CellValue* ci = t.cell_at(i);
    if (!ci || !ci->is_output()) continue;
    for (std::size_t j : view.members[mm.block[i]]) {
      const CellValue* cj = t.cell_at(j);
      if (!cj) continue;
      if (cj->is_bottom())
        return MmViolation{5, w(words[i]) + " has an output but equivalent " + w(words[j]) +
                                  " is ⊥"};
      if (cj->is_output() &&
          strip_prefix(*mm.f[i], ci->output) != strip_prefix(*mm.f[j], cj->output))
        return MmViolation{5, "final outputs of " + w(words[i]) + " and " + w(words[j]) +
                                  " disagree"};
    }
  }

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < view.k; ++a) {
      const long c = t.child(i, a);
      if (c < 0 || !mm.defined(c)) continue;
      if (view.class_has_gamma_successor(mm.block[i], a)) continue;
      if (*mm.f[c] != *mm.f[i])
        return MmViolation{6, "muted pair (" + w(words[i]) + "," + sigma.symbol(a) +
                                  ") changes the output"};
    }
  return std::nullopt;
}

std::vector<StateId> class_states(const MergingMap& mm) {
  std::vector<StateId> state_of_class(mm.num_classes(), kNoState);
  std::vector<StateId> out(mm.num_words(), kNoState);
  StateId next = 0;
  for (std::size_t i = 0; i < mm.num_words(); ++i) {
    if (!mm.defined(i)) continue;
    auto& s = state_of_class[mm.block[i]];
    if (s == kNoState) s = next++;
    out[i] = s;
  }
  return out;
}

Transducer resulting_transducer(const ObservationTable& t, const MergingMap& mm) {
  Transducer m(t.input_alphabet(), t.output_alphabet());
  const auto& words = t.prefix_words();
  if (mm.num_words() == 0 || !mm.defined(0)) return m;
  const auto states = class_states(mm);
  StateId count = 0;
  for (StateId s : states)
    if (s != kNoState) count = std::max(count, s + 1);
  for (StateId q = 0; q < count; ++q) m.add_state();
  m.set_initial(states[0], *mm.f[0]);
  const Alphabet& sigma = t.input_alphabet();
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!mm.defined(i)) continue;
    const StateId q = states[i];
    for (std::size_t a = 0; a < sigma.size(); ++a) {
      const long c = t.child(i, a);
      if (c < 0 || !mm.defined(c)) continue;
      Word out = strip_prefix(*mm.f[i], *mm.f[c]);
      if (const auto& e = m.transition(q, a)) {
        if (e->target != states[c] || e->output != out)
          throw std::logic_error("resulting_transducer: class of " + show(words[i]) +
                                 " has conflicting transitions on " + sigma.symbol(a));
        continue;
      }
      m.set_transition(q, sigma.symbol(a), states[c], std::move(out));
    }
    if (const CellValue* cell = t.cell_at(i); cell && cell->is_output()) {
      Word fin = strip_prefix(*mm.f[i], cell->output);
      if (const auto& old = m.final_output(q)) {
        if (*old != fin)
          throw std::logic_error("resulting_transducer: class of " + show(words[i]) +
                                 " has conflicting final outputs");
        continue;
      }
      m.set_final(q, std::move(fin));
    }
  }
  return m;
}

bool is_compatible(const Transducer& m, const ObservationTable& t) {
  for (const auto& [word, cell] : t.cells()) {
    if (cell.is_hash()) continue;
    const auto out = evaluate(m, word);
    if (cell.is_bottom() ? out.has_value() : (!out || *out != cell.output)) return false;
  }
  return true;
}

MergingMap induced_mm(const ObservationTable& t, const Transducer& m) {
  if (!is_compatible(m, t)) throw std::invalid_argument("induced_mm: transducer not compatible with table");
  const auto& words = t.prefix_words();
  const std::size_t n = words.size();
  const std::size_t k = t.input_alphabet().size();
  MergingMap mm;
  mm.block.assign(n, 0);
  mm.f.assign(n, std::nullopt);
  std::vector<StateId> reached(n, kNoState);
  for (std::size_t i = 0; i < n; ++i) reached[i] = run(m, words[i]).state;

  // Class ids: one per reached state plus one shared id for words without a run.
  const std::size_t undefined_class = m.num_states();
  for (std::size_t i = 0; i < n; ++i)
    mm.block[i] = reached[i] == kNoState ? undefined_class : reached[i];

  // (state, a) is muted when no word reaching the state continues with a into P_Γ.
  std::vector<bool> gamma_succ(m.num_states() * k, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (reached[i] == kNoState) continue;
    for (std::size_t a = 0; a < k; ++a) {
      const long c = t.child(i, a);
      if (c >= 0 && t.in_p_gamma(words[c])) gamma_succ[reached[i] * k + a] = true;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (reached[i] == kNoState) continue;
    if (words[i].empty()) {
      mm.f[i] = m.initial_production();
      continue;
    }
    const std::size_t parent = *t.index_of(words[i].substr(0, words[i].size() - 1));
    const std::size_t a = *t.input_alphabet().index_of(words[i].back());
    const StateId q = reached[parent];
    mm.f[i] = gamma_succ[q * k + a] ? *mm.f[parent] + m.transition(q, a)->output : *mm.f[parent];
  }
  mm.canonicalize();
  return mm;
}

std::vector<ClassSymbol> muted_pairs(const ObservationTable& t, const MergingMap& mm) {
  const View view(t, mm);
  const Alphabet& sigma = t.input_alphabet();
  std::vector<ClassSymbol> out;
  for (std::size_t cls = 0; cls < view.members.size(); ++cls) {
    const auto& members = view.members[cls];
    if (members.empty() || !mm.defined(members.front())) continue;
    for (std::size_t a = 0; a < view.k; ++a) {
      bool has_defined_successor = false;
      for (std::size_t v : members) {
        const long c = t.child(v, a);
        if (c >= 0 && mm.defined(c)) has_defined_successor = true;
      }
      if (has_defined_successor && !view.class_has_gamma_successor(cls, a))
        out.push_back({view.words[members.front()], sigma.symbol(a)});
    }
  }
  return out;
}

std::vector<ClassSymbol> open_ends(const ObservationTable& t, const MergingMap& mm) {
  const View view(t, mm);
  const Alphabet& sigma = t.input_alphabet();
  std::vector<ClassSymbol> out;
  for (std::size_t cls = 0; cls < view.members.size(); ++cls) {
    const auto& members = view.members[cls];
    if (members.empty() || !mm.defined(members.front())) continue;
    for (std::size_t a = 0; a < view.k; ++a)
      if (!view.class_has_successor(cls, a))
        out.push_back({view.words[members.front()], sigma.symbol(a)});
  }
  return out;
}

Transducer open_completion(const ObservationTable& t, const MergingMap& mm,
                           const std::vector<OpenTransition>& added) {
  Transducer m = resulting_transducer(t, mm);
  const auto states = class_states(mm);
  const auto ends = open_ends(t, mm);
  for (const auto& tr : added) {
    const auto from = t.index_of(tr.from);
    const auto to = t.index_of(tr.to);
    if (!from || !to || states[*from] == kNoState || states[*to] == kNoState)
      throw std::invalid_argument("open_completion: endpoints must be words of state classes");
    const Word& rep = t.prefix_words()[std::distance(
        states.begin(), std::find(states.begin(), states.end(), states[*from]))];
    if (std::find(ends.begin(), ends.end(), ClassSymbol{rep, tr.symbol}) == ends.end())
      throw std::invalid_argument("open_completion: (" + show(tr.from) + "," + tr.symbol +
                                  ") is not an open end");
    if (m.transition(states[*from], tr.symbol))
      throw std::invalid_argument("open_completion: two transitions on one open end");
    m.set_transition(states[*from], tr.symbol, states[*to], Word{});
  }
  return m;
}

std::string describe(const ObservationTable& t, const MergingMap& mm) {
  const View view(t, mm);
  std::ostringstream out;
  for (const auto& members : view.members) {
    if (members.empty()) continue;
    out << '{';
    for (std::size_t i = 0; i < members.size(); ++i)
      out << (i ? "," : "") << show(view.words[members[i]]);
    out << "} rep=" << show(view.words[members.front()]) << " f=";
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& f = mm.f[members[i]];
      out << (i ? "," : "") << (f ? show(*f) : "⊥");
    }
    out << '\n';
  }
  out << "muted:";
  for (const auto& p : muted_pairs(t, mm)) out << " (" << show(p.word) << ',' << p.symbol << ')';
  out << "\nopen:";
  for (const auto& p : open_ends(t, mm)) out << " (" << show(p.word) << ',' << p.symbol << ')';
  out << '\n';
  return out.str();
}

}  // namespace graylearn
