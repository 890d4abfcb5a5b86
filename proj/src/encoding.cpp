#include "graylearn/encoding.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace graylearn {

Encoder::Encoder(CnfInstance& cnf) : cnf_(cnf), yes_(cnf.new_var("true")) {
  cnf_.add_clause({yes_});
}

void Encoder::clause(std::vector<Lit> lits) {
  std::vector<Lit> kept;
  kept.reserve(lits.size());
  for (Lit l : lits) {
    if (l == yes_) return;
    if (l == -yes_) continue;
    kept.push_back(l);
  }
  cnf_.add_clause(kept);
}

void Encoder::implies(const std::vector<Lit>& cond, std::vector<Lit> consequent) {
  for (Lit c : cond) consequent.push_back(-c);
  clause(std::move(consequent));
}

void Encoder::at_most_one(const std::vector<Lit>& lits) {
  if (lits.size() <= 5) {
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j) clause({-lits[i], -lits[j]});
    return;
  }
  // Sequential counter: s[i] ⇔ some of lits[0..i] holds.
  Var prev = fresh();
  clause({-lits[0], prev});
  for (std::size_t i = 1; i < lits.size(); ++i) {
    clause({-lits[i], -prev});
    if (i + 1 == lits.size()) break;
    Var next = fresh();
    clause({-prev, next});
    clause({-lits[i], next});
    prev = next;
  }
}

void Encoder::exactly_one(const std::vector<Lit>& lits) {
  clause(lits);
  at_most_one(lits);
}

Var Encoder::or_of(const std::vector<Lit>& lits, std::string name) {
  const Var v = fresh(std::move(name));
  std::vector<Lit> big{-v};
  for (Lit l : lits) {
    clause({-l, v});
    big.push_back(l);
  }
  clause(std::move(big));
  return v;
}

Var Encoder::and_of(const std::vector<Lit>& lits, std::string name) {
  const Var v = fresh(std::move(name));
  std::vector<Lit> big{v};
  for (Lit l : lits) {
    clause({-v, l});
    big.push_back(-l);
  }
  clause(std::move(big));
  return v;
}

WordVar Encoder::word(std::string name, std::size_t max_len, std::size_t arity) {
  WordVar w;
  w.max_len = max_len;
  w.arity = arity;
  for (std::size_t j = 0; j < max_len; ++j) w.ge.push_back(fresh(name + ".len>" + std::to_string(j)));
  for (std::size_t j = 0; j < max_len; ++j)
    for (std::size_t s = 0; s < arity; ++s)
      w.sym.push_back(fresh(name + "[" + std::to_string(j) + "]=" + std::to_string(s)));
  w.eq.assign(max_len + 1, 0);
  for (std::size_t j = 1; j < max_len; ++j) clause({-w.ge[j], w.ge[j - 1]});
  for (std::size_t j = 0; j < max_len; ++j) {
    std::vector<Lit> row;
    for (std::size_t s = 0; s < arity; ++s) {
      row.push_back(w.symbol(j, s));
      clause({-w.symbol(j, s), w.ge[j]});
    }
    at_most_one(row);
    row.push_back(-w.ge[j]);
    clause(row);
  }
  w.name = std::move(name);
  return w;
}

Lit Encoder::len_ge(const WordVar& w, std::size_t j) const {
  if (j == 0) return yes();
  if (j > w.max_len) return no();
  return w.ge[j - 1];
}

Lit Encoder::len_is(WordVar& w, std::size_t p) {
  if (p > w.max_len) return no();
  if (!w.eq[p]) w.eq[p] = and_of({len_ge(w, p), -len_ge(w, p + 1)}, w.name + ".len=" + std::to_string(p));
  return w.eq[p];
}

void Encoder::force_const(const std::vector<Lit>& cond, const WordVar& w,
                          const std::vector<std::size_t>& value) {
  if (value.size() > w.max_len) {
    implies(cond, {});
    return;
  }
  implies(cond, {len_ge(w, value.size())});
  implies(cond, {-len_ge(w, value.size() + 1)});
  for (std::size_t j = 0; j < value.size(); ++j) implies(cond, {w.symbol(j, value[j])});
}

void Encoder::force_equal(const std::vector<Lit>& cond, const WordVar& a, const WordVar& b) {
  const std::size_t top = std::max(a.max_len, b.max_len);
  for (std::size_t j = 1; j <= top; ++j) {
    std::vector<Lit> c = cond;
    c.push_back(len_ge(a, j));
    implies(c, {len_ge(b, j)});
    c.back() = len_ge(b, j);
    implies(c, {len_ge(a, j)});
  }
  const std::size_t common = std::min(a.max_len, b.max_len);
  for (std::size_t j = 0; j < common; ++j)
    for (std::size_t s = 0; s < a.arity; ++s) {
      std::vector<Lit> c = cond;
      c.push_back(a.symbol(j, s));
      implies(c, {b.symbol(j, s)});
      c.back() = b.symbol(j, s);
      implies(c, {a.symbol(j, s)});
    }
}

void Encoder::concat(WordVar& a, const WordVar& b, const WordVar& c) {
  if (c.max_len < a.max_len + b.max_len) throw std::logic_error("concat: target too short");
  for (std::size_t j = 0; j < a.max_len; ++j)
    for (std::size_t s = 0; s < a.arity; ++s) clause({-a.symbol(j, s), c.symbol(j, s)});
  for (std::size_t p = 0; p <= a.max_len; ++p) {
    const Lit at = len_is(a, p);
    for (std::size_t q = 0; q <= b.max_len + 1; ++q) {
      clause({-at, -len_ge(b, q), len_ge(c, p + q)});
      clause({-at, len_ge(b, q), -len_ge(c, p + q)});
    }
    for (std::size_t q = 0; q < b.max_len; ++q)
      for (std::size_t s = 0; s < b.arity; ++s)
        clause({-at, -b.symbol(q, s), c.symbol(p + q, s)});
  }
}

void Encoder::words_differ(const WordVar& a, const WordVar& b) {
  const std::size_t top = std::max(a.max_len, b.max_len);
  std::vector<Lit> some;
  for (std::size_t j = 0; j < top; ++j) {
    const Var d = fresh("diff@" + std::to_string(j));
    some.push_back(d);
    clause({-d, len_ge(a, j + 1), len_ge(b, j + 1)});
    if (j < a.max_len && j < b.max_len)
      for (std::size_t s = 0; s < a.arity; ++s) clause({-d, -a.symbol(j, s), -b.symbol(j, s)});
  }
  clause(std::move(some));
}

namespace {

std::vector<std::size_t> indices(const Alphabet& gamma, std::string_view w) {
  std::vector<std::size_t> out;
  out.reserve(w.size());
  for (char c : w) out.push_back(*gamma.index_of(c));
  return out;
}

std::size_t decode_length(const WordVar& w, const Model& m) {
  std::size_t len = 0;
  while (len < w.max_len && m.value(w.ge[len])) ++len;
  return len;
}

Word decode_word(const WordVar& w, const Alphabet& gamma, const Model& m) {
  Word out;
  const std::size_t len = decode_length(w, m);
  for (std::size_t j = 0; j < len; ++j)
    for (std::size_t s = 0; s < w.arity; ++s)
      if (m.value(w.symbol(j, s))) out += gamma.symbol(s);
  return out;
}

std::string id(std::size_t x) { return std::to_string(x); }

}  // namespace

MmVars encode_mm(Encoder& enc, const ObservationTable& t, std::size_t n,
                 const EncodingOptions& options, const std::string& tag) {
  const auto& words = t.prefix_words();
  const std::size_t N = words.size();
  const std::size_t k = t.input_alphabet().size();
  const Alphabet& gamma = t.output_alphabet();
  const std::size_t maxout = t.max_cell_length();
  if (n == 0) throw std::invalid_argument("encode_mm: n must be positive");

  MmVars mm;
  mm.n = n;
  mm.k = k;
  std::vector<bool> pg(N);
  for (std::size_t i = 0; i < N; ++i) pg[i] = t.in_p_gamma(words[i]);

  mm.def.resize(N);
  mm.cls.assign(N, {});
  for (std::size_t i = 0; i < N; ++i) {
    const std::string w = tag + show(words[i]);
    mm.def[i] = enc.fresh("def(" + w + ")");
    for (std::size_t c = 0; c < n; ++c) mm.cls[i].push_back(enc.fresh("cls(" + w + ")=" + id(c)));
    std::vector<Lit> row(mm.cls[i].begin(), mm.cls[i].end());
    for (Lit l : row) enc.clause({-l, mm.def[i]});
    enc.at_most_one(row);
    row.push_back(-mm.def[i]);
    enc.clause(row);
    if (pg[i]) enc.clause({mm.def[i]});
  }

  // any[i][c]: class c is used by some word ≤ i.
  std::vector<std::vector<Var>> any(N, std::vector<Var>(n));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<Lit> parts{mm.cls[i][c]};
      if (i > 0) parts.push_back(any[i - 1][c]);
      any[i][c] = enc.or_of(parts);
      if (options.symmetry_breaking && c > 0)
        enc.clause(i == 0 ? std::vector<Lit>{-mm.cls[i][c]}
                          : std::vector<Lit>{-mm.cls[i][c], any[i - 1][c - 1]});
    }
  mm.used = any[N - 1];

  mm.f_ge.assign(N, {});
  mm.f_eq.assign(N, {});
  for (std::size_t i = 0; i < N; ++i) {
    if (!pg[i]) continue;
    const std::size_t len = t.extension_lcp(words[i]).size();
    for (std::size_t p = 1; p <= len; ++p) {
      mm.f_ge[i].push_back(enc.fresh("|f(" + tag + show(words[i]) + ")|>=" + id(p)));
      if (p > 1) enc.clause({-mm.f_ge[i][p - 1], mm.f_ge[i][p - 2]});
    }
    for (std::size_t p = 0; p <= len; ++p) {
      const Lit ge = p == 0 ? enc.yes() : mm.f_ge[i][p - 1];
      const Lit gt = p == len ? enc.no() : mm.f_ge[i][p];
      mm.f_eq[i].push_back(enc.and_of({ge, -gt}));
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t a = 0; a < k; ++a)
      mm.out.push_back(enc.word(tag + "out" + id(c) + "," + id(a), maxout, gamma.size()));
    mm.fin.push_back(enc.word(tag + "fin" + id(c), maxout, gamma.size()));
    mm.has_fin.push_back(enc.fresh(tag + "hasfin" + id(c)));
  }
  mm.trans.resize(n * k * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<Lit> row;
      for (std::size_t d = 0; d < n; ++d) {
        mm.trans[(c * k + a) * n + d] = enc.fresh(tag + "t" + id(c) + "," + id(a) + "->" + id(d));
        row.push_back(mm.trans[(c * k + a) * n + d]);
      }
      enc.at_most_one(row);
      mm.has_trans.push_back(enc.or_of(row));
      mm.gamma_succ.push_back(enc.fresh());
      mm.any_succ.push_back(enc.fresh());
      mm.dead.push_back(enc.fresh());
    }

  // Members per (class-independent) symbol: words with an a-child, and with an a-child in P_Γ.
  std::vector<std::vector<std::size_t>> with_child(k), with_gamma_child(k);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t a = 0; a < k; ++a) {
      const long j = t.child(i, a);
      if (j < 0) continue;
      with_child[a].push_back(i);
      if (pg[j]) with_gamma_child[a].push_back(i);
    }

  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t a = 0; a < k; ++a) {
      const long jl = t.child(i, a);
      if (jl < 0) continue;
      const auto j = static_cast<std::size_t>(jl);
      enc.clause({-mm.def[j], mm.def[i]});
      if (pg[j])
        for (std::size_t p = 0; p < mm.f_ge[i].size(); ++p) enc.clause({-mm.f_ge[i][p], mm.f_ge[j][p]});
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t ca = c * k + a;
        enc.clause({-mm.cls[i][c], mm.any_succ[ca]});
        enc.clause({-mm.cls[i][c], mm.def[j], mm.dead[ca]});
        for (std::size_t d = 0; d < n; ++d) enc.clause({-mm.cls[i][c], -mm.cls[j][d], mm.t(c, a, d)});
        if (!pg[j]) continue;
        enc.clause({-mm.cls[i][c], mm.gamma_succ[ca]});
        const Word& lj = t.extension_lcp(words[j]);
        for (std::size_t p = 0; p < mm.f_eq[i].size(); ++p)
          for (std::size_t q = p; q < mm.f_eq[j].size(); ++q)
            enc.force_const({mm.cls[i][c], mm.f_eq[i][p], mm.f_eq[j][q]}, mm.out[ca],
                            indices(gamma, std::string_view(lj).substr(p, q - p)));
      }
    }

  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t ca = c * k + a;
      std::vector<Lit> members{-mm.any_succ[ca]};
      for (std::size_t i : with_child[a]) members.push_back(mm.cls[i][c]);
      enc.clause(members);
      std::vector<Lit> gmembers{-mm.gamma_succ[ca]};
      for (std::size_t i : with_gamma_child[a]) gmembers.push_back(mm.cls[i][c]);
      enc.clause(gmembers);
      for (std::size_t d = 0; d < n; ++d) {
        enc.clause({-mm.t(c, a, d), mm.any_succ[ca]});
        enc.clause({-mm.t(c, a, d), -mm.dead[ca]});
      }
      if (maxout > 0) enc.clause({mm.gamma_succ[ca], -mm.out[ca].ge[0]});
    }

  for (std::size_t c = 0; c < n; ++c) {
    std::vector<Lit> finals{-mm.has_fin[c]};
    for (std::size_t i = 0; i < N; ++i) {
      const CellValue* cell = t.cell_at(i);
      if (!cell) continue;
      if (cell->is_bottom()) enc.clause({-mm.cls[i][c], -mm.has_fin[c]});
      if (!cell->is_output()) continue;
      finals.push_back(mm.cls[i][c]);
      enc.clause({-mm.cls[i][c], mm.has_fin[c]});
      for (std::size_t p = 0; p < mm.f_eq[i].size(); ++p)
        enc.force_const({mm.cls[i][c], mm.f_eq[i][p]}, mm.fin[c],
                        indices(gamma, std::string_view(cell->output).substr(p)));
    }
    enc.clause(finals);
    if (maxout > 0) enc.clause({mm.has_fin[c], -mm.fin[c].ge[0]});
  }

  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t ca = c * k + a;
      mm.open.push_back(enc.and_of({mm.used[c], -mm.any_succ[ca]}, tag + "open" + id(c) + "," + id(a)));
      mm.muted.push_back(
          enc.and_of({mm.has_trans[ca], -mm.gamma_succ[ca]}, tag + "muted" + id(c) + "," + id(a)));
    }

  if (options.pairwise_equivalence) {
    mm.pair_eq.assign(N, {});
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i + 1; j < N; ++j) {
        const Var e = enc.fresh("E(" + tag + show(words[i]) + "," + show(words[j]) + ")");
        mm.pair_eq[i].push_back(e);
        enc.clause({mm.def[i], mm.def[j], e});
        enc.clause({-e, mm.def[i], -mm.def[j]});
        enc.clause({-e, -mm.def[i], mm.def[j]});
        for (std::size_t c = 0; c < n; ++c) {
          enc.clause({-mm.cls[i][c], -mm.cls[j][c], e});
          enc.clause({-e, -mm.cls[i][c], mm.cls[j][c]});
          enc.clause({-e, -mm.cls[j][c], mm.cls[i][c]});
        }
      }
  }
  return mm;
}

namespace {

// SAT class index of every word, n for words outside dom(f).
std::vector<std::size_t> decode_classes(const MmVars& mm, const Model& m) {
  std::vector<std::size_t> out(mm.def.size(), mm.n);
  for (std::size_t i = 0; i < mm.def.size(); ++i) {
    if (!m.value(mm.def[i])) continue;
    for (std::size_t c = 0; c < mm.n; ++c)
      if (m.value(mm.cls[i][c])) out[i] = c;
  }
  return out;
}

}  // namespace

MergingMap decode_mm(const ObservationTable& t, const MmVars& mm, const Model& model) {
  const auto& words = t.prefix_words();
  const std::size_t N = words.size();
  const Alphabet& sigma = t.input_alphabet();
  MergingMap out;
  out.block = decode_classes(mm, model);
  out.f.assign(N, std::nullopt);
  for (std::size_t i = 0; i < N; ++i) {
    if (out.block[i] == mm.n) continue;
    if (!mm.f_eq[i].empty()) {
      std::size_t len = 0;
      while (len < mm.f_ge[i].size() && model.value(mm.f_ge[i][len])) ++len;
      out.f[i] = t.extension_lcp(words[i]).substr(0, len);
    } else if (words[i].empty()) {
      out.f[i] = Word{};
    } else {
      const std::size_t parent = *t.index_of(words[i].substr(0, words[i].size() - 1));
      if (!out.f[parent]) throw std::logic_error("decode_mm: defined word with undefined parent");
      const std::size_t a = *sigma.index_of(words[i].back());
      out.f[i] = *out.f[parent] + decode_word(mm.out[out.block[parent] * mm.k + a],
                                              t.output_alphabet(), model);
    }
  }
  out.canonicalize();
  return out;
}

std::vector<Lit> transducer_literals(const MmVars& mm, const Model& model, const Dfa* up) {
  std::vector<Lit> out;
  auto keep = [&](Var v) { out.push_back(model.value(v) ? v : -v); };
  auto word = [&](const WordVar& w) {
    for (Var v : w.ge) keep(v);
    for (Var v : w.sym)
      if (model.value(v)) out.push_back(v);
  };
  const std::size_t n = mm.n, k = mm.k;
  auto target = [&](std::size_t c, std::size_t a) -> std::size_t {
    if (!model.value(mm.has_trans[c * k + a])) return n;
    for (std::size_t d = 0; d < n; ++d)
      if (model.value(mm.t(c, a, d))) return d;
    return n;
  };
  keep(mm.def[0]);
  for (Var v : mm.f_eq[0])
    if (model.value(v)) out.push_back(v);

  if (!up) {
    for (std::size_t c = 0; c < n; ++c) {
      keep(mm.used[c]);
      if (!model.value(mm.used[c])) continue;
      keep(mm.has_fin[c]);
      if (model.value(mm.has_fin[c])) word(mm.fin[c]);
      for (std::size_t a = 0; a < k; ++a) {
        keep(mm.has_trans[c * k + a]);
        const std::size_t d = target(c, a);
        if (d == n) continue;
        keep(mm.t(c, a, d));
        word(mm.out[c * k + a]);
      }
    }
    return out;
  }
  if (!model.value(mm.def[0])) return out;

  // Only the part of the transducer read by words of L(up) matters.
  const std::size_t P = up->num_states();
  std::vector<bool> live(P);
  for (StateId p = 0; p < P; ++p) live[p] = up->is_accepting(p);
  for (bool grew = true; grew;) {
    grew = false;
    for (StateId p = 0; p < P; ++p)
      for (std::size_t a = 0; a < k && !live[p]; ++a)
        if (live[up->next(p, a)]) live[p] = grew = true;
  }
  std::size_t c0 = 0;
  while (c0 < n && !model.value(mm.cls[0][c0])) ++c0;
  if (c0 == n || !live[up->initial_state()]) return out;
  out.push_back(mm.cls[0][c0]);

  auto cfg = [&](std::size_t c, StateId p) { return c * P + p; };
  std::vector<bool> reached(n * P, false), coacc(n * P, false);
  std::vector<std::size_t> stack{cfg(c0, up->initial_state())};
  reached[stack.back()] = true;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    const std::size_t c = x / P;
    const StateId p = static_cast<StateId>(x % P);
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t d = target(c, a);
      const StateId q = up->next(p, a);
      if (d == n || !live[q] || reached[cfg(d, q)]) continue;
      reached[cfg(d, q)] = true;
      stack.push_back(cfg(d, q));
    }
  }
  for (std::size_t x = 0; x < n * P; ++x)
    coacc[x] = reached[x] && up->is_accepting(static_cast<StateId>(x % P)) && model.value(mm.has_fin[x / P]);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t x = 0; x < n * P; ++x) {
      if (!reached[x] || coacc[x]) continue;
      for (std::size_t a = 0; a < k && !coacc[x]; ++a) {
        const std::size_t d = target(x / P, a);
        if (d != n && coacc[cfg(d, up->next(static_cast<StateId>(x % P), a))]) coacc[x] = grew = true;
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    bool final_seen = false;
    for (std::size_t a = 0; a < k; ++a) {
      bool relevant = false, output_matters = false;
      const std::size_t d = target(c, a);
      for (StateId p = 0; p < P; ++p) {
        if (!reached[cfg(c, p)]) continue;
        const StateId q = up->next(p, a);
        if (!live[q]) continue;
        relevant = true;
        if (d != n && coacc[cfg(d, q)]) output_matters = true;
      }
      if (!relevant) continue;
      keep(mm.has_trans[c * k + a]);
      if (d == n) continue;
      keep(mm.t(c, a, d));
      if (output_matters) word(mm.out[c * k + a]);
    }
    for (StateId p = 0; p < P; ++p)
      if (reached[cfg(c, p)] && up->is_accepting(p)) final_seen = true;
    if (!final_seen) continue;
    keep(mm.has_fin[c]);
    if (model.value(mm.has_fin[c])) word(mm.fin[c]);
  }
  return out;
}

void fix_mm(Encoder& enc, const ObservationTable& t, const MmVars& vars, const MergingMap& mm) {
  const std::size_t N = t.prefix_words().size();
  if (mm.num_words() != N) throw std::invalid_argument("fix_mm: map does not match the table");
  for (std::size_t i = 0; i < N; ++i) {
    enc.clause({mm.defined(i) ? vars.def[i] : -vars.def[i]});
    if (!mm.defined(i)) continue;
    if (!vars.f_eq[i].empty()) {
      const std::size_t len = mm.f[i]->size();
      enc.clause({len < vars.f_eq[i].size() ? vars.f_eq[i][len] : enc.no()});
    }
    for (std::size_t j = i + 1; j < N; ++j) {
      if (!mm.defined(j)) continue;
      for (std::size_t c = 0; c < vars.n; ++c) {
        if (mm.equivalent(i, j)) {
          enc.clause({-vars.cls[i][c], vars.cls[j][c]});
        } else {
          enc.clause({-vars.cls[i][c], -vars.cls[j][c]});
        }
      }
    }
  }
}

InputVars encode_input(Encoder& enc, const Alphabet& sigma, std::size_t max_len) {
  InputVars u;
  u.max_len = max_len;
  u.k = sigma.size();
  for (std::size_t i = 0; i < max_len; ++i) {
    u.active.push_back(enc.fresh("u.len>" + id(i)));
    if (i > 0) enc.clause({-u.active[i], u.active[i - 1]});
    std::vector<Lit> row;
    for (std::size_t a = 0; a < u.k; ++a) {
      u.sym.push_back(enc.fresh("u[" + id(i) + "]=" + sigma.symbol(a)));
      row.push_back(u.sym.back());
      enc.clause({-u.sym.back(), u.active[i]});
    }
    enc.at_most_one(row);
    row.push_back(-u.active[i]);
    enc.clause(row);
  }
  return u;
}

void fix_input(Encoder& enc, const InputVars& u, const Alphabet& sigma, const Word& w) {
  if (w.size() > u.max_len) {
    enc.clause({});
    return;
  }
  for (std::size_t i = 0; i < u.max_len; ++i) {
    if (i < w.size()) {
      enc.clause({u.x(i, *sigma.index_of(w[i]))});
    } else {
      enc.clause({-u.active[i]});
    }
  }
}

Word decode_input(const InputVars& u, const Alphabet& sigma, const Model& model) {
  Word w;
  for (std::size_t i = 0; i < u.max_len && model.value(u.active[i]); ++i)
    for (std::size_t a = 0; a < u.k; ++a)
      if (model.value(u.x(i, a))) w += sigma.symbol(a);
  return w;
}

void encode_phi_up(Encoder& enc, const InputVars& u, const Dfa& up) {
  const std::size_t D = up.num_states();
  std::vector<Var> prev(D);
  for (std::size_t p = 0; p < D; ++p) {
    prev[p] = enc.fresh("up0=" + id(p));
    enc.clause({p == up.initial_state() ? prev[p] : -prev[p]});
  }
  for (std::size_t i = 0; i < u.max_len; ++i) {
    std::vector<Var> next(D);
    std::vector<Lit> row;
    for (std::size_t p = 0; p < D; ++p) {
      next[p] = enc.fresh("up" + id(i + 1) + "=" + id(p));
      row.push_back(next[p]);
    }
    enc.at_most_one(row);
    for (std::size_t p = 0; p < D; ++p) {
      enc.clause({u.active[i], -prev[p], next[p]});
      for (std::size_t a = 0; a < u.k; ++a) enc.clause({-u.x(i, a), -prev[p], next[up.next(p, a)]});
    }
    prev = std::move(next);
  }
  for (std::size_t p = 0; p < D; ++p)
    if (!up.is_accepting(p)) enc.clause({-prev[p]});
}

namespace {

std::vector<std::vector<Var>> run_states(Encoder& enc, std::size_t steps, std::size_t width,
                                         const std::string& tag) {
  std::vector<std::vector<Var>> s(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    std::vector<Lit> row;
    for (std::size_t c = 0; c < width; ++c) {
      s[i].push_back(enc.fresh(tag + id(i) + "=" + id(c)));
      row.push_back(s[i].back());
    }
    enc.at_most_one(row);
  }
  return s;
}

}  // namespace

RunVars encode_phi_run(Encoder& enc, const ObservationTable& t, MmVars& mm, const InputVars& u,
                       RunOutput output) {
  const std::size_t n = mm.n, k = mm.k, L = u.max_len;
  RunVars r;
  r.state = run_states(enc, L, n, "run");
  enc.clause({mm.def[0]});
  for (std::size_t c = 0; c < n; ++c) enc.clause({-mm.cls[0][c], r.state[0][c]});
  for (std::size_t i = 0; i < L; ++i)
    for (std::size_t c = 0; c < n; ++c) {
      enc.clause({u.active[i], -r.state[i][c], r.state[i + 1][c]});
      for (std::size_t a = 0; a < k; ++a) {
        enc.clause({-u.x(i, a), -r.state[i][c], mm.has_trans[c * k + a]});
        for (std::size_t d = 0; d < n; ++d)
          enc.clause({-u.x(i, a), -r.state[i][c], -mm.t(c, a, d), r.state[i + 1][d]});
      }
    }
  for (std::size_t c = 0; c < n; ++c) enc.clause({-r.state[L][c], mm.has_fin[c]});
  if (output == RunOutput::None) return r;

  const Alphabet& gamma = t.output_alphabet();
  const std::size_t maxout = t.max_cell_length();
  const Word& l0 = t.extension_lcp(Word{});
  WordVar w0 = enc.word("w0", l0.size(), gamma.size());
  if (mm.f_eq[0].empty()) {
    enc.force_const({}, w0, {});
  } else {
    for (std::size_t p = 0; p < mm.f_eq[0].size(); ++p)
      enc.force_const({mm.f_eq[0][p]}, w0, indices(gamma, std::string_view(l0).substr(0, p)));
  }
  r.segments.push_back(std::move(w0));
  for (std::size_t i = 0; i < L; ++i) {
    WordVar seg = enc.word("seg" + id(i), maxout, gamma.size());
    enc.force_const({-u.active[i]}, seg, {});
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t a = 0; a < k; ++a) enc.force_equal({u.x(i, a), r.state[i][c]}, seg, mm.out[c * k + a]);
    r.segments.push_back(std::move(seg));
  }
  WordVar fin = enc.word("finseg", maxout, gamma.size());
  for (std::size_t c = 0; c < n; ++c) enc.force_equal({r.state[L][c]}, fin, mm.fin[c]);
  r.segments.push_back(std::move(fin));
  if (output == RunOutput::Segments) return r;

  WordVar acc = r.segments.front();
  for (std::size_t i = 1; i < r.segments.size(); ++i) {
    WordVar next = enc.word("w" + id(i), acc.max_len + r.segments[i].max_len, gamma.size());
    enc.concat(acc, r.segments[i], next);
    acc = std::move(next);
  }
  r.output = std::move(acc);
  return r;
}

namespace {

// Comparison state after both outputs have been read up to the same input
// position: the longer one exceeds the shorter by `rest`, on side `lead`
// (true = left, also used whenever rest is empty). `div` marks a position
// where the outputs already disagree.
struct Lag {
  Var lead = 0;
  WordVar rest;
  Var div = 0;
};

Lag lag_step(Encoder& enc, Lag& s, const WordVar& x, const WordVar& y, std::size_t bound,
             const std::string& name) {
  const std::size_t m = std::max(x.max_len, y.max_len), g = x.arity;
  WordVar ahead = enc.word(name + ".P", m, g), behind = enc.word(name + ".Q", m, g);
  enc.force_equal({s.lead}, ahead, x);
  enc.force_equal({-s.lead}, ahead, y);
  enc.force_equal({s.lead}, behind, y);
  enc.force_equal({-s.lead}, behind, x);
  WordVar z = enc.word(name + ".z", s.rest.max_len + m, g);
  enc.concat(s.rest, ahead, z);

  Lag nx{enc.fresh(name + ".lead"), enc.word(name + ".r", bound, g), enc.fresh(name + ".div")};
  const Lit div = nx.div;
  enc.clause({-s.div, div});
  std::vector<Lit> why{-div, s.div};
  for (std::size_t j = 0; j < m; ++j) {
    const Var mis = enc.fresh(name + ".mis" + id(j));
    why.push_back(mis);
    enc.clause({-mis, enc.len_ge(z, j + 1)});
    enc.clause({-mis, enc.len_ge(behind, j + 1)});
    for (std::size_t a = 0; a < g; ++a) {
      enc.clause({-mis, -z.symbol(j, a), -behind.symbol(j, a)});
      enc.clause({div, -behind.symbol(j, a), -enc.len_ge(z, j + 1), z.symbol(j, a)});
    }
  }
  enc.clause(why);

  auto copy = [&](Lit c1, Lit c2, const WordVar& from, std::size_t offset) {
    for (std::size_t j = 0; j <= bound; ++j) {
      const Lit src = enc.len_ge(from, offset + j + 1), dst = enc.len_ge(nx.rest, j + 1);
      enc.clause({div, -c1, -c2, -src, dst});
      enc.clause({div, -c1, -c2, src, -dst});
      if (j < bound && offset + j < from.max_len)
        for (std::size_t a = 0; a < g; ++a)
          enc.clause({div, -c1, -c2, -from.symbol(offset + j, a), nx.rest.symbol(j, a)});
    }
  };
  // |z| ≥ |Q| = q: the same side stays ahead by z[q..], or nobody is.
  for (std::size_t q = 0; q <= m; ++q) {
    const Lit bq = enc.len_is(behind, q), zq = enc.len_ge(z, q);
    copy(bq, zq, z, q);
    const Lit longer = enc.len_ge(z, q + 1);
    enc.clause({div, -bq, -longer, -s.lead, nx.lead});
    enc.clause({div, -bq, -longer, s.lead, -nx.lead});
    enc.clause({div, -bq, -zq, longer, nx.lead});
  }
  // |z| = p < |Q|: the other side takes the lead by Q[p..].
  for (std::size_t p = 0; p < m; ++p) {
    const Lit zp = enc.len_is(z, p), shorter = enc.len_ge(behind, p + 1);
    copy(zp, shorter, behind, p);
    enc.clause({div, -zp, -shorter, -s.lead, -nx.lead});
    enc.clause({div, -zp, -shorter, s.lead, nx.lead});
  }
  return nx;
}

}  // namespace

void encode_outputs_differ(Encoder& enc, const std::vector<WordVar>& left,
                           const std::vector<WordVar>& right) {
  if (left.size() != right.size()) throw std::logic_error("encode_outputs_differ: segment counts differ");
  std::size_t bound = 0;
  Lag s{enc.fresh("lag0.lead"), enc.word("lag0.r", 0, left.front().arity), enc.fresh("lag0.div")};
  enc.clause({s.lead});
  enc.clause({-s.div});
  for (std::size_t i = 0; i < left.size(); ++i) {
    bound += std::max(left[i].max_len, right[i].max_len);
    s = lag_step(enc, s, left[i], right[i], bound, "lag" + id(i + 1));
  }
  enc.clause({s.div, enc.len_ge(s.rest, 1)});
}

RunVars encode_phi_not_run(Encoder& enc, const MmVars& mm, const InputVars& u) {
  const std::size_t n = mm.n, k = mm.k, L = u.max_len;
  RunVars r;
  r.state = run_states(enc, L, n + 1, "rej");
  for (std::size_t c = 0; c < n; ++c) enc.clause({-mm.cls[0][c], r.state[0][c]});
  enc.clause({mm.def[0], r.state[0][n]});
  for (std::size_t i = 0; i < L; ++i) {
    enc.clause({-r.state[i][n], r.state[i + 1][n]});
    for (std::size_t c = 0; c < n; ++c) {
      enc.clause({u.active[i], -r.state[i][c], r.state[i + 1][c]});
      for (std::size_t a = 0; a < k; ++a) {
        enc.clause({-u.x(i, a), -r.state[i][c], mm.has_trans[c * k + a], r.state[i + 1][n]});
        for (std::size_t d = 0; d < n; ++d)
          enc.clause({-u.x(i, a), -r.state[i][c], -mm.t(c, a, d), r.state[i + 1][d]});
      }
    }
  }
  for (std::size_t c = 0; c < n; ++c) enc.clause({-r.state[L][c], -mm.has_fin[c]});
  return r;
}

MoVars encode_phi_mo(Encoder& enc, const MmVars& mm, const InputVars& u) {
  const std::size_t n = mm.n, k = mm.k, L = u.max_len;
  MoVars mo;
  mo.run.state = run_states(enc, L, n, "mo");
  enc.clause({mm.def[0]});
  for (std::size_t c = 0; c < n; ++c) enc.clause({-mm.cls[0][c], mo.run.state[0][c]});

  mo.open_target.resize(n * k * n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<Lit> row;
      for (std::size_t d = 0; d < n; ++d) {
        const Var v = enc.fresh("ot" + id(c) + "," + id(a) + "->" + id(d));
        mo.open_target[(c * k + a) * n + d] = v;
        row.push_back(v);
        enc.clause({-v, mm.open[c * k + a]});
        enc.clause({-v, mm.used[d]});
      }
      enc.at_most_one(row);
    }

  for (std::size_t i = 0; i < L; ++i) {
    const Var flag = enc.fresh("flag" + id(i));
    mo.flagged.push_back(flag);
    enc.clause({-flag, u.active[i]});
    std::vector<Lit> reasons{-flag};
    for (std::size_t c = 0; c < n; ++c) {
      enc.clause({u.active[i], -mo.run.state[i][c], mo.run.state[i + 1][c]});
      for (std::size_t a = 0; a < k; ++a) {
        const std::size_t ca = c * k + a;
        const Lit x = u.x(i, a), s = mo.run.state[i][c];
        enc.clause({-x, -s, mm.has_trans[ca], mm.open[ca]});
        std::vector<Lit> targets{-x, -s, -mm.open[ca]};
        for (std::size_t d = 0; d < n; ++d) {
          enc.clause({-x, -s, -mm.t(c, a, d), mo.run.state[i + 1][d]});
          const Var ot = mo.open_target[ca * n + d];
          enc.clause({-x, -s, -ot, mo.run.state[i + 1][d]});
          targets.push_back(ot);
        }
        enc.clause(targets);
        const Var y = enc.fresh();
        enc.clause({-y, s});
        enc.clause({-y, x});
        enc.clause({-y, mm.open[ca], mm.muted[ca]});
        reasons.push_back(y);
      }
    }
    enc.clause(reasons);
  }
  enc.clause(std::vector<Lit>(mo.flagged.begin(), mo.flagged.end()));
  for (std::size_t c = 0; c < n; ++c) enc.clause({-mo.run.state[L][c], mm.has_fin[c]});
  return mo;
}

MmInstance build_mm_instance(const ObservationTable& t, std::size_t n,
                             const EncodingOptions& options) {
  MmInstance inst;
  Encoder enc(inst.cnf);
  inst.mm = encode_mm(enc, t, n, options);
  return inst;
}

Wit1Instance build_wit1(const ObservationTable& t, const Dfa& up, std::size_t n,
                        std::size_t max_len, Wit1Variant variant, const EncodingOptions& options) {
  Wit1Instance inst;
  inst.variant = variant;
  Encoder enc(inst.cnf);
  inst.left = encode_mm(enc, t, n, options, "L.");
  inst.right = encode_mm(enc, t, n, options, "R.");
  inst.input = encode_input(enc, t.input_alphabet(), max_len);
  encode_phi_up(enc, inst.input, up);
  if (variant == Wit1Variant::OutputMismatch) {
    RunVars l = encode_phi_run(enc, t, inst.left, inst.input, RunOutput::Segments);
    RunVars r = encode_phi_run(enc, t, inst.right, inst.input, RunOutput::Segments);
    encode_outputs_differ(enc, l.segments, r.segments);
  } else {
    encode_phi_run(enc, t, inst.left, inst.input, RunOutput::None);
    encode_phi_not_run(enc, inst.right, inst.input);
  }
  return inst;
}

Wit2Instance build_wit2(const ObservationTable& t, const Dfa& up, std::size_t n,
                        std::size_t max_len, const EncodingOptions& options) {
  Wit2Instance inst;
  Encoder enc(inst.cnf);
  inst.mm = encode_mm(enc, t, n, options);
  inst.input = encode_input(enc, t.input_alphabet(), max_len);
  encode_phi_up(enc, inst.input, up);
  inst.mo = encode_phi_mo(enc, inst.mm, inst.input);
  return inst;
}

Wit2Decoded decode_wit2(const ObservationTable& t, const Wit2Instance& inst, const Model& model) {
  Wit2Decoded out;
  out.mm = decode_mm(t, inst.mm, model);
  out.u = decode_input(inst.input, t.input_alphabet(), model);
  const auto classes = decode_classes(inst.mm, model);
  const auto& words = t.prefix_words();
  auto rep = [&](std::size_t c) -> const Word& {
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == c) return words[i];
    throw std::logic_error("decode_wit2: class without members");
  };
  const std::size_t n = inst.mm.n, k = inst.mm.k;
  const Alphabet& sigma = t.input_alphabet();
  for (std::size_t i = 0; i < out.u.size(); ++i) {
    std::size_t c = n;
    for (std::size_t x = 0; x < n; ++x)
      if (model.value(inst.mo.run.state[i][x])) c = x;
    const std::size_t a = *sigma.index_of(out.u[i]);
    if (c == n || !model.value(inst.mm.open[c * k + a])) continue;
    for (std::size_t d = 0; d < n; ++d) {
      if (!model.value(inst.mo.open_target[(c * k + a) * n + d])) continue;
      OpenTransition tr{rep(c), out.u[i], rep(d)};
      const bool seen = std::any_of(out.added.begin(), out.added.end(), [&](const OpenTransition& o) {
        return o.from == tr.from && o.symbol == tr.symbol;
      });
      if (!seen) out.added.push_back(std::move(tr));
    }
  }
  return out;
}

std::size_t wit1_length_bound(std::size_t n, const Dfa& up) {
  const double x = static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(up.num_states());
  const double b = 2.0 * x * x;
  if (b >= static_cast<double>(std::numeric_limits<std::size_t>::max() / 2))
    return std::numeric_limits<std::size_t>::max() / 2;
  return static_cast<std::size_t>(b);
}

std::size_t wit2_length_bound(std::size_t n, const Dfa& up) { return 2 * up.num_states() * n; }

TableVars encode_phi_t(Encoder& enc, const ObservationTable& t) {
  TableVars tv;
  const Alphabet& gamma = t.output_alphabet();
  for (const auto& [w, cell] : t.cells()) {
    WordVar value = enc.word("T(" + show(w) + ")", cell.output.size(), gamma.size());
    enc.force_const({}, value, indices(gamma, cell.output));
    tv.value.push_back(std::move(value));
    tv.bottom.push_back(enc.fresh("bot(" + show(w) + ")"));
    enc.clause({cell.is_bottom() ? tv.bottom.back() : -tv.bottom.back()});
    tv.hash.push_back(enc.fresh("hash(" + show(w) + ")"));
    enc.clause({cell.is_hash() ? tv.hash.back() : -tv.hash.back()});
  }
  return tv;
}

}  // namespace graylearn
