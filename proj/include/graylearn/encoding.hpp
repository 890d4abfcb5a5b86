#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "graylearn/automata.hpp"
#include "graylearn/cnf.hpp"
#include "graylearn/merging_map.hpp"
#include "graylearn/table.hpp"

namespace graylearn {

/// Bounded word over an alphabet of `arity` symbols: unary length bits and
/// one-hot symbols per position. Positions at or beyond the length carry no
/// symbol.
struct WordVar {
  std::string name;
  std::size_t max_len = 0;
  std::size_t arity = 0;
  std::vector<Var> ge;   ///< ge[j] ⇔ length ≥ j+1.
  std::vector<Var> sym;  ///< sym[pos * arity + s].
  std::vector<Var> eq;   ///< eq[p] ⇔ length = p, created on demand (0 = absent).

  Var symbol(std::size_t pos, std::size_t s) const { return sym[pos * arity + s]; }
};

/// Clause-building helpers over a CnfInstance.
class Encoder {
 public:
  explicit Encoder(CnfInstance& cnf);

  CnfInstance& cnf() { return cnf_; }
  Lit yes() const { return yes_; }
  Lit no() const { return -yes_; }
  Var fresh(std::string name = {}) { return cnf_.new_var(std::move(name)); }

  void clause(std::vector<Lit> lits);
  /// ∧cond ⇒ ∨consequent.
  void implies(const std::vector<Lit>& cond, std::vector<Lit> consequent);
  void at_most_one(const std::vector<Lit>& lits);
  void exactly_one(const std::vector<Lit>& lits);
  /// Fresh variable equivalent to the disjunction / conjunction.
  Var or_of(const std::vector<Lit>& lits, std::string name = {});
  Var and_of(const std::vector<Lit>& lits, std::string name = {});

  WordVar word(std::string name, std::size_t max_len, std::size_t arity);
  /// Literal for |w| ≥ j (true for j = 0, false beyond the bound).
  Lit len_ge(const WordVar& w, std::size_t j) const;
  /// Variable for |w| = p (false literal beyond the bound).
  Lit len_is(WordVar& w, std::size_t p);

  /// ∧cond ⇒ w = value (symbols given by index).
  void force_const(const std::vector<Lit>& cond, const WordVar& w,
                   const std::vector<std::size_t>& value);
  /// ∧cond ⇒ a = b.
  void force_equal(const std::vector<Lit>& cond, const WordVar& a, const WordVar& b);
  /// c = a · b.
  void concat(WordVar& a, const WordVar& b, const WordVar& c);
  /// a ≠ b.
  void words_differ(const WordVar& a, const WordVar& b);

 private:
  CnfInstance& cnf_;
  Var yes_;
};

struct EncodingOptions {
  /// Adds explicit E_{u,v} equivalence variables linked to the class selectors.
  bool pairwise_equivalence = false;
  /// Classes are introduced in shortlex order of their first member.
  bool symmetry_breaking = true;
};

/// Variables of one merging map of size ≤ n on a fixed table.
///
/// Words are P_T indices. Each defined word selects one class in [0, n); the
/// words with f undefined form a single pseudo-class. f on P_Γ words is a
/// prefix of the extension lcp, so only its length is a variable; f on the
/// other defined words is f(parent) · out(class(parent), a).
struct MmVars {
  std::size_t n = 0;
  std::size_t k = 0;  ///< |Σ|
  std::vector<Var> def;
  std::vector<std::vector<Var>> cls;      ///< cls[word][class]
  std::vector<std::vector<Var>> f_ge;     ///< f_ge[word][p-1] ⇔ |f| ≥ p, P_Γ words only
  std::vector<std::vector<Var>> f_eq;     ///< f_eq[word][p] ⇔ |f| = p, P_Γ words only
  std::vector<WordVar> out;               ///< out[class * k + a]
  std::vector<WordVar> fin;               ///< fin[class]
  std::vector<Var> has_fin;
  std::vector<Var> trans;                 ///< trans[(class * k + a) * n + target]
  std::vector<Var> has_trans;             ///< [class * k + a]
  std::vector<Var> gamma_succ;            ///< [class * k + a]: some member continues into P_Γ
  std::vector<Var> any_succ;              ///< [class * k + a]: some member continues into P_T
  std::vector<Var> dead;                  ///< [class * k + a]: some member continues outside dom(f)
  std::vector<Var> used;
  std::vector<Var> open;                  ///< [class * k + a]
  std::vector<Var> muted;                 ///< [class * k + a]
  std::vector<std::vector<Var>> pair_eq;  ///< optional E[i][j - i - 1] for i < j

  Var t(std::size_t c, std::size_t a, std::size_t target) const {
    return trans[(c * k + a) * n + target];
  }
};

MmVars encode_mm(Encoder& enc, const ObservationTable& t, std::size_t n,
                 const EncodingOptions& options = {}, const std::string& tag = "");
MergingMap decode_mm(const ObservationTable& t, const MmVars& mm, const Model& model);
/// Literals of `model` that fix the resulting transducer: used classes, their
/// transitions with outputs, final outputs and w0. With `up`, only the part
/// read by words of L(up) is kept, so every model satisfying the literals has
/// the same restriction to L(up). Negating them blocks that behaviour.
std::vector<Lit> transducer_literals(const MmVars& mm, const Model& model, const Dfa* up = nullptr);
/// Constrains the variables to represent exactly `mm` (up to class renaming).
void fix_mm(Encoder& enc, const ObservationTable& t, const MmVars& vars, const MergingMap& mm);

/// Symbolic input word of length ≤ max_len.
struct InputVars {
  std::size_t max_len = 0;
  std::size_t k = 0;
  std::vector<Var> active;  ///< active[i] ⇔ |u| ≥ i+1
  std::vector<Var> sym;     ///< sym[i * k + a]

  Var x(std::size_t i, std::size_t a) const { return sym[i * k + a]; }
};

InputVars encode_input(Encoder& enc, const Alphabet& sigma, std::size_t max_len);
void fix_input(Encoder& enc, const InputVars& u, const Alphabet& sigma, const Word& w);
Word decode_input(const InputVars& u, const Alphabet& sigma, const Model& model);

/// u ∈ L(up).
void encode_phi_up(Encoder& enc, const InputVars& u, const Dfa& up);

/// Accepting run of u in the resulting transducer. `state[i][c]` is the class
/// after i steps. With outputs, `segments` holds w0, one word per step (ε past
/// the end of u) and the final output; `output` is their concatenation.
struct RunVars {
  std::vector<std::vector<Var>> state;
  std::vector<WordVar> segments;
  std::optional<WordVar> output;
};
enum class RunOutput { None, Segments, Word };
RunVars encode_phi_run(Encoder& enc, const ObservationTable& t, MmVars& mm, const InputVars& u,
                       RunOutput output);

/// The concatenations of two segment lists differ. Compares them step by step
/// through the unmatched suffix of the longer side instead of building both
/// words.
void encode_outputs_differ(Encoder& enc, const std::vector<WordVar>& left,
                           const std::vector<WordVar>& right);

/// u ∉ dom of the resulting transducer; state index n is the rejecting sink.
RunVars encode_phi_not_run(Encoder& enc, const MmVars& mm, const InputVars& u);

/// Accepting run of u in an open completion that uses some open or muted
/// transition. `open_target[(c * k + a) * n + d]` selects the added transition.
struct MoVars {
  RunVars run;
  std::vector<Var> open_target;
  std::vector<Var> flagged;  ///< flagged[i]: step i+1 uses an open or muted transition
};
MoVars encode_phi_mo(Encoder& enc, const MmVars& mm, const InputVars& u);

/// φ_mm at size n.
struct MmInstance {
  CnfInstance cnf;
  MmVars mm;
};
MmInstance build_mm_instance(const ObservationTable& t, std::size_t n,
                             const EncodingOptions& options = {});

enum class Wit1Variant { OutputMismatch, DomainMismatch };

/// Two merging maps of size ≤ n whose resulting transducers differ on some
/// u ∈ Up with |u| ≤ max_len.
struct Wit1Instance {
  CnfInstance cnf;
  MmVars left, right;
  InputVars input;
  Wit1Variant variant = Wit1Variant::OutputMismatch;
};
Wit1Instance build_wit1(const ObservationTable& t, const Dfa& up, std::size_t n,
                        std::size_t max_len, Wit1Variant variant,
                        const EncodingOptions& options = {});

/// A merging map of size ≤ n, an open completion and u ∈ Up with |u| ≤ max_len
/// accepted through an open or muted transition.
struct Wit2Instance {
  CnfInstance cnf;
  MmVars mm;
  InputVars input;
  MoVars mo;
};
Wit2Instance build_wit2(const ObservationTable& t, const Dfa& up, std::size_t n,
                        std::size_t max_len, const EncodingOptions& options = {});

/// Decoded Φ_wit2 model: the merging map, the open transitions taken by the
/// run, and the word.
struct Wit2Decoded {
  MergingMap mm;
  std::vector<OpenTransition> added;
  Word u;
};
Wit2Decoded decode_wit2(const ObservationTable& t, const Wit2Instance& inst, const Model& model);

/// Length bounds guaranteeing a witness when one exists: 2·(n·n·|Up|)² and 2·|Up|·n.
std::size_t wit1_length_bound(std::size_t n, const Dfa& up);
std::size_t wit2_length_bound(std::size_t n, const Dfa& up);

/// Table cells as fixed word variables (T_u, with a ⊥ bit and a # bit).
struct TableVars {
  std::vector<WordVar> value;  ///< per table word, in cells() order
  std::vector<Var> bottom;
  std::vector<Var> hash;
};
TableVars encode_phi_t(Encoder& enc, const ObservationTable& t);

}  // namespace graylearn
