#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace graylearn {

/// Variables are 1-based; a literal is a signed variable as in DIMACS.
using Var = int;
using Lit = int;

/// Clause database with optional per-variable annotations.
///
/// Adding an empty clause does not store it; it marks the instance as
/// trivially unsatisfiable instead.
class CnfInstance {
 public:
  Var new_var(std::string annotation = {});
  /// Allocates `count` consecutive variables and returns the first.
  Var new_vars(std::size_t count);
  std::size_t num_vars() const { return annotations_.size(); }

  void add_clause(std::span<const Lit> lits);
  void add_clause(std::initializer_list<Lit> lits) {
    add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }
  void add_clause(const std::vector<Lit>& lits) { add_clause(std::span<const Lit>(lits)); }

  std::size_t num_clauses() const { return starts_.size(); }
  std::span<const Lit> clause(std::size_t i) const;
  std::size_t num_literals() const { return lits_.size(); }

  bool trivially_unsat() const { return has_empty_clause_; }
  void mark_unsat() { has_empty_clause_ = true; }

  void annotate(Var v, std::string text);
  const std::string& annotation(Var v) const { return annotations_[v - 1]; }

 private:
  std::vector<Lit> lits_;
  std::vector<std::size_t> starts_;
  std::vector<std::string> annotations_;
  bool has_empty_clause_ = false;
};

/// Total assignment; index 0 is unused.
class Model {
 public:
  Model() = default;
  explicit Model(std::size_t num_vars) : values_(num_vars + 1, false) {}

  std::size_t num_vars() const { return values_.empty() ? 0 : values_.size() - 1; }
  bool value(Var v) const { return values_[v]; }
  void set(Var v, bool b) { values_[v] = b; }
  bool holds(Lit l) const { return l > 0 ? values_[l] : !values_[-l]; }

  bool operator==(const Model&) const = default;

 private:
  std::vector<bool> values_;
};

/// Index of the first clause falsified by `m`, or -1.
std::int64_t first_falsified_clause(const CnfInstance& c, const Model& m);
inline bool satisfies(const CnfInstance& c, const Model& m) {
  return !c.trivially_unsat() && first_falsified_clause(c, m) < 0;
}

}  // namespace graylearn
