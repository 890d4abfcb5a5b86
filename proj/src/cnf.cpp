#include "graylearn/cnf.hpp"

#include <cstdlib>
#include <stdexcept>

namespace graylearn {

Var CnfInstance::new_var(std::string annotation) {
  annotations_.push_back(std::move(annotation));
  return static_cast<Var>(annotations_.size());
}

Var CnfInstance::new_vars(std::size_t count) {
  const auto first = static_cast<Var>(annotations_.size() + 1);
  annotations_.resize(annotations_.size() + count);
  return first;
}

void CnfInstance::add_clause(std::span<const Lit> lits) {
  if (lits.empty()) {
    has_empty_clause_ = true;
    return;
  }
  for (Lit l : lits)
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > num_vars())
      throw std::invalid_argument("clause literal " + std::to_string(l) + " out of range (" +
                                  std::to_string(num_vars()) + " variables)");
  starts_.push_back(lits_.size());
  lits_.insert(lits_.end(), lits.begin(), lits.end());
}

std::span<const Lit> CnfInstance::clause(std::size_t i) const {
  const std::size_t begin = starts_[i];
  const std::size_t end = i + 1 < starts_.size() ? starts_[i + 1] : lits_.size();
  return {lits_.data() + begin, end - begin};
}

void CnfInstance::annotate(Var v, std::string text) {
  if (v < 1 || static_cast<std::size_t>(v) > num_vars())
    throw std::out_of_range("annotate: variable out of range");
  annotations_[v - 1] = std::move(text);
}

std::int64_t first_falsified_clause(const CnfInstance& c, const Model& m) {
  if (m.num_vars() < c.num_vars()) return c.num_clauses() ? 0 : -1;
  for (std::size_t i = 0; i < c.num_clauses(); ++i) {
    bool sat = false;
    for (Lit l : c.clause(i))
      if (m.holds(l)) {
        sat = true;
        break;
      }
    if (!sat) return static_cast<std::int64_t>(i);
  }
  return -1;
}

}  // namespace graylearn
