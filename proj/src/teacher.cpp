#include "graylearn/teacher.hpp"

#include <sstream>

namespace graylearn {

SimulatedTeacher::SimulatedTeacher(const Transducer& target, const Dfa& up)
    : target_(product_restrict(target, up)), universe_(Dfa::universal(up.alphabet())) {}

std::optional<Word> SimulatedTeacher::membership(const Word& u) {
  auto answer = evaluate(target_, u);
  ++membership_count_;
  record({QueryRecord::Kind::Membership, u, answer ? show(*answer) : "⊥"});
  return answer;
}

std::optional<Witness> SimulatedTeacher::equivalence(const Transducer& m) {
  auto witness = equivalent_on(m, target_, universe_);
  ++equivalence_count_;
  record({QueryRecord::Kind::Equivalence, witness ? witness->word : Word{},
          witness ? std::string(to_string(witness->kind)) : "equivalent"});
  return witness;
}

void SimulatedTeacher::record(QueryRecord r) {
  std::lock_guard lock(log_mutex_);
  log_.push_back(std::move(r));
}

std::vector<QueryRecord> SimulatedTeacher::log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

std::string SimulatedTeacher::export_log() const {
  std::ostringstream out;
  for (const auto& r : log()) {
    out << (r.kind == QueryRecord::Kind::Membership ? "membership" : "equivalence") << '\t'
        << show(r.input) << '\t' << r.answer << '\n';
  }
  return out.str();
}

}  // namespace graylearn
