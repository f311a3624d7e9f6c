#include "canrt/beliefs.hpp"

#include "canrt/errors.hpp"

namespace canrt {

bool entails(const BeliefBase& beliefs, const BeliefFormula& formula) {
  switch (formula.kind()) {
    case BeliefFormula::Kind::truth:
      return true;
    case BeliefFormula::Kind::atom:
      return beliefs.contains(formula.name());
    case BeliefFormula::Kind::negation:
      return !entails(beliefs, formula.lhs());
    case BeliefFormula::Kind::conjunction:
      return entails(beliefs, formula.lhs()) && entails(beliefs, formula.rhs());
    case BeliefFormula::Kind::disjunction:
      return entails(beliefs, formula.lhs()) || entails(beliefs, formula.rhs());
  }
  return false;
}

BeliefBase apply_effects(const BeliefBase& beliefs, const std::set<std::string>& adds,
                         const std::set<std::string>& dels) {
  for (const auto& atom : adds) {
    if (dels.contains(atom)) throw EffectConflict("atom '" + atom + "' is both added and deleted");
  }
  std::set<std::string> next = beliefs.atoms();
  for (const auto& atom : dels) next.erase(atom);
  next.insert(adds.begin(), adds.end());
  return BeliefBase(std::move(next));
}

std::string to_string(const BeliefBase& beliefs) {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : beliefs.atoms()) {
    if (!first) out += ",";
    out += atom;
    first = false;
  }
  return out + "}";
}

}  // namespace canrt
