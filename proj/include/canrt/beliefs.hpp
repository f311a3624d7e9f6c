#pragma once

#include <initializer_list>
#include <set>
#include <string>

#include "canrt/formula.hpp"

namespace canrt {

/// Finite set of belief atoms, read under the closed-world assumption.
class BeliefBase {
 public:
  BeliefBase() = default;
  explicit BeliefBase(std::set<std::string> atoms) : atoms_(std::move(atoms)) {}
  BeliefBase(std::initializer_list<std::string> atoms) : atoms_(atoms) {}

  bool contains(const std::string& atom) const { return atoms_.contains(atom); }
  const std::set<std::string>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  friend bool operator==(const BeliefBase&, const BeliefBase&) = default;
  friend auto operator<=>(const BeliefBase&, const BeliefBase&) = default;

 private:
  std::set<std::string> atoms_;
};

/// An atom holds iff it is in the base; connectives are classical.
bool entails(const BeliefBase& beliefs, const BeliefFormula& formula);

/// (beliefs \ dels) ∪ adds. Throws EffectConflict when adds and dels overlap.
BeliefBase apply_effects(const BeliefBase& beliefs, const std::set<std::string>& adds,
                         const std::set<std::string>& dels);

std::string to_string(const BeliefBase& beliefs);

}  // namespace canrt
