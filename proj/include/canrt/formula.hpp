#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace canrt {

/// Propositional formula over belief atoms. Immutable; copies share structure.
class BeliefFormula {
 public:
  enum class Kind { truth, atom, negation, conjunction, disjunction };

  /// Default-constructed formula is `true`.
  BeliefFormula();

  static BeliefFormula truth();
  static BeliefFormula atom(std::string name);
  static BeliefFormula negation(BeliefFormula operand);
  static BeliefFormula conjunction(BeliefFormula lhs, BeliefFormula rhs);
  static BeliefFormula disjunction(BeliefFormula lhs, BeliefFormula rhs);

  Kind kind() const;
  const std::string& name() const;     // atom
  const BeliefFormula& lhs() const;    // conjunction/disjunction, or negation operand
  const BeliefFormula& rhs() const;

  void collect_atoms(std::set<std::string>& out) const;

  friend bool operator==(const BeliefFormula& a, const BeliefFormula& b);

 private:
  struct Node;
  explicit BeliefFormula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Source form using `~ & | true` and parentheses only where needed; re-parses to an equal tree.
std::string to_string(const BeliefFormula& formula);

/// Parses a standalone formula. Throws ParseError.
BeliefFormula parse_formula(std::string_view text);

}  // namespace canrt
