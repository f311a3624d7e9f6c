#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "canrt/explorer.hpp"

namespace canrt {

/// CTL state formula. Atoms name a label of the transition system; predicate atoms are stored in
/// their normal form (see to_string(Predicate)).
class CtlFormula {
 public:
  enum class Kind {
    truth, falsity, atom, negation, conjunction, disjunction, implication,
    ex, ef, eg, eu, ax, af, ag, au,
  };

  static CtlFormula truth();
  static CtlFormula falsity();
  static CtlFormula atom(std::string label);
  static CtlFormula unary(Kind kind, CtlFormula operand);
  static CtlFormula binary(Kind kind, CtlFormula lhs, CtlFormula rhs);

  Kind kind() const;
  const std::string& label() const;
  const CtlFormula& lhs() const;  // also the operand of unary operators
  const CtlFormula& rhs() const;

  void collect_atoms(std::set<std::string>& out) const;

 private:
  struct Node;
  explicit CtlFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Grammar: `A[p U q]`, `E[p U q]`, `AG p` (also `A G p`, likewise AF AX EG EF EX),
/// `A[p => F q]` for AG(p -> AF q) with G and X accepted in place of F,
/// `! & | ->` (`=>` as a synonym for `->`), `true`, `false`, parentheses, bare label names and
/// predicates. Throws ParseError.
CtlFormula parse_ctl(std::string_view text);

std::string to_string(const CtlFormula& formula);

struct CheckResult {
  bool holds_at_initial = false;
  std::vector<bool> satisfying;

  std::size_t count() const;
};

/// Throws UnknownLabel for atoms the system does not define.
CheckResult check(const TransitionSystem& ts, const CtlFormula& formula);

/// For a failing top-level AG, a path from the initial state to a violating state.
/// For a failing top-level AF, a lasso staying outside the target set. Otherwise empty.
/// A lasso repeats the state where the cycle closes as its last element.
std::vector<std::size_t> counterexample(const TransitionSystem& ts, const CtlFormula& formula);

}  // namespace canrt
