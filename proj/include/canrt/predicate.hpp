#pragma once

#include <string>
#include <string_view>

#include "canrt/formula.hpp"
#include "canrt/rational.hpp"
#include "canrt/semantics.hpp"

namespace canrt {

/// Atomic state property. Written `status(id)=active`, `completed(id)`, `blocked(id)`,
/// `steppable(id)`, `believes(phi)`, `desires(event)` or `progress(id)>=3/4`.
struct Predicate {
  enum class Kind { status, completed, blocked, steppable, believes, desires, progress };

  Kind kind = Kind::status;
  std::string argument;  // identifier or event name
  Status status = Status::pending;
  BeliefFormula formula;
  Rational threshold;

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Throws ParseError.
Predicate parse_predicate(std::string_view text);

/// Normal form; two predicates with the same text label the same states.
std::string to_string(const Predicate& predicate);

bool holds(const Predicate& predicate, const Program& program, const AgentConfig& config);

}  // namespace canrt
