#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "canrt/ctl.hpp"
#include "canrt/explorer.hpp"

namespace canrt {

struct Property {
  std::string name;
  std::string text;
  CtlFormula formula;
};

/// One `name: formula` per line; blank lines and `//` or `#` comments are skipped.
/// Throws ParseError carrying the line number.
std::vector<Property> parse_properties(std::string_view text);

struct PropertyResult {
  std::string name;
  bool holds = false;
  std::size_t satisfying = 0;
  std::vector<std::size_t> counterexample;
};

struct Verification {
  TransitionSystem system;
  std::vector<PropertyResult> results;

  bool all_hold() const;
};

/// Explores the agent with every predicate the properties mention, then checks each property.
Verification verify(const Program& program, const std::vector<Property>& properties,
                    ExploreOptions options = {});

}  // namespace canrt
