#pragma once

#include <random>
#include <string>
#include <vector>

#include "canrt/agent.hpp"
#include "canrt/ctl.hpp"
#include "canrt/explorer.hpp"

namespace canrt::testing {

struct AgentShape {
  int max_events = 2;
  int max_plans = 4;
  int max_actions = 3;
  int max_atoms = 4;
  int max_body_items = 3;
  bool motivations = false;
  bool goals = true;
  bool parallel = true;
  /// Allow a plan to post any event, which may create recursion.
  bool allow_cycles = false;
};

BeliefFormula random_formula(std::mt19937_64& rng, const std::vector<std::string>& atoms, int depth);

/// A well-formed agent (validate() passes unless allow_cycles produced a cycle).
CompiledAgent random_agent(std::mt19937_64& rng, const AgentShape& shape = {});

/// Total transition system over labels p, q and r with distinct successors per state.
TransitionSystem random_system(std::mt19937_64& rng, int max_states, int max_out);

CtlFormula random_ctl(std::mt19937_64& rng, int depth);

}  // namespace canrt::testing
