#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "canrt/agent.hpp"
#include "canrt/ctl.hpp"
#include "canrt/explorer.hpp"
#include "canrt/semantics.hpp"

namespace canrt::testing {

/// Truth of `f` at every state, decided by enumerating all paths of length state_count + 1.
/// Exponential; intended for systems of a handful of states.
std::vector<bool> bounded_paths_oracle(const TransitionSystem& ts, const CtlFormula& f);

/// Number of root-to-leaf executions of `event`, counted recursively over the plan library.
std::uint64_t count_traces(const CompiledAgent& agent, const std::string& event);

/// Whether some event can reach itself through plan bodies, by naive search from every event.
bool has_recursion(const CompiledAgent& agent);

/// Every reachable (beliefs, multiset of intention bodies) pair, rendered as text, under either
/// rule set. Identifiers, statuses and traces are projected away.
std::set<std::string> reachable_projections(const Program& program, bool legacy,
                                            std::size_t max_states = 2000000);

}  // namespace canrt::testing
