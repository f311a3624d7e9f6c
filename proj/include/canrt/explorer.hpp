#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "canrt/predicate.hpp"
#include "canrt/semantics.hpp"

namespace canrt {

/// Finite Kripke structure. Every state has at least one successor; deadlocks carry a self-loop.
/// Built by the explorer, or directly by hand for model-checking in isolation.
struct TransitionSystem {
  std::size_t state_count = 0;
  std::vector<std::vector<std::size_t>> successors;
  /// Label name -> per-state truth. `init` and `deadlock` are always present after explore().
  std::map<std::string, std::vector<bool>> labels;
  /// Label names in export order.
  std::vector<std::string> label_order;
  std::size_t initial = 0;
  std::set<std::size_t> deadlocks;
  /// Canonical form per state; empty for hand-built systems.
  std::vector<std::string> names;
  std::vector<AgentConfig> configs;

  /// Throws UnknownLabel.
  const std::vector<bool>& label(const std::string& name) const;
  void add_label(const std::string& name, std::vector<bool> truth);
  std::size_t transition_count() const;
};

/// Injective text form of a configuration, per-intention traces included.
std::string canonical_form(const AgentConfig& config);

struct ExploreOptions {
  std::size_t max_states = 100000;
  bool depth_first = false;
  /// Use the original rules without event statuses or motivations.
  bool legacy = false;
  std::vector<Predicate> predicates;
  bool keep_configs = true;
};

/// Exhaustive reachability from the initial configuration. Throws StateLimitExceeded once more
/// than `max_states` distinct states are found, and InvariantViolation if a state is malformed.
TransitionSystem explore(const Program& program, const ExploreOptions& options = {});

/// Evaluates `predicate` on every stored configuration and records it under its normal form.
void label_states(TransitionSystem& ts, const Program& program, const Predicate& predicate);

std::string export_dot(const TransitionSystem& ts);

struct ExplicitModel {
  std::string sta;  // `index:canonical form` per state
  std::string tra;  // `states transitions` then sorted `from to` pairs
  std::string lab;  // label declarations then `state: label ids`
};

ExplicitModel export_explicit(const TransitionSystem& ts);

}  // namespace canrt
