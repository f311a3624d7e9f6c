#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "canrt/agent.hpp"
#include "canrt/beliefs.hpp"
#include "canrt/progress.hpp"

namespace canrt {

struct Body;
using BodyPtr = std::shared_ptr<const Body>;

/// Runtime plan body. Act/Post/Select carry the trace label of the node they stand for.
struct Body {
  struct Nil {};
  struct Act {
    std::string name;
    std::string label;
  };
  struct Post {
    std::string event;
    std::string label;
  };
  struct Seq {
    BodyPtr first;
    BodyPtr second;
  };
  struct Par {
    BodyPtr left;
    BodyPtr right;
  };
  struct Goal {
    BeliefFormula success;
    BodyPtr body;
    BeliefFormula failure;
  };
  /// Plans for `event` not yet tried, as indices into CompiledAgent::plans in declaration order.
  struct Select {
    std::string event;
    std::string label;
    std::vector<std::size_t> remaining;
  };
  /// Run `attempt`; if it blocks before finishing, continue with `fallback`.
  struct Recover {
    BodyPtr attempt;
    BodyPtr fallback;
  };

  std::variant<Nil, Act, Post, Seq, Par, Goal, Select, Recover> node;
};

namespace body {
BodyPtr nil();
BodyPtr act(std::string name, std::string label);
BodyPtr post(std::string event, std::string label);
BodyPtr seq(BodyPtr first, BodyPtr second);
BodyPtr par(BodyPtr left, BodyPtr right);
BodyPtr goal(BeliefFormula success, BodyPtr inner, BeliefFormula failure);
BodyPtr select(std::string event, std::string label, std::vector<std::size_t> remaining);
BodyPtr recover(BodyPtr attempt, BodyPtr fallback);
}  // namespace body

bool is_nil(const BodyPtr& p);
bool same_body(const BodyPtr& a, const BodyPtr& b);
/// Injective serialization, used for state identity.
std::string canonical(const BodyPtr& p);
/// Readable form close to the source syntax (`a; !e`, `goal(...)`, `select(e, ...)`, `x |> y`).
std::string describe(const BodyPtr& p);

enum class Status { pending, active, success, failure };

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

struct EventRecord {
  std::string event;
  std::string identifier;
  Status status = Status::pending;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct Intention {
  std::string identifier;
  std::string event;
  BodyPtr body;
  CurrentTrace trace;

  friend bool operator==(const Intention& a, const Intention& b);
};

/// ⟨events, beliefs, intentions⟩ plus the identifiers of motivations that have fired.
/// Events and intentions are kept sorted by identifier.
struct AgentConfig {
  std::vector<EventRecord> events;
  BeliefBase beliefs;
  std::vector<Intention> intentions;
  std::set<std::string> fired_motivations;

  const EventRecord* record(std::string_view identifier) const;
  const Intention* intention(std::string_view identifier) const;
  void normalize();

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

/// A compiled agent with the lookup tables the semantics needs. Immutable after construction.
class Program {
 public:
  explicit Program(CompiledAgent agent);

  const CompiledAgent& agent() const { return agent_; }
  const TraceTable& traces() const { return traces_; }
  const std::vector<std::size_t>& plans_for(const std::string& event) const;
  const ActionDecl* action(const std::string& name) const;
  /// 1-based position of the plan among the plans for its event.
  std::size_t ordinal(std::size_t plan_index) const { return ordinals_.at(plan_index); }
  BodyPtr instantiate(std::size_t plan_index, const std::string& plan_label) const;

  /// External events pending, initial beliefs, no intentions.
  AgentConfig initial_config() const;
  /// The intention created when `event` is adopted under `identifier`.
  Intention adopt(const std::string& event, const std::string& identifier) const;

 private:
  CompiledAgent agent_;
  TraceTable traces_;
  std::map<std::string, std::vector<std::size_t>> by_event_;
  std::vector<std::size_t> ordinals_;
};

struct IntentionSuccessor {
  BeliefBase beliefs;
  BodyPtr body;
  std::optional<TraceStep> trace_step;
};

/// Every ⟨B', P'⟩ reachable from ⟨B, P⟩ by exactly one intention-level rule.
std::vector<IntentionSuccessor> intention_step(const Program& program, const BeliefBase& beliefs,
                                               const BodyPtr& body);

/// No intention-level rule applies. True for nil; callers tell success from failure by is_nil.
bool is_blocked(const Program& program, const BeliefBase& beliefs, const BodyPtr& body);

enum class Rule {
  event,
  step,
  update_success,
  update_failure,
  motive,
  legacy_event,
  legacy_step,
  legacy_update,
};

std::string_view to_string(Rule rule);

struct Transition {
  Rule rule;
  std::string identifier;
  AgentConfig target;
};

/// Status-tracking agent rules plus motivation adoption, in canonical order: event adoptions,
/// intention steps, successful and failed completions, then motivations; ties by identifier.
/// Identical targets are reported once. Throws InvariantViolation on a malformed config.
std::vector<Transition> agent_transitions(const Program& program, const AgentConfig& config);

/// The original rules: adoption removes the event, any blocked intention is dropped silently.
std::vector<Transition> legacy_transitions(const Program& program, const AgentConfig& config);

std::vector<AgentConfig> agent_step(const Program& program, const AgentConfig& config);
std::vector<AgentConfig> agent_step_legacy(const Program& program, const AgentConfig& config);

/// One record per identifier; every intention's record is active. Throws InvariantViolation.
void check_invariants(const AgentConfig& config);

}  // namespace canrt
