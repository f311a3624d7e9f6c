#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "canrt/errors.hpp"
#include "canrt/formula.hpp"

namespace canrt {

/// Plan body as written in source:
///   nil | action | !event | body ; body | body || body | goal(success, event, failure)
class BodyExpr {
 public:
  enum class Kind { nil, action, post, sequence, parallel, goal };

  BodyExpr();  // nil

  static BodyExpr nil();
  static BodyExpr action(std::string name);
  static BodyExpr post(std::string event);
  static BodyExpr sequence(BodyExpr first, BodyExpr second);
  static BodyExpr parallel(BodyExpr left, BodyExpr right);
  static BodyExpr goal(BeliefFormula success, std::string event, BeliefFormula failure);

  Kind kind() const;
  /// Action name for `action`, event name for `post` and `goal`.
  const std::string& name() const;
  const BodyExpr& first() const;
  const BodyExpr& second() const;
  const BeliefFormula& success() const;
  const BeliefFormula& failure() const;

  friend bool operator==(const BodyExpr& a, const BodyExpr& b);

 private:
  struct Node;
  explicit BodyExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const BodyExpr& body);

struct PlanDecl {
  std::string event;
  BeliefFormula context;
  BodyExpr body;

  friend bool operator==(const PlanDecl&, const PlanDecl&) = default;
};

struct ActionDecl {
  std::string name;
  BeliefFormula pre;
  std::set<std::string> adds;
  std::set<std::string> dels;

  friend bool operator==(const ActionDecl&, const ActionDecl&) = default;
};

/// `condition ~> event [identifier]`: adopt the event once the condition is believed.
struct MotivationDecl {
  BeliefFormula condition;
  std::string event;
  std::string identifier;

  friend bool operator==(const MotivationDecl&, const MotivationDecl&) = default;
};

struct ExternalEvent {
  std::string event;
  std::string identifier;

  friend bool operator==(const ExternalEvent&, const ExternalEvent&) = default;
};

struct CompiledAgent {
  std::set<std::string> initial_beliefs;
  /// Atoms that must be absent initially (`assert-not`); never stored in the belief base.
  std::set<std::string> negative_assertions;
  std::vector<ExternalEvent> external_events;
  /// Declaration order is significant: it fixes plan selection and enumeration order.
  std::vector<PlanDecl> plans;
  std::map<std::string, ActionDecl> actions;
  std::vector<MotivationDecl> motivations;

  friend bool operator==(const CompiledAgent&, const CompiledAgent&) = default;

  /// Every event name the agent can handle or post: plan triggers, external and motivation events.
  std::set<std::string> event_names() const;
  /// Every belief atom mentioned anywhere in the agent.
  std::set<std::string> atoms() const;
};

/// Parses and validates a `.can` source. Throws ParseError or ValidationError.
CompiledAgent parse_program(std::string_view source);

/// Checks declaration consistency (names, identifiers, effects, plan recursion).
/// Throws ValidationError; positions are unknown (0:0) for agents built in code.
void validate(const CompiledAgent& agent);

std::string pretty_print(const CompiledAgent& agent);

}  // namespace canrt
