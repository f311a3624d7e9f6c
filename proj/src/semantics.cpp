#include "canrt/semantics.hpp"

#include <algorithm>

#include "canrt/errors.hpp"

namespace canrt {

namespace body {

BodyPtr nil() {
  static const BodyPtr shared = std::make_shared<const Body>(Body{Body::Nil{}});
  return shared;
}
BodyPtr act(std::string name, std::string label) {
  return std::make_shared<const Body>(Body{Body::Act{std::move(name), std::move(label)}});
}
BodyPtr post(std::string event, std::string label) {
  return std::make_shared<const Body>(Body{Body::Post{std::move(event), std::move(label)}});
}
BodyPtr seq(BodyPtr first, BodyPtr second) {
  return std::make_shared<const Body>(Body{Body::Seq{std::move(first), std::move(second)}});
}
BodyPtr par(BodyPtr left, BodyPtr right) {
  return std::make_shared<const Body>(Body{Body::Par{std::move(left), std::move(right)}});
}
BodyPtr goal(BeliefFormula success, BodyPtr inner, BeliefFormula failure) {
  return std::make_shared<const Body>(
      Body{Body::Goal{std::move(success), std::move(inner), std::move(failure)}});
}
BodyPtr select(std::string event, std::string label, std::vector<std::size_t> remaining) {
  return std::make_shared<const Body>(
      Body{Body::Select{std::move(event), std::move(label), std::move(remaining)}});
}
BodyPtr recover(BodyPtr attempt, BodyPtr fallback) {
  return std::make_shared<const Body>(Body{Body::Recover{std::move(attempt), std::move(fallback)}});
}

}  // namespace body

bool is_nil(const BodyPtr& p) { return std::holds_alternative<Body::Nil>(p->node); }

bool same_body(const BodyPtr& a, const BodyPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Body::Nil>) {
          return true;
        } else if constexpr (std::is_same_v<T, Body::Act>) {
          return x.name == y.name && x.label == y.label;
        } else if constexpr (std::is_same_v<T, Body::Post>) {
          return x.event == y.event && x.label == y.label;
        } else if constexpr (std::is_same_v<T, Body::Seq>) {
          return same_body(x.first, y.first) && same_body(x.second, y.second);
        } else if constexpr (std::is_same_v<T, Body::Par>) {
          return same_body(x.left, y.left) && same_body(x.right, y.right);
        } else if constexpr (std::is_same_v<T, Body::Goal>) {
          return x.success == y.success && x.failure == y.failure && same_body(x.body, y.body);
        } else if constexpr (std::is_same_v<T, Body::Select>) {
          return x.event == y.event && x.label == y.label && x.remaining == y.remaining;
        } else {
          return same_body(x.attempt, y.attempt) && same_body(x.fallback, y.fallback);
        }
      },
      a->node);
}

namespace {

void write_canonical(const BodyPtr& p, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Body::Nil>) {
          out += "nil";
        } else if constexpr (std::is_same_v<T, Body::Act>) {
          out += "act(" + x.label + ")";
        } else if constexpr (std::is_same_v<T, Body::Post>) {
          out += "post(" + x.label + ")";
        } else if constexpr (std::is_same_v<T, Body::Seq>) {
          out += "seq(";
          write_canonical(x.first, out);
          out += ',';
          write_canonical(x.second, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Body::Par>) {
          out += "par(";
          write_canonical(x.left, out);
          out += ',';
          write_canonical(x.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Body::Goal>) {
          out += "goal(" + to_string(x.success) + ",";
          write_canonical(x.body, out);
          out += "," + to_string(x.failure) + ")";
        } else if constexpr (std::is_same_v<T, Body::Select>) {
          out += "sel(" + x.label + ";";
          for (std::size_t i = 0; i < x.remaining.size(); ++i) {
            if (i > 0) out += ',';
            out += std::to_string(x.remaining[i]);
          }
          out += ')';
        } else {
          out += "rec(";
          write_canonical(x.attempt, out);
          out += ',';
          write_canonical(x.fallback, out);
          out += ')';
        }
      },
      p->node);
}

void write_readable(const BodyPtr& p, std::string& out, bool nested) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Body::Nil>) {
          out += "nil";
        } else if constexpr (std::is_same_v<T, Body::Act>) {
          out += x.name;
        } else if constexpr (std::is_same_v<T, Body::Post>) {
          out += "!" + x.event;
        } else if constexpr (std::is_same_v<T, Body::Goal>) {
          out += "goal(" + to_string(x.success) + ", ";
          write_readable(x.body, out, false);
          out += ", " + to_string(x.failure) + ")";
        } else if constexpr (std::is_same_v<T, Body::Select>) {
          out += "select(" + x.event + ", " + std::to_string(x.remaining.size()) + " left)";
        } else {
          if (nested) out += '(';
          if constexpr (std::is_same_v<T, Body::Seq>) {
            write_readable(x.first, out, true);
            out += "; ";
            write_readable(x.second, out, true);
          } else if constexpr (std::is_same_v<T, Body::Par>) {
            write_readable(x.left, out, true);
            out += " || ";
            write_readable(x.right, out, true);
          } else {
            write_readable(x.attempt, out, true);
            out += " |> ";
            write_readable(x.fallback, out, true);
          }
          if (nested) out += ')';
        }
      },
      p->node);
}

}  // namespace

std::string canonical(const BodyPtr& p) {
  std::string out;
  write_canonical(p, out);
  return out;
}

std::string describe(const BodyPtr& p) {
  std::string out;
  write_readable(p, out, false);
  return out;
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::pending:
      return "pending";
    case Status::active:
      return "active";
    case Status::success:
      return "success";
    case Status::failure:
      return "failure";
  }
  return "?";
}

std::optional<Status> parse_status(std::string_view text) {
  for (Status s : {Status::pending, Status::active, Status::success, Status::failure}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

bool operator==(const Intention& a, const Intention& b) {
  return a.identifier == b.identifier && a.event == b.event && a.trace == b.trace &&
         same_body(a.body, b.body);
}

const EventRecord* AgentConfig::record(std::string_view identifier) const {
  for (const auto& r : events) {
    if (r.identifier == identifier) return &r;
  }
  return nullptr;
}

const Intention* AgentConfig::intention(std::string_view identifier) const {
  for (const auto& i : intentions) {
    if (i.identifier == identifier) return &i;
  }
  return nullptr;
}

void AgentConfig::normalize() {
  std::sort(events.begin(), events.end(),
            [](const auto& a, const auto& b) { return a.identifier < b.identifier; });
  std::sort(intentions.begin(), intentions.end(),
            [](const auto& a, const auto& b) { return a.identifier < b.identifier; });
}

Program::Program(CompiledAgent agent) : agent_(std::move(agent)), traces_(compile_traces(agent_)) {
  ordinals_.resize(agent_.plans.size());
  for (std::size_t i = 0; i < agent_.plans.size(); ++i) {
    auto& list = by_event_[agent_.plans[i].event];
    list.push_back(i);
    ordinals_[i] = list.size();
  }
}

const std::vector<std::size_t>& Program::plans_for(const std::string& event) const {
  static const std::vector<std::size_t> none;
  auto it = by_event_.find(event);
  return it == by_event_.end() ? none : it->second;
}

const ActionDecl* Program::action(const std::string& name) const {
  auto it = agent_.actions.find(name);
  return it == agent_.actions.end() ? nullptr : &it->second;
}

namespace {

BodyPtr instantiate_expr(const BodyExpr& expr, const std::string& pl, std::size_t& position) {
  switch (expr.kind()) {
    case BodyExpr::Kind::nil:
      return body::nil();
    case BodyExpr::Kind::action:
      return body::act(expr.name(), element_label(pl, expr.name(), ++position));
    case BodyExpr::Kind::post:
      return body::post(expr.name(), element_label(pl, expr.name(), ++position));
    case BodyExpr::Kind::goal: {
      auto inner = body::post(expr.name(), element_label(pl, expr.name(), ++position));
      return body::goal(expr.success(), std::move(inner), expr.failure());
    }
    case BodyExpr::Kind::sequence: {
      auto first = instantiate_expr(expr.first(), pl, position);
      auto second = instantiate_expr(expr.second(), pl, position);
      return body::seq(std::move(first), std::move(second));
    }
    case BodyExpr::Kind::parallel: {
      auto left = instantiate_expr(expr.first(), pl, position);
      auto right = instantiate_expr(expr.second(), pl, position);
      return body::par(std::move(left), std::move(right));
    }
  }
  return body::nil();
}

}  // namespace

BodyPtr Program::instantiate(std::size_t plan_index, const std::string& plan_label) const {
  std::size_t position = 0;
  return instantiate_expr(agent_.plans.at(plan_index).body, plan_label, position);
}

AgentConfig Program::initial_config() const {
  AgentConfig cfg;
  cfg.beliefs = BeliefBase(agent_.initial_beliefs);
  for (const auto& e : agent_.external_events)
    cfg.events.push_back({e.event, e.identifier, Status::pending});
  cfg.normalize();
  return cfg;
}

Intention Program::adopt(const std::string& event, const std::string& identifier) const {
  Intention intention{identifier, event, body::post(event, event), {}};
  intention.trace = update_trace(traces_, {}, {TraceStep::Kind::event, event});
  return intention;
}

namespace {

std::optional<std::string> event_label_of(const BodyPtr& p) {
  if (const auto* s = std::get_if<Body::Select>(&p->node)) return s->label;
  if (const auto* e = std::get_if<Body::Post>(&p->node)) return e->label;
  return std::nullopt;
}

std::optional<TraceStep> backtrack_to(const BodyPtr& fallback) {
  if (auto label = event_label_of(fallback)) return TraceStep{TraceStep::Kind::backtrack, *label};
  return std::nullopt;
}

class Stepper {
 public:
  Stepper(const Program& program, const BeliefBase& beliefs) : program_(program), beliefs_(beliefs) {}

  std::vector<IntentionSuccessor> step(const BodyPtr& p) const {
    return std::visit([&](const auto& node) { return apply(node, p); }, p->node);
  }

 private:
  IntentionSuccessor same_beliefs(BodyPtr next, std::optional<TraceStep> trace = std::nullopt) const {
    return {beliefs_, std::move(next), std::move(trace)};
  }

  template <class Wrap>
  std::vector<IntentionSuccessor> lift(std::vector<IntentionSuccessor> inner, Wrap wrap) const {
    for (auto& s : inner) s.body = wrap(s.body);
    return inner;
  }

  std::vector<IntentionSuccessor> apply(const Body::Nil&, const BodyPtr&) const { return {}; }

  std::vector<IntentionSuccessor> apply(const Body::Act& a, const BodyPtr&) const {
    const ActionDecl* decl = program_.action(a.name);
    if (decl == nullptr || !entails(beliefs_, decl->pre)) return {};
    return {{apply_effects(beliefs_, decl->adds, decl->dels), body::nil(),
             TraceStep{TraceStep::Kind::action, a.label}}};
  }

  std::vector<IntentionSuccessor> apply(const Body::Post& e, const BodyPtr&) const {
    return {same_beliefs(body::select(e.event, e.label, program_.plans_for(e.event)),
                         TraceStep{TraceStep::Kind::event, e.label})};
  }

  std::vector<IntentionSuccessor> apply(const Body::Select& s, const BodyPtr&) const {
    std::vector<IntentionSuccessor> out;
    const auto& plans = program_.agent().plans;
    for (std::size_t idx : s.remaining) {
      if (!entails(beliefs_, plans[idx].context)) continue;
      std::vector<std::size_t> rest;
      for (std::size_t other : s.remaining) {
        if (other != idx) rest.push_back(other);
      }
      std::string pl = plan_label(s.label, program_.ordinal(idx));
      BodyPtr chosen = program_.instantiate(idx, pl);
      out.push_back(same_beliefs(body::recover(std::move(chosen), body::select(s.event, s.label, std::move(rest))),
                                 TraceStep{TraceStep::Kind::plan, pl}));
    }
    return out;
  }

  std::vector<IntentionSuccessor> apply(const Body::Seq& s, const BodyPtr&) const {
    if (is_nil(s.first)) return {same_beliefs(s.second)};
    return lift(step(s.first), [&](const BodyPtr& first) { return body::seq(first, s.second); });
  }

  std::vector<IntentionSuccessor> apply(const Body::Par& p, const BodyPtr&) const {
    if (is_nil(p.left) && is_nil(p.right)) return {same_beliefs(body::nil())};
    auto out = lift(step(p.left), [&](const BodyPtr& left) { return body::par(left, p.right); });
    auto right = lift(step(p.right), [&](const BodyPtr& r) { return body::par(p.left, r); });
    out.insert(out.end(), std::make_move_iterator(right.begin()), std::make_move_iterator(right.end()));
    return out;
  }

  std::vector<IntentionSuccessor> apply(const Body::Recover& r, const BodyPtr&) const {
    if (is_nil(r.attempt)) return {same_beliefs(body::nil())};
    auto inner = step(r.attempt);
    if (inner.empty()) return {same_beliefs(r.fallback, backtrack_to(r.fallback))};
    return lift(std::move(inner), [&](const BodyPtr& attempt) { return body::recover(attempt, r.fallback); });
  }

  std::vector<IntentionSuccessor> apply(const Body::Goal& g, const BodyPtr&) const {
    if (entails(beliefs_, g.success)) return {same_beliefs(body::nil())};
    if (entails(beliefs_, g.failure)) return {};
    auto rewrap = [&](BodyPtr inner) { return body::goal(g.success, std::move(inner), g.failure); };
    if (std::holds_alternative<Body::Post>(g.body->node))
      return {same_beliefs(rewrap(body::recover(g.body, g.body)))};
    if (const auto* r = std::get_if<Body::Recover>(&g.body->node)) {
      // Completing or blocking without the success condition restarts from the original program.
      auto restart = [&] {
        return std::vector<IntentionSuccessor>{
            same_beliefs(rewrap(body::recover(r->fallback, r->fallback)), backtrack_to(r->fallback))};
      };
      if (is_nil(r->attempt)) return restart();
      auto inner = step(r->attempt);
      if (inner.empty()) return restart();
      return lift(std::move(inner),
                  [&](const BodyPtr& attempt) { return rewrap(body::recover(attempt, r->fallback)); });
    }
    return lift(step(g.body), rewrap);
  }

  const Program& program_;
  const BeliefBase& beliefs_;
};

}  // namespace

std::vector<IntentionSuccessor> intention_step(const Program& program, const BeliefBase& beliefs,
                                               const BodyPtr& body) {
  return Stepper(program, beliefs).step(body);
}

bool is_blocked(const Program& program, const BeliefBase& beliefs, const BodyPtr& body) {
  return intention_step(program, beliefs, body).empty();
}

std::string_view to_string(Rule rule) {
  switch (rule) {
    case Rule::event:
      return "event";
    case Rule::step:
      return "step";
    case Rule::update_success:
      return "update_suc";
    case Rule::update_failure:
      return "update_fail";
    case Rule::motive:
      return "motive";
    case Rule::legacy_event:
      return "legacy_event";
    case Rule::legacy_step:
      return "legacy_step";
    case Rule::legacy_update:
      return "legacy_update";
  }
  return "?";
}

void check_invariants(const AgentConfig& config) {
  for (std::size_t i = 1; i < config.events.size(); ++i) {
    if (config.events[i - 1].identifier >= config.events[i].identifier)
      throw InvariantViolation("event records not unique and ordered at '" +
                               config.events[i].identifier + "'");
  }
  for (std::size_t i = 0; i < config.intentions.size(); ++i) {
    const Intention& in = config.intentions[i];
    if (i > 0 && config.intentions[i - 1].identifier >= in.identifier)
      throw InvariantViolation("intentions not unique and ordered at '" + in.identifier + "'");
    const EventRecord* r = config.record(in.identifier);
    if (r == nullptr || r->status != Status::active)
      throw InvariantViolation("intention '" + in.identifier + "' has no active event record");
  }
}

namespace {

void push_unique(std::vector<Transition>& out, Transition t) {
  for (const auto& existing : out) {
    if (existing.target == t.target) return;
  }
  out.push_back(std::move(t));
}

void set_status(AgentConfig& cfg, const std::string& identifier, Status status) {
  for (auto& r : cfg.events) {
    if (r.identifier == identifier) r.status = status;
  }
}

void remove_intention(AgentConfig& cfg, const std::string& identifier) {
  std::erase_if(cfg.intentions, [&](const Intention& i) { return i.identifier == identifier; });
}

// Shared by both rule sets: one successor per intention-level step of each intention.
// Also reports, per intention index, whether it is blocked.
std::vector<bool> step_intentions(const Program& program, const AgentConfig& config, Rule rule,
                                  std::vector<Transition>& out) {
  std::vector<bool> blocked(config.intentions.size(), false);
  for (std::size_t i = 0; i < config.intentions.size(); ++i) {
    const Intention& in = config.intentions[i];
    auto successors = intention_step(program, config.beliefs, in.body);
    blocked[i] = successors.empty();
    for (auto& s : successors) {
      AgentConfig next = config;
      next.beliefs = std::move(s.beliefs);
      Intention& target = next.intentions[i];
      target.body = std::move(s.body);
      if (s.trace_step) target.trace = update_trace(program.traces(), target.trace, *s.trace_step);
      push_unique(out, {rule, in.identifier, std::move(next)});
    }
  }
  return blocked;
}

}  // namespace

std::vector<Transition> agent_transitions(const Program& program, const AgentConfig& config) {
  check_invariants(config);
  std::vector<Transition> out;

  for (const auto& r : config.events) {
    if (r.status != Status::pending) continue;
    AgentConfig next = config;
    set_status(next, r.identifier, Status::active);
    next.intentions.push_back(program.adopt(r.event, r.identifier));
    next.normalize();
    push_unique(out, {Rule::event, r.identifier, std::move(next)});
  }

  std::vector<bool> blocked = step_intentions(program, config, Rule::step, out);

  for (Status outcome : {Status::success, Status::failure}) {
    for (std::size_t i = 0; i < config.intentions.size(); ++i) {
      const Intention& in = config.intentions[i];
      if (!blocked[i] || is_nil(in.body) != (outcome == Status::success)) continue;
      AgentConfig next = config;
      set_status(next, in.identifier, outcome);
      remove_intention(next, in.identifier);
      push_unique(out, {outcome == Status::success ? Rule::update_success : Rule::update_failure,
                        in.identifier, std::move(next)});
    }
  }

  for (const auto& m : program.agent().motivations) {
    if (config.fired_motivations.contains(m.identifier) || config.record(m.identifier) != nullptr)
      continue;
    if (!entails(config.beliefs, m.condition)) continue;
    AgentConfig next = config;
    next.events.push_back({m.event, m.identifier, Status::active});
    next.intentions.push_back(program.adopt(m.event, m.identifier));
    next.fired_motivations.insert(m.identifier);
    next.normalize();
    push_unique(out, {Rule::motive, m.identifier, std::move(next)});
  }
  return out;
}

std::vector<Transition> legacy_transitions(const Program& program, const AgentConfig& config) {
  std::vector<Transition> out;
  for (const auto& r : config.events) {
    AgentConfig next = config;
    std::erase_if(next.events, [&](const EventRecord& e) { return e.identifier == r.identifier; });
    next.intentions.push_back(program.adopt(r.event, r.identifier));
    next.normalize();
    push_unique(out, {Rule::legacy_event, r.identifier, std::move(next)});
  }
  std::vector<bool> blocked = step_intentions(program, config, Rule::legacy_step, out);
  for (std::size_t i = 0; i < config.intentions.size(); ++i) {
    if (!blocked[i]) continue;
    AgentConfig next = config;
    remove_intention(next, config.intentions[i].identifier);
    push_unique(out, {Rule::legacy_update, config.intentions[i].identifier, std::move(next)});
  }
  return out;
}

std::vector<AgentConfig> agent_step(const Program& program, const AgentConfig& config) {
  std::vector<AgentConfig> out;
  for (auto& t : agent_transitions(program, config)) out.push_back(std::move(t.target));
  return out;
}

std::vector<AgentConfig> agent_step_legacy(const Program& program, const AgentConfig& config) {
  std::vector<AgentConfig> out;
  for (auto& t : legacy_transitions(program, config)) out.push_back(std::move(t.target));
  return out;
}

}  // namespace canrt
