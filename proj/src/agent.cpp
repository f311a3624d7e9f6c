#include "canrt/agent.hpp"

#include <algorithm>
#include <functional>
#include <optional>

#include "formula_parser.hpp"
#include "lexer.hpp"

namespace canrt {

struct BodyExpr::Node {
  Kind kind = Kind::nil;
  std::string name;
  BodyExpr first_child;
  BodyExpr second_child;
  BeliefFormula success_cond;
  BeliefFormula failure_cond;

  Node() : first_child(nullptr), second_child(nullptr) {}
};

BodyExpr::BodyExpr() : node_(nullptr) {}
BodyExpr::BodyExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

BodyExpr BodyExpr::nil() { return BodyExpr(); }

BodyExpr BodyExpr::action(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::action;
  node->name = std::move(name);
  return BodyExpr(std::move(node));
}

BodyExpr BodyExpr::post(std::string event) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::post;
  node->name = std::move(event);
  return BodyExpr(std::move(node));
}

BodyExpr BodyExpr::sequence(BodyExpr first, BodyExpr second) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::sequence;
  node->first_child = std::move(first);
  node->second_child = std::move(second);
  return BodyExpr(std::move(node));
}

BodyExpr BodyExpr::parallel(BodyExpr left, BodyExpr right) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::parallel;
  node->first_child = std::move(left);
  node->second_child = std::move(right);
  return BodyExpr(std::move(node));
}

BodyExpr BodyExpr::goal(BeliefFormula success, std::string event, BeliefFormula failure) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::goal;
  node->name = std::move(event);
  node->success_cond = std::move(success);
  node->failure_cond = std::move(failure);
  return BodyExpr(std::move(node));
}

BodyExpr::Kind BodyExpr::kind() const { return node_ ? node_->kind : Kind::nil; }

const std::string& BodyExpr::name() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}

const BodyExpr& BodyExpr::first() const { return node_->first_child; }
const BodyExpr& BodyExpr::second() const { return node_->second_child; }
const BeliefFormula& BodyExpr::success() const { return node_->success_cond; }
const BeliefFormula& BodyExpr::failure() const { return node_->failure_cond; }

bool operator==(const BodyExpr& a, const BodyExpr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BodyExpr::Kind::nil:
      return true;
    case BodyExpr::Kind::action:
    case BodyExpr::Kind::post:
      return a.name() == b.name();
    case BodyExpr::Kind::sequence:
    case BodyExpr::Kind::parallel:
      return a.first() == b.first() && a.second() == b.second();
    case BodyExpr::Kind::goal:
      return a.name() == b.name() && a.success() == b.success() && a.failure() == b.failure();
  }
  return false;
}

namespace {

void print_body(const BodyExpr& body, std::string& out);

void print_wrapped(const BodyExpr& body, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_body(body, out);
  if (wrap) out += ')';
}

// `;` is right-associative and binds tighter than the left-associative `||`.
void print_body(const BodyExpr& body, std::string& out) {
  using K = BodyExpr::Kind;
  switch (body.kind()) {
    case K::nil:
      out += "nil";
      break;
    case K::action:
      out += body.name();
      break;
    case K::post:
      out += '!';
      out += body.name();
      break;
    case K::sequence: {
      K lk = body.first().kind();
      print_wrapped(body.first(), lk == K::sequence || lk == K::parallel, out);
      out += "; ";
      print_wrapped(body.second(), body.second().kind() == K::parallel, out);
      break;
    }
    case K::parallel:
      print_body(body.first(), out);
      out += " || ";
      print_wrapped(body.second(), body.second().kind() == K::parallel, out);
      break;
    case K::goal:
      out += "goal(" + to_string(body.success()) + ", " + body.name() + ", " +
             to_string(body.failure()) + ")";
      break;
  }
}

}  // namespace

std::string to_string(const BodyExpr& body) {
  std::string out;
  print_body(body, out);
  return out;
}

std::set<std::string> CompiledAgent::event_names() const {
  std::set<std::string> names;
  for (const auto& e : external_events) names.insert(e.event);
  for (const auto& m : motivations) names.insert(m.event);
  for (const auto& p : plans) names.insert(p.event);
  return names;
}

std::set<std::string> CompiledAgent::atoms() const {
  std::set<std::string> out(initial_beliefs.begin(), initial_beliefs.end());
  out.insert(negative_assertions.begin(), negative_assertions.end());
  std::function<void(const BodyExpr&)> visit = [&](const BodyExpr& b) {
    switch (b.kind()) {
      case BodyExpr::Kind::sequence:
      case BodyExpr::Kind::parallel:
        visit(b.first());
        visit(b.second());
        break;
      case BodyExpr::Kind::goal:
        b.success().collect_atoms(out);
        b.failure().collect_atoms(out);
        break;
      default:
        break;
    }
  };
  for (const auto& p : plans) {
    p.context.collect_atoms(out);
    visit(p.body);
  }
  for (const auto& [name, a] : actions) {
    a.pre.collect_atoms(out);
    out.insert(a.adds.begin(), a.adds.end());
    out.insert(a.dels.begin(), a.dels.end());
  }
  for (const auto& m : motivations) m.condition.collect_atoms(out);
  return out;
}

namespace {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

struct SourceMap {
  std::vector<SourcePos> plans;
  std::vector<SourcePos> events;
  std::vector<SourcePos> motivations;
  std::map<std::string, SourcePos> actions;
  std::map<std::string, SourcePos> beliefs;
};

const std::set<std::string, std::less<>> kKeywords = {
    "belief", "assert-not", "event", "motivation", "plan", "action", "goal", "nil", "true"};

const Token& expect_name(TokenStream& in, std::string_view what) {
  const Token& tok = in.expect_identifier(what);
  if (kKeywords.contains(tok.text))
    throw ParseError(tok.pos, "keyword '" + tok.text + "' cannot be used as " + std::string(what));
  return tok;
}

BodyExpr parse_body(TokenStream& in);

BodyExpr parse_primary(TokenStream& in) {
  TokenStream::Nest nest(in);
  if (in.accept("(")) {
    BodyExpr inner = parse_body(in);
    in.expect(")");
    return inner;
  }
  if (in.accept("!")) return BodyExpr::post(expect_name(in, "event name").text);
  if (in.accept("nil")) return BodyExpr::nil();
  if (in.peek().is("goal") && in.peek(1).is("(")) {
    in.next();
    in.next();
    BeliefFormula success = detail::parse_formula(in);
    in.expect(",");
    std::string event = expect_name(in, "event name").text;
    in.expect(",");
    BeliefFormula failure = detail::parse_formula(in);
    in.expect(")");
    return BodyExpr::goal(std::move(success), std::move(event), std::move(failure));
  }
  if (in.peek().kind != TokenKind::identifier)
    in.fail("expected a plan body", {"action name", "'!'", "'goal'", "'nil'", "'('"});
  return BodyExpr::action(expect_name(in, "action name").text);
}

BodyExpr parse_sequence(TokenStream& in) {
  BodyExpr first = parse_primary(in);
  if (!in.accept(";")) return first;
  TokenStream::Nest nest(in);
  return BodyExpr::sequence(std::move(first), parse_sequence(in));
}

BodyExpr parse_body(TokenStream& in) {
  BodyExpr lhs = parse_sequence(in);
  while (in.accept("||")) lhs = BodyExpr::parallel(std::move(lhs), parse_sequence(in));
  return lhs;
}

std::set<std::string> parse_atom_set(TokenStream& in) {
  std::set<std::string> atoms;
  in.expect("{");
  if (in.accept("}")) return atoms;
  do {
    atoms.insert(expect_name(in, "belief atom").text);
  } while (in.accept(","));
  in.expect("}");
  return atoms;
}

std::pair<std::string, std::string> parse_event_instance(TokenStream& in) {
  std::string event = expect_name(in, "event name").text;
  in.expect("[");
  std::string id = expect_name(in, "identifier").text;
  in.expect("]");
  return {std::move(event), std::move(id)};
}

void parse_statement(TokenStream& in, CompiledAgent& agent, SourceMap& map) {
  const Token& head = in.peek();
  SourcePos pos = head.pos;
  if (in.accept("belief") || head.is("assert-not")) {
    bool negative = head.is("assert-not");
    if (negative) in.next();
    do {
      const Token& atom = expect_name(in, "belief atom");
      (negative ? agent.negative_assertions : agent.initial_beliefs).insert(atom.text);
      map.beliefs.emplace(atom.text, atom.pos);
    } while (in.accept(","));
  } else if (in.accept("event")) {
    auto [event, id] = parse_event_instance(in);
    agent.external_events.push_back({std::move(event), std::move(id)});
    map.events.push_back(pos);
  } else if (in.accept("motivation")) {
    BeliefFormula condition = detail::parse_formula(in);
    in.expect("~>");
    auto [event, id] = parse_event_instance(in);
    agent.motivations.push_back({std::move(condition), std::move(event), std::move(id)});
    map.motivations.push_back(pos);
  } else if (in.accept("plan")) {
    std::string event = expect_name(in, "event name").text;
    in.expect(":");
    BeliefFormula context = detail::parse_formula(in);
    in.expect("<-");
    BodyExpr body = parse_body(in);
    agent.plans.push_back({std::move(event), std::move(context), std::move(body)});
    map.plans.push_back(pos);
  } else if (in.accept("action")) {
    const Token& name_tok = expect_name(in, "action name");
    ActionDecl action{name_tok.text, {}, {}, {}};
    in.expect(":");
    action.pre = detail::parse_formula(in);
    in.expect("<-");
    bool any = false;
    if (in.accept("+")) {
      action.adds = parse_atom_set(in);
      any = true;
    }
    if (in.accept("-")) {
      action.dels = parse_atom_set(in);
      any = true;
    }
    if (!any) in.unexpected({"+", "-"});
    if (agent.actions.contains(action.name))
      throw ValidationError(ValidationError::Kind::duplicate, name_tok.pos,
                            "duplicate action '" + action.name + "'");
    map.actions.emplace(action.name, pos);
    agent.actions.emplace(action.name, std::move(action));
  } else {
    in.fail("expected a declaration",
            {"'belief'", "'assert-not'", "'event'", "'motivation'", "'plan'", "'action'"});
  }
  in.expect(".");
}

void collect_body_refs(const BodyExpr& body, std::vector<std::string>& actions,
                       std::vector<std::string>& events) {
  switch (body.kind()) {
    case BodyExpr::Kind::action:
      actions.push_back(body.name());
      break;
    case BodyExpr::Kind::post:
    case BodyExpr::Kind::goal:
      events.push_back(body.name());
      break;
    case BodyExpr::Kind::sequence:
    case BodyExpr::Kind::parallel:
      collect_body_refs(body.first(), actions, events);
      collect_body_refs(body.second(), actions, events);
      break;
    case BodyExpr::Kind::nil:
      break;
  }
}

void validate_with(const CompiledAgent& agent, const SourceMap* map) {
  using Kind = ValidationError::Kind;
  auto pos_of = [](const std::vector<SourcePos>* v, std::size_t i) {
    return v && i < v->size() ? (*v)[i] : SourcePos{0, 0};
  };

  for (const auto& atom : agent.initial_beliefs) {
    if (agent.negative_assertions.contains(atom)) {
      SourcePos pos{0, 0};
      if (map && map->beliefs.contains(atom)) pos = map->beliefs.at(atom);
      throw ValidationError(Kind::conflict, pos,
                            "atom '" + atom + "' is both believed and asserted absent");
    }
  }

  for (const auto& [name, action] : agent.actions) {
    SourcePos pos{0, 0};
    if (map && map->actions.contains(name)) pos = map->actions.at(name);
    if (action.name != name)
      throw ValidationError(Kind::conflict, pos, "action table key '" + name + "' mismatches '" +
                                                     action.name + "'");
    for (const auto& atom : action.adds) {
      if (action.dels.contains(atom))
        throw ValidationError(Kind::conflict, pos,
                              "action '" + name + "' both adds and deletes '" + atom + "'");
    }
  }

  std::map<std::string, SourcePos> identifiers;
  auto claim = [&](const std::string& id, SourcePos pos) {
    if (!identifiers.emplace(id, pos).second)
      throw ValidationError(Kind::duplicate, pos, "duplicate identifier '" + id + "'");
  };
  for (std::size_t i = 0; i < agent.external_events.size(); ++i)
    claim(agent.external_events[i].identifier, pos_of(map ? &map->events : nullptr, i));
  for (std::size_t i = 0; i < agent.motivations.size(); ++i)
    claim(agent.motivations[i].identifier, pos_of(map ? &map->motivations : nullptr, i));

  const std::set<std::string> events = agent.event_names();
  std::map<std::string, std::set<std::string>> posts;  // event -> sub-events of its plans
  std::map<std::string, SourcePos> first_plan;
  for (std::size_t i = 0; i < agent.plans.size(); ++i) {
    const PlanDecl& plan = agent.plans[i];
    SourcePos pos = pos_of(map ? &map->plans : nullptr, i);
    first_plan.emplace(plan.event, pos);
    std::vector<std::string> action_refs, event_refs;
    collect_body_refs(plan.body, action_refs, event_refs);
    for (const auto& a : action_refs) {
      if (!agent.actions.contains(a))
        throw ValidationError(Kind::undeclared, pos, "undeclared action '" + a + "'");
    }
    for (const auto& e : event_refs) {
      if (!events.contains(e))
        throw ValidationError(Kind::undeclared, pos, "undeclared event '" + e + "'");
      posts[plan.event].insert(e);
    }
  }

  // Three-colour DFS over the event graph; a back edge is a recursive plan chain.
  enum class Colour { white, grey, black };
  std::map<std::string, Colour> colour;
  std::vector<std::string> path;
  std::function<void(const std::string&)> dfs = [&](const std::string& e) {
    colour[e] = Colour::grey;
    path.push_back(e);
    for (const auto& sub : posts[e]) {
      Colour c = colour[sub];
      if (c == Colour::grey) {
        std::string cycle;
        auto start = std::find(path.begin(), path.end(), sub);
        for (auto it = start; it != path.end(); ++it) cycle += *it + " -> ";
        cycle += sub;
        throw ValidationError(Kind::recursion, first_plan.count(sub) ? first_plan[sub] : SourcePos{0, 0},
                              "recursive plans: " + cycle);
      }
      if (c == Colour::white) dfs(sub);
    }
    path.pop_back();
    colour[e] = Colour::black;
  };
  for (const auto& e : events) {
    if (colour[e] == Colour::white) dfs(e);
  }
}

}  // namespace

CompiledAgent parse_program(std::string_view source) {
  TokenStream in(detail::tokenize(source));
  CompiledAgent agent;
  SourceMap map;
  while (!in.at_end()) parse_statement(in, agent, map);
  validate_with(agent, &map);
  return agent;
}

void validate(const CompiledAgent& agent) { validate_with(agent, nullptr); }

std::string pretty_print(const CompiledAgent& agent) {
  std::string out;
  auto atom_set = [](const std::set<std::string>& atoms) {
    std::string s = "{";
    bool first = true;
    for (const auto& a : atoms) {
      if (!first) s += ", ";
      s += a;
      first = false;
    }
    return s + "}";
  };
  for (const auto& b : agent.initial_beliefs) out += "belief " + b + ".\n";
  for (const auto& b : agent.negative_assertions) out += "assert-not " + b + ".\n";
  for (const auto& e : agent.external_events)
    out += "event " + e.event + " [" + e.identifier + "].\n";
  for (const auto& m : agent.motivations)
    out += "motivation " + to_string(m.condition) + " ~> " + m.event + " [" + m.identifier + "].\n";
  for (const auto& p : agent.plans)
    out += "plan " + p.event + " : " + to_string(p.context) + " <- " + to_string(p.body) + ".\n";
  for (const auto& [name, a] : agent.actions)
    out += "action " + name + " : " + to_string(a.pre) + " <- +" + atom_set(a.adds) + " -" +
           atom_set(a.dels) + ".\n";
  return out;
}

}  // namespace canrt
