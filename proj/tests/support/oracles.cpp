#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace canrt::testing {

namespace {

using K = CtlFormula::Kind;
using Path = std::vector<std::size_t>;

void paths_from(const TransitionSystem& ts, std::size_t s, std::size_t length, Path& prefix,
                const std::function<void(const Path&)>& visit) {
  prefix.push_back(s);
  if (prefix.size() == length) {
    visit(prefix);
  } else {
    for (auto t : ts.successors[s]) paths_from(ts, t, length, prefix, visit);
  }
  prefix.pop_back();
}

// p U q on a finite prefix: q somewhere, with p at every earlier position.
bool until_on(const Path& path, const std::vector<bool>& p, const std::vector<bool>& q) {
  for (auto s : path) {
    if (q[s]) return true;
    if (!p[s]) return false;
  }
  return false;
}

}  // namespace

std::vector<bool> bounded_paths_oracle(const TransitionSystem& ts, const CtlFormula& f) {
  const std::size_t n = ts.state_count;
  std::vector<bool> out(n, false);
  auto for_each_state = [&](auto fn) {
    for (std::size_t s = 0; s < n; ++s) out[s] = fn(s);
    return out;
  };
  switch (f.kind()) {
    case K::truth:
      return std::vector<bool>(n, true);
    case K::falsity:
      return out;
    case K::atom:
      return ts.label(f.label());
    case K::negation: {
      auto a = bounded_paths_oracle(ts, f.lhs());
      return for_each_state([&](std::size_t s) { return !a[s]; });
    }
    case K::conjunction:
    case K::disjunction:
    case K::implication: {
      auto a = bounded_paths_oracle(ts, f.lhs());
      auto b = bounded_paths_oracle(ts, f.rhs());
      return for_each_state([&](std::size_t s) {
        if (f.kind() == K::conjunction) return a[s] && b[s];
        if (f.kind() == K::disjunction) return a[s] || b[s];
        return !a[s] || b[s];
      });
    }
    default:
      break;
  }

  std::vector<bool> p, q;
  std::vector<bool> all(n, true);
  bool universal = false;
  std::function<bool(const Path&)> path_holds;
  std::size_t length = n + 1;
  auto sub = bounded_paths_oracle(ts, f.lhs());
  switch (f.kind()) {
    case K::ex:
    case K::ax:
      universal = f.kind() == K::ax;
      length = 2;
      path_holds = [&](const Path& path) { return sub[path[1]]; };
      break;
    case K::ef:
    case K::af:
      universal = f.kind() == K::af;
      path_holds = [&](const Path& path) { return until_on(path, all, sub); };
      break;
    case K::eg:
    case K::ag:
      universal = f.kind() == K::ag;
      path_holds = [&](const Path& path) {
        for (auto s : path) {
          if (!sub[s]) return false;
        }
        return true;
      };
      break;
    case K::eu:
    case K::au:
      universal = f.kind() == K::au;
      p = sub;
      q = bounded_paths_oracle(ts, f.rhs());
      path_holds = [&](const Path& path) { return until_on(path, p, q); };
      break;
    default:
      break;
  }
  for (std::size_t s = 0; s < n; ++s) {
    bool any = false;
    bool every = true;
    Path prefix;
    paths_from(ts, s, length, prefix, [&](const Path& path) {
      bool h = path_holds(path);
      any = any || h;
      every = every && h;
    });
    out[s] = universal ? every : any;
  }
  return out;
}

std::uint64_t count_traces(const CompiledAgent& agent, const std::string& event) {
  std::function<std::uint64_t(const BodyExpr&)> body_count = [&](const BodyExpr& b) -> std::uint64_t {
    switch (b.kind()) {
      case BodyExpr::Kind::nil:
      case BodyExpr::Kind::action:
        return 1;
      case BodyExpr::Kind::post:
      case BodyExpr::Kind::goal:
        return count_traces(agent, b.name());
      case BodyExpr::Kind::sequence:
      case BodyExpr::Kind::parallel:
        return body_count(b.first()) * body_count(b.second());
    }
    return 0;
  };
  std::uint64_t total = 0;
  bool any_plan = false;
  for (const auto& plan : agent.plans) {
    if (plan.event != event) continue;
    any_plan = true;
    total += body_count(plan.body);
  }
  return any_plan ? total : 1;
}

bool has_recursion(const CompiledAgent& agent) {
  std::function<void(const BodyExpr&, std::set<std::string>&)> posted = [&](const BodyExpr& b,
                                                                             std::set<std::string>& out) {
    switch (b.kind()) {
      case BodyExpr::Kind::post:
      case BodyExpr::Kind::goal:
        out.insert(b.name());
        break;
      case BodyExpr::Kind::sequence:
      case BodyExpr::Kind::parallel:
        posted(b.first(), out);
        posted(b.second(), out);
        break;
      default:
        break;
    }
  };
  auto children = [&](const std::string& e) {
    std::set<std::string> out;
    for (const auto& plan : agent.plans) {
      if (plan.event == e) posted(plan.body, out);
    }
    return out;
  };
  // Naive reachability from each event back to itself.
  for (const auto& start : agent.event_names()) {
    std::set<std::string> seen;
    std::vector<std::string> stack(1, start);
    while (!stack.empty()) {
      std::string e = stack.back();
      stack.pop_back();
      for (const auto& c : children(e)) {
        if (c == start) return true;
        if (seen.insert(c).second) stack.push_back(c);
      }
    }
  }
  return false;
}

std::set<std::string> reachable_projections(const Program& program, bool legacy, std::size_t max_states) {
  ExploreOptions options;
  options.legacy = legacy;
  options.max_states = max_states;
  TransitionSystem ts = explore(program, options);
  std::set<std::string> out;
  for (const auto& cfg : ts.configs) {
    std::vector<std::string> bodies;
    for (const auto& in : cfg.intentions) bodies.push_back(canonical(in.body));
    std::sort(bodies.begin(), bodies.end());
    std::string key = to_string(cfg.beliefs) + " |";
    for (const auto& b : bodies) key += ' ' + b;
    out.insert(std::move(key));
  }
  return out;
}

}  // namespace canrt::testing
