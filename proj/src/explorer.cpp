#include "canrt/explorer.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "canrt/errors.hpp"

namespace canrt {

const std::vector<bool>& TransitionSystem::label(const std::string& name) const {
  auto it = labels.find(name);
  if (it == labels.end()) throw UnknownLabel(name);
  return it->second;
}

void TransitionSystem::add_label(const std::string& name, std::vector<bool> truth) {
  if (!labels.contains(name)) label_order.push_back(name);
  labels[name] = std::move(truth);
}

std::size_t TransitionSystem::transition_count() const {
  std::size_t n = 0;
  for (const auto& s : successors) n += s.size();
  return n;
}

std::string canonical_form(const AgentConfig& config) {
  std::string out = "E{";
  for (std::size_t i = 0; i < config.events.size(); ++i) {
    const auto& r = config.events[i];
    if (i > 0) out += ',';
    out += r.identifier + ':' + r.event + ':' + std::string(to_string(r.status));
  }
  out += "} B" + to_string(config.beliefs) + " I[";
  for (std::size_t i = 0; i < config.intentions.size(); ++i) {
    const auto& in = config.intentions[i];
    if (i > 0) out += ',';
    out += in.identifier + ':' + in.event + ':' + canonical(in.body) + ":<";
    for (std::size_t j = 0; j < in.trace.elements.size(); ++j) {
      if (j > 0) out += ' ';
      out += in.trace.elements[j].label;
    }
    out += '>';
  }
  out += "] M{";
  bool first = true;
  for (const auto& m : config.fired_motivations) {
    if (!first) out += ',';
    out += m;
    first = false;
  }
  return out + '}';
}

TransitionSystem explore(const Program& program, const ExploreOptions& options) {
  TransitionSystem ts;
  std::vector<AgentConfig> configs;
  std::unordered_map<std::string, std::size_t> index;
  std::deque<std::size_t> frontier;

  auto intern = [&](AgentConfig cfg) -> std::size_t {
    std::string key = canonical_form(cfg);
    auto [it, inserted] = index.try_emplace(key, configs.size());
    if (inserted) {
      if (configs.size() >= options.max_states)
        throw StateLimitExceeded(options.max_states, frontier.size());
      configs.push_back(std::move(cfg));
      ts.names.push_back(std::move(key));
      ts.successors.emplace_back();
      frontier.push_back(it->second);
    }
    return it->second;
  };

  AgentConfig init = program.initial_config();
  if (!options.legacy) check_invariants(init);
  ts.initial = intern(std::move(init));

  while (!frontier.empty()) {
    std::size_t s;
    if (options.depth_first) {
      s = frontier.back();
      frontier.pop_back();
    } else {
      s = frontier.front();
      frontier.pop_front();
    }
    auto transitions = options.legacy ? legacy_transitions(program, configs[s])
                                      : agent_transitions(program, configs[s]);
    std::vector<std::size_t> succ;
    for (auto& t : transitions) {
      if (!options.legacy) check_invariants(t.target);
      std::size_t target = intern(std::move(t.target));
      if (std::find(succ.begin(), succ.end(), target) == succ.end()) succ.push_back(target);
    }
    if (succ.empty()) {
      succ.push_back(s);
      ts.deadlocks.insert(s);
    }
    ts.successors[s] = std::move(succ);
  }

  ts.state_count = configs.size();
  ts.configs = std::move(configs);

  std::vector<bool> init_label(ts.state_count, false);
  init_label[ts.initial] = true;
  ts.add_label("init", std::move(init_label));
  std::vector<bool> dead(ts.state_count, false);
  for (auto d : ts.deadlocks) dead[d] = true;
  ts.add_label("deadlock", std::move(dead));
  for (const auto& p : options.predicates) label_states(ts, program, p);

  if (!options.keep_configs) ts.configs.clear();
  return ts;
}

void label_states(TransitionSystem& ts, const Program& program, const Predicate& predicate) {
  if (ts.configs.size() != ts.state_count)
    throw Error("cannot label states: configurations were not kept");
  std::vector<bool> truth(ts.state_count);
  for (std::size_t s = 0; s < ts.state_count; ++s) truth[s] = holds(predicate, program, ts.configs[s]);
  ts.add_label(to_string(predicate), std::move(truth));
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const TransitionSystem& ts) {
  std::string out = "digraph agent {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t s = 0; s < ts.state_count; ++s) {
    std::string name = s < ts.names.size() ? ts.names[s] : "s" + std::to_string(s);
    out += "  s" + std::to_string(s) + " [label=\"" + std::to_string(s) + ": " + escape(name) + "\"";
    if (s == ts.initial) out += ", penwidth=2";
    if (ts.deadlocks.contains(s)) out += ", style=dashed";
    out += "];\n";
  }
  for (std::size_t s = 0; s < ts.state_count; ++s) {
    std::vector<std::size_t> succ = ts.successors[s];
    std::sort(succ.begin(), succ.end());
    for (auto t : succ) out += "  s" + std::to_string(s) + " -> s" + std::to_string(t) + ";\n";
  }
  return out + "}\n";
}

ExplicitModel export_explicit(const TransitionSystem& ts) {
  ExplicitModel m;
  for (std::size_t s = 0; s < ts.state_count; ++s)
    m.sta += std::to_string(s) + ':' + (s < ts.names.size() ? ts.names[s] : "") + '\n';

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t s = 0; s < ts.state_count; ++s) {
    for (auto t : ts.successors[s]) edges.emplace_back(s, t);
  }
  std::sort(edges.begin(), edges.end());
  m.tra = std::to_string(ts.state_count) + ' ' + std::to_string(edges.size()) + '\n';
  for (auto [from, to] : edges) m.tra += std::to_string(from) + ' ' + std::to_string(to) + '\n';

  for (std::size_t i = 0; i < ts.label_order.size(); ++i) {
    if (i > 0) m.lab += ' ';
    m.lab += std::to_string(i) + "=\"" + escape(ts.label_order[i]) + '"';
  }
  m.lab += '\n';
  for (std::size_t s = 0; s < ts.state_count; ++s) {
    std::string ids;
    for (std::size_t i = 0; i < ts.label_order.size(); ++i) {
      if (ts.labels.at(ts.label_order[i])[s]) ids += ' ' + std::to_string(i);
    }
    if (!ids.empty()) m.lab += std::to_string(s) + ':' + ids + '\n';
  }
  return m;
}

}  // namespace canrt
