#include "canrt/runner.hpp"

#include <algorithm>

#include "canrt/explorer.hpp"

namespace canrt {

std::string_view to_string(Policy policy) { return policy == Policy::fifo ? "fifo" : "random"; }

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "fifo") return Policy::fifo;
  if (text == "random") return Policy::random;
  return std::nullopt;
}

std::size_t Scheduler::pick(std::size_t choices) {
  if (policy_ == Policy::fifo || choices <= 1) return 0;
  std::uniform_int_distribution<std::size_t> dist(0, choices - 1);
  return dist(rng_);
}

std::vector<RecordReport> report_records(const Program& program, const AgentConfig& config) {
  std::vector<RecordReport> out;
  for (const auto& r : config.events) {
    RecordReport rep{r.identifier, r.event, r.status, std::nullopt};
    if (const Intention* in = config.intention(r.identifier))
      rep.progress = estimate_progress(in->trace, program.traces());
    out.push_back(std::move(rep));
  }
  return out;
}

StepRecord make_record(const Program& program, std::size_t step, const Transition& transition,
                       const AgentConfig& before) {
  const AgentConfig& after = transition.target;
  StepRecord rec;
  rec.step = step;
  rec.rule = transition.rule;
  rec.identifier = transition.identifier;
  rec.records = report_records(program, after);

  if (transition.rule == Rule::motive) {
    if (const EventRecord* r = after.record(transition.identifier))
      rec.attention.push_back({r->identifier, r->event});
  }
  for (const auto& r : after.events) {
    const EventRecord* old = before.record(r.identifier);
    if (old == nullptr) {
      rec.status_changes.push_back({r.identifier, r.event, std::nullopt, r.status});
    } else if (old->status != r.status) {
      rec.status_changes.push_back({r.identifier, r.event, old->status, r.status});
    }
  }

  const auto& b0 = before.beliefs.atoms();
  const auto& b1 = after.beliefs.atoms();
  std::set_difference(b1.begin(), b1.end(), b0.begin(), b0.end(), std::back_inserter(rec.added));
  std::set_difference(b0.begin(), b0.end(), b1.begin(), b1.end(), std::back_inserter(rec.removed));

  rec.config = canonical_form(after);
  rec.quiescent = agent_transitions(program, after).empty();
  return rec;
}

nlohmann::ordered_json to_json(const Progress& progress) {
  nlohmann::ordered_json j;
  j["ratio"] = progress.ratio.to_string();
  j["value"] = progress.ratio.to_double();
  j["min"] = progress.min_ratio.to_string();
  j["max"] = progress.max_ratio.to_string();
  return j;
}

nlohmann::ordered_json to_json(const RecordReport& record) {
  nlohmann::ordered_json j;
  j["identifier"] = record.identifier;
  j["event"] = record.event;
  j["status"] = to_string(record.status);
  j["progress"] = record.progress ? to_json(*record.progress) : nlohmann::ordered_json();
  return j;
}

nlohmann::ordered_json to_json(const StepRecord& record) {
  nlohmann::ordered_json j;
  j["step"] = record.step;
  j["rule"] = to_string(record.rule);
  j["identifier"] = record.identifier;
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : record.records) j["records"].push_back(to_json(r));
  j["attention"] = nlohmann::ordered_json::array();
  for (const auto& a : record.attention)
    j["attention"].push_back({{"identifier", a.identifier}, {"event", a.event}});
  j["status_changes"] = nlohmann::ordered_json::array();
  for (const auto& c : record.status_changes) {
    nlohmann::ordered_json change;
    change["identifier"] = c.identifier;
    change["event"] = c.event;
    change["from"] = c.from ? nlohmann::ordered_json(to_string(*c.from)) : nlohmann::ordered_json();
    change["to"] = to_string(c.to);
    j["status_changes"].push_back(std::move(change));
  }
  j["beliefs"] = {{"added", record.added}, {"removed", record.removed}};
  j["config"] = record.config;
  j["quiescent"] = record.quiescent;
  return j;
}

Runner::Runner(const Program& program, Policy policy, std::uint64_t seed)
    : program_(program), scheduler_(policy, seed), config_(program.initial_config()) {}

std::optional<StepRecord> Runner::step() {
  auto transitions = agent_transitions(program_, config_);
  if (transitions.empty()) return std::nullopt;
  const Transition& chosen = transitions[scheduler_.pick(transitions.size())];
  StepRecord rec = make_record(program_, steps_++, chosen, config_);
  config_ = chosen.target;
  return rec;
}

bool Runner::quiescent() const { return agent_transitions(program_, config_).empty(); }

void Runner::set_config(AgentConfig config) {
  config.normalize();
  check_invariants(config);
  config_ = std::move(config);
}

std::vector<StepRecord> run(const Program& program, Policy policy, std::uint64_t seed,
                            std::size_t max_steps) {
  Runner runner(program, policy, seed);
  std::vector<StepRecord> out;
  while (out.size() < max_steps) {
    auto rec = runner.step();
    if (!rec) break;
    bool done = rec->quiescent;
    out.push_back(std::move(*rec));
    if (done) break;
  }
  return out;
}

}  // namespace canrt
