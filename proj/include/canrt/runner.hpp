#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "canrt/semantics.hpp"

namespace canrt {

enum class Policy { fifo, random };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

/// Picks one transition per step: the first in canonical order, or uniformly at random from a
/// seeded generator so that runs are reproducible.
class Scheduler {
 public:
  Scheduler(Policy policy, std::uint64_t seed) : policy_(policy), rng_(seed) {}

  std::size_t pick(std::size_t choices);
  Policy policy() const { return policy_; }

 private:
  Policy policy_;
  std::mt19937_64 rng_;
};

struct RecordReport {
  std::string identifier;
  std::string event;
  Status status = Status::pending;
  /// Present while the record has an intention.
  std::optional<Progress> progress;
};

struct StatusChange {
  std::string identifier;
  std::string event;
  std::optional<Status> from;  // empty when the record was just created
  Status to = Status::pending;
};

struct Attention {
  std::string identifier;
  std::string event;
};

/// One applied rule, described entirely in terms of the configuration it produced.
struct StepRecord {
  std::size_t step = 0;
  Rule rule = Rule::event;
  std::string identifier;
  std::vector<RecordReport> records;
  std::vector<Attention> attention;
  std::vector<StatusChange> status_changes;
  std::vector<std::string> added;
  std::vector<std::string> removed;
  std::string config;
  /// No rule is enabled in the resulting configuration.
  bool quiescent = false;
};

std::vector<RecordReport> report_records(const Program& program, const AgentConfig& config);

StepRecord make_record(const Program& program, std::size_t step, const Transition& transition,
                       const AgentConfig& before);

nlohmann::ordered_json to_json(const Progress& progress);
nlohmann::ordered_json to_json(const RecordReport& record);
nlohmann::ordered_json to_json(const StepRecord& record);

/// Executes an agent one rule at a time under a scheduling policy.
class Runner {
 public:
  Runner(const Program& program, Policy policy, std::uint64_t seed);

  /// Applies one rule; empty when none is enabled.
  std::optional<StepRecord> step();
  bool quiescent() const;

  const AgentConfig& config() const { return config_; }
  /// Replaces the configuration (used for environment injections). Throws InvariantViolation.
  void set_config(AgentConfig config);
  std::size_t steps_taken() const { return steps_; }

 private:
  const Program& program_;
  Scheduler scheduler_;
  AgentConfig config_;
  std::size_t steps_ = 0;
};

/// Runs until quiescent or `max_steps` rules have been applied.
std::vector<StepRecord> run(const Program& program, Policy policy, std::uint64_t seed,
                            std::size_t max_steps);

}  // namespace canrt
