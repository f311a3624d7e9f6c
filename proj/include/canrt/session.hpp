#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "canrt/errors.hpp"
#include "canrt/runner.hpp"
#include "canrt/semantics.hpp"

namespace canrt {

class SessionNotFound : public Error {
 public:
  using Error::Error;
};

/// Well-formed request that conflicts with the agent (undeclared name, reused identifier).
class RejectedRequest : public Error {
 public:
  using Error::Error;
};

class MalformedRequest : public Error {
 public:
  using Error::Error;
};

/// An environment change queued for the next step. `ack` records an operator acknowledgement
/// and leaves the agent untouched.
struct Injection {
  enum class Op { add_belief, remove_belief, post_event, ack };

  Op op = Op::ack;
  std::string name;        // atom or event
  std::string identifier;  // post_event only
  std::string note;        // ack only
};

/// Throws MalformedRequest.
Injection parse_injection(const nlohmann::json& body);
nlohmann::ordered_json to_json(const Injection& injection);

struct StreamEvent {
  std::size_t id = 0;
  std::string type;  // step | attention | status-change | quiescent
  nlohmann::ordered_json data;
};

/// One simulated agent. Every public member is safe to call concurrently; mutations are applied
/// in a single order under the session lock and appended to the journal in that order.
class Session {
 public:
  Session(std::string id, std::string source, Policy policy, std::uint64_t seed,
          std::optional<std::filesystem::path> journal = std::nullopt);

  /// Rebuilds a session by re-applying its journal.
  static std::unique_ptr<Session> replay(const std::filesystem::path& journal,
                                         std::optional<std::string> id = std::nullopt);

  const std::string& id() const { return id_; }

  nlohmann::ordered_json snapshot() const;
  /// Drains queued injections, then applies up to `count` rules.
  nlohmann::ordered_json step(std::size_t count);
  /// Validates and queues. Throws RejectedRequest.
  void inject(const Injection& injection);

  /// Events with id >= from. When `wait` is set and none are available, blocks until one arrives,
  /// the timeout passes or close() is called.
  std::vector<StreamEvent> events_from(std::size_t from, std::chrono::milliseconds wait) const;
  std::size_t event_count() const;
  void close();
  bool closed() const;

 private:
  nlohmann::ordered_json snapshot_locked() const;
  void append_journal(const nlohmann::ordered_json& entry);
  void publish(std::string type, nlohmann::ordered_json data);
  void drain_locked();

  std::string id_;
  std::string source_;
  Policy policy_;
  std::uint64_t seed_;
  std::unique_ptr<Program> program_;
  std::unique_ptr<Runner> runner_;
  std::vector<Injection> queue_;
  std::vector<nlohmann::ordered_json> attention_;
  std::vector<StreamEvent> events_;
  bool was_quiescent_ = false;
  bool closed_ = false;
  std::optional<std::filesystem::path> journal_path_;

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
};

class SessionManager {
 public:
  explicit SessionManager(std::optional<std::string> default_source = std::nullopt,
                          std::optional<std::filesystem::path> journal_dir = std::nullopt);
  ~SessionManager();

  /// Uses the default source when `source` is empty. Throws ParseError, ValidationError, or
  /// MalformedRequest when there is no source at all.
  std::string create(std::optional<std::string> source, Policy policy, std::uint64_t seed);
  /// Throws SessionNotFound.
  std::shared_ptr<Session> get(const std::string& id) const;
  std::vector<std::string> ids() const;
  /// Wakes all stream readers so the service can shut down.
  void close_all();

 private:
  std::optional<std::string> default_source_;
  std::optional<std::filesystem::path> journal_dir_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_ = 1;
  mutable std::mutex mutex_;
};

}  // namespace canrt
