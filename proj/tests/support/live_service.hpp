#pragma once

#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "canrt/service.hpp"

namespace canrt::testing {

/// A service bound to a free local port, served from a background thread for the lifetime of
/// the object.
class LiveService {
 public:
  explicit LiveService(std::optional<std::string> default_source,
                       std::optional<std::filesystem::path> journal_dir = std::nullopt);
  ~LiveService();

  int port() const { return port_; }
  httplib::Client client() const;
  SessionManager& sessions() { return sessions_; }

 private:
  SessionManager sessions_;
  Service service_;
  int port_ = -1;
  std::thread thread_;
};

struct SseEvent {
  std::size_t id = 0;
  std::string type;
  nlohmann::json data;
};

std::vector<SseEvent> parse_sse(const std::string& body);

struct DrillOutcome {
  bool ok = false;  // every request succeeded
  std::string session;
  std::vector<SseEvent> events;
  nlohmann::json final_state;
  std::optional<std::size_t> motive_step;
  std::optional<std::size_t> attention_step;
  std::string attention_identifier;
  std::string attention_event;
  std::string status_identifier1;
  std::string status_identifier2;
  bool parked = false;
  bool parking_plan_selected = false;
  std::string error;
};

/// Create a session, fly until airborne, report an engine malfunction, step until quiescent,
/// then read the whole event feed.
DrillOutcome engine_malfunction_drill(httplib::Client& client);

}  // namespace canrt::testing
