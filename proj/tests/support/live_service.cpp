#include "live_service.hpp"

#include <algorithm>
#include <sstream>

namespace canrt::testing {

LiveService::LiveService(std::optional<std::string> default_source,
                         std::optional<std::filesystem::path> journal_dir)
    : sessions_(std::move(default_source), std::move(journal_dir)), service_(sessions_) {
  port_ = service_.bind_any_port("127.0.0.1");
  thread_ = std::thread([this] { service_.listen_after_bind(); });
  service_.wait_until_ready();
}

LiveService::~LiveService() {
  service_.stop();
  if (thread_.joinable()) thread_.join();
}

httplib::Client LiveService::client() const {
  httplib::Client c("127.0.0.1", port_);
  c.set_read_timeout(5, 0);
  return c;
}

std::vector<SseEvent> parse_sse(const std::string& body) {
  std::vector<SseEvent> out;
  std::istringstream in(body);
  std::string line;
  SseEvent current;
  bool any = false;
  while (std::getline(in, line)) {
    if (line.empty()) {
      if (any) out.push_back(current);
      current = SseEvent{};
      any = false;
    } else if (line.rfind("id: ", 0) == 0) {
      current.id = std::stoul(line.substr(4));
      any = true;
    } else if (line.rfind("event: ", 0) == 0) {
      current.type = line.substr(7);
      any = true;
    } else if (line.rfind("data: ", 0) == 0) {
      current.data = nlohmann::json::parse(line.substr(6));
      any = true;
    }
  }
  return out;
}

namespace {

std::optional<nlohmann::json> post(httplib::Client& client, const std::string& path,
                                   const nlohmann::json& body, DrillOutcome& out) {
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res || res->status >= 300) {
    out.error = "POST " + path + " failed" + (res ? ": " + std::to_string(res->status) + " " + res->body : "");
    return std::nullopt;
  }
  return nlohmann::json::parse(res->body);
}

}  // namespace

DrillOutcome engine_malfunction_drill(httplib::Client& client) {
  DrillOutcome out;
  auto created = post(client, "/v1/sessions", {{"policy", "fifo"}, {"seed", 0}}, out);
  if (!created) return out;
  out.session = (*created)["id"];
  const std::string base = "/v1/sessions/" + out.session;

  // Adopt, post, select the first path plan and take off.
  nlohmann::json state;
  for (int i = 0; i < 50; ++i) {
    auto stepped = post(client, base + "/step", {{"count", 1}}, out);
    if (!stepped) return out;
    state = (*stepped)["state"];
    auto beliefs = state["beliefs"].get<std::vector<std::string>>();
    if (std::find(beliefs.begin(), beliefs.end(), "flying") != beliefs.end()) break;
  }
  if (!post(client, base + "/inject", {{"op", "add-belief"}, {"atom", "engine_malfunc"}}, out)) return out;

  bool quiescent = false;
  for (int i = 0; i < 500 && !quiescent; ++i) {
    auto stepped = post(client, base + "/step", {{"count", 1}}, out);
    if (!stepped) return out;
    quiescent = (*stepped)["quiescent"];
    state = (*stepped)["state"];
  }
  if (!quiescent) {
    out.error = "session never became quiescent";
    return out;
  }
  out.final_state = state;

  auto res = client.Get(base + "/stream?from=0&follow=0");
  if (!res || res->status != 200) {
    out.error = "stream request failed";
    return out;
  }
  out.events = parse_sse(res->body);
  for (const auto& e : out.events) {
    if (e.type == "step") {
      if (e.data["rule"] == "motive") out.motive_step = e.data["step"].get<std::size_t>();
      for (const auto& added : e.data["beliefs"]["added"]) out.parked = out.parked || added == "parked";
    } else if (e.type == "attention" && !out.attention_step) {
      out.attention_step = e.data["step"].get<std::size_t>();
      out.attention_identifier = e.data["identifier"];
      out.attention_event = e.data["event"];
    }
  }
  for (const auto& r : state["records"]) {
    if (r["identifier"] == "identifier1") out.status_identifier1 = r["status"];
    if (r["identifier"] == "identifier2") out.status_identifier2 = r["status"];
  }
  for (const auto& e : out.events) {
    if (e.type != "step") continue;
    const std::string config = e.data["config"];
    out.parking_plan_selected = out.parking_plan_selected || config.find("e_retrv.P5") != std::string::npos;
  }
  out.ok = true;
  return out;
}

}  // namespace canrt::testing
