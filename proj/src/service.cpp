#include "canrt/service.hpp"

#include <charconv>

#include "httplib.h"

namespace canrt {

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  nlohmann::ordered_json body;
  body["error"] = {{"code", code}, {"message", message}};
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_json(httplib::Response& res, const nlohmann::ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

// Empty bodies are treated as `{}` so that `POST .../step` without a payload steps once.
nlohmann::json request_object(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  nlohmann::json body;
  try {
    body = nlohmann::json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedRequest(std::string("body is not valid JSON: ") + e.what());
  }
  if (!body.is_object()) throw MalformedRequest("body must be a JSON object");
  return body;
}

std::uint64_t unsigned_field(const nlohmann::json& body, const char* key, std::uint64_t fallback) {
  auto it = body.find(key);
  if (it == body.end()) return fallback;
  if (!it->is_number_unsigned()) throw MalformedRequest(std::string("field '") + key + "' must be a non-negative integer");
  return it->get<std::uint64_t>();
}

std::optional<std::size_t> parse_index(const std::string& text) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string sse_frame(const StreamEvent& e) {
  return "id: " + std::to_string(e.id) + "\nevent: " + e.type + "\ndata: " + e.data.dump() + "\n\n";
}

template <class Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const SessionNotFound& e) {
      send_error(res, 404, "not-found", e.what());
    } catch (const RejectedRequest& e) {
      send_error(res, 409, "conflict", e.what());
    } catch (const MalformedRequest& e) {
      send_error(res, 422, "malformed", e.what());
    } catch (const ParseError& e) {
      send_error(res, 422, "parse-error", e.render("source"));
    } catch (const ValidationError& e) {
      send_error(res, 422, "validation-error", e.render("source"));
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

}  // namespace

Service::Service(SessionManager& sessions)
    : sessions_(sessions), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

Service::~Service() { stop(); }

void Service::install_routes() {
  auto& srv = *server_;

  srv.Post("/v1/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
             auto body = request_object(req);
             std::optional<std::string> source;
             if (auto it = body.find("source"); it != body.end()) {
               if (!it->is_string()) throw MalformedRequest("field 'source' must be a string");
               source = it->get<std::string>();
             }
             Policy policy = Policy::fifo;
             if (auto it = body.find("policy"); it != body.end()) {
               auto parsed = it->is_string() ? parse_policy(it->get<std::string>()) : std::nullopt;
               if (!parsed) throw MalformedRequest("field 'policy' must be \"fifo\" or \"random\"");
               policy = *parsed;
             }
             std::uint64_t seed = unsigned_field(body, "seed", 0);
             std::string id = sessions_.create(source, policy, seed);
             send_json(res, {{"id", id}}, 201);
           }));

  srv.Get(R"(/v1/sessions/([^/]+)/state)",
          guarded([this](const httplib::Request& req, httplib::Response& res) {
            send_json(res, sessions_.get(req.matches[1])->snapshot());
          }));

  srv.Post(R"(/v1/sessions/([^/]+)/step)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             auto session = sessions_.get(req.matches[1]);
             auto body = request_object(req);
             std::uint64_t count = unsigned_field(body, "count", 1);
             if (count > 100000) throw MalformedRequest("field 'count' must be at most 100000");
             send_json(res, session->step(count));
           }));

  srv.Post(R"(/v1/sessions/([^/]+)/inject)",
           guarded([this](const httplib::Request& req, httplib::Response& res) {
             auto session = sessions_.get(req.matches[1]);
             Injection in = parse_injection(request_object(req));
             session->inject(in);
             send_json(res, {{"accepted", true}, {"injection", to_json(in)}}, 202);
           }));

  srv.Get(R"(/v1/sessions/([^/]+)/stream)",
          guarded([this](const httplib::Request& req, httplib::Response& res) {
            auto session = sessions_.get(req.matches[1]);
            std::size_t from = 0;
            if (req.has_param("from")) {
              auto parsed = parse_index(req.get_param_value("from"));
              if (!parsed) throw MalformedRequest("query 'from' must be a non-negative integer");
              from = *parsed;
            }
            if (req.has_header("Last-Event-ID")) {
              auto parsed = parse_index(req.get_header_value("Last-Event-ID"));
              if (!parsed) throw MalformedRequest("Last-Event-ID must be a non-negative integer");
              from = std::max(from, *parsed + 1);
            }
            std::string follow = req.has_param("follow") ? req.get_param_value("follow") : "1";
            if (follow != "0" && follow != "1" && follow != "true" && follow != "false")
              throw MalformedRequest("query 'follow' must be 0, 1, true or false");
            res.set_header("Cache-Control", "no-cache");

            if (follow == "0" || follow == "false") {
              std::string out;
              for (const auto& e : session->events_from(from, std::chrono::milliseconds(0)))
                out += sse_frame(e);
              res.set_content(out, "text/event-stream");
              return;
            }
            auto next = std::make_shared<std::size_t>(from);
            res.set_chunked_content_provider(
                "text/event-stream", [session, next](std::size_t, httplib::DataSink& sink) {
                  if (session->closed()) {
                    sink.done();
                    return true;
                  }
                  for (const auto& e : session->events_from(*next, std::chrono::milliseconds(250))) {
                    std::string frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size())) return false;
                    *next = e.id + 1;
                  }
                  return sink.is_writable();
                });
          }));

  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      if (res.status == 404) send_error(res, 404, "not-found", "no such route");
      else send_error(res, res.status, "error", "request failed");
    }
  });
}

bool Service::listen(const std::string& host, int port) { return server_->listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::listen_after_bind() { return server_->listen_after_bind(); }

void Service::wait_until_ready() const { server_->wait_until_ready(); }

void Service::stop() {
  sessions_.close_all();
  if (server_->is_running()) server_->stop();
}

}  // namespace canrt
