#pragma once

#include <memory>
#include <string>

#include "canrt/session.hpp"

namespace httplib {
class Server;
}

namespace canrt {

/// HTTP front end for a SessionManager. Routes live under /v1; see api/v1/schema.json.
class Service {
 public:
  explicit Service(SessionManager& sessions);
  ~Service();

  /// Binds and serves until stop(). Returns false if the address could not be bound.
  bool listen(const std::string& host, int port);
  /// Binds to a free port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void wait_until_ready() const;
  void stop();

 private:
  void install_routes();

  SessionManager& sessions_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace canrt
