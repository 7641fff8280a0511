#pragma once

#include <memory>
#include <string>

#include "dgr/classify.hpp"
#include "dgr/dispatch.hpp"

namespace dgr {

/// HTTP + WebSocket front end for GatewaySession.
///
///   GET /health      model metadata (see health_json)
///   WS  /session     one GatewaySession per connection, one JSON text
///                    message per client message, replies in order
///
/// The constructor binds the listening socket, so a busy port fails there
/// with IoError.
class GatewayServer {
 public:
  GatewayServer(std::shared_ptr<const Model> model, Bindings bindings, const std::string& address,
                unsigned short port);
  ~GatewayServer();

  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  unsigned short port() const;

  /// Serves until stop() (or SIGINT/SIGTERM when handle_signals is set).
  void run(bool handle_signals = false);

  /// Thread-safe. Closes the listener and every open connection.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dgr
