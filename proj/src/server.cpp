#include "dgr/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "dgr/errors.hpp"
#include "dgr/gateway.hpp"

namespace dgr {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct GatewayServer::Impl {
  std::shared_ptr<const Model> model;
  Bindings bindings;
  asio::io_context ioc;
  tcp::acceptor acceptor{ioc};
  std::atomic<bool> stopping{false};

  std::mutex mutex;
  std::map<std::uint64_t, int> open_fds;
  std::uint64_t next_id = 0;
  std::vector<std::thread> workers;

  void accept_next() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec || stopping) return;
      std::lock_guard lock(mutex);
      const std::uint64_t id = next_id++;
      open_fds[id] = socket.native_handle();
      workers.emplace_back([this, id, s = std::move(socket)]() mutable { serve_connection(id, std::move(s)); });
      accept_next();
    });
  }

  void serve_connection(std::uint64_t id, tcp::socket socket) {
    // Declared after `socket` so the fd is unregistered before it closes.
    struct Unregister {
      Impl* impl;
      std::uint64_t id;
      ~Unregister() {
        std::lock_guard lock(impl->mutex);
        impl->open_fds.erase(id);
      }
    } unregister{this, id};

    try {
      beast::flat_buffer buffer;
      http::request<http::string_body> request;
      http::read(socket, buffer, request);

      if (websocket::is_upgrade(request) && request.target() == "/session") {
        websocket::stream<tcp::socket> ws(std::move(socket));
        ws.accept(request);
        GatewaySession session(model, bindings);
        for (;;) {
          beast::flat_buffer incoming;
          ws.read(incoming);
          for (const auto& reply : session.handle_text(beast::buffers_to_string(incoming.data()))) {
            ws.text(true);
            ws.write(asio::buffer(reply));
          }
        }
      }

      http::response<http::string_body> response;
      response.version(request.version());
      response.keep_alive(false);
      if (request.method() == http::verb::get && request.target() == "/health") {
        response.result(http::status::ok);
        response.set(http::field::content_type, "application/json");
        response.body() = health_json(*model).dump();
      } else {
        response.result(http::status::not_found);
        response.set(http::field::content_type, "application/json");
        response.body() = R"({"error":"not found"})";
      }
      response.prepare_payload();
      http::write(socket, response);
      beast::error_code ignored;
      socket.shutdown(tcp::socket::shutdown_send, ignored);
    } catch (const std::exception&) {
      // Peer went away or sent garbage; the connection just ends.
    }
  }
};

GatewayServer::GatewayServer(std::shared_ptr<const Model> model, Bindings bindings, const std::string& address,
                             unsigned short port)
    : impl_(std::make_unique<Impl>()) {
  impl_->model = std::move(model);
  impl_->bindings = std::move(bindings);
  beast::error_code ec;
  const auto ip = asio::ip::make_address(address, ec);
  if (ec) throw InvalidArgument("bad listen address '" + address + "'");
  const tcp::endpoint endpoint(ip, port);
  impl_->acceptor.open(endpoint.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(endpoint, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw IoError("cannot listen on " + address + ":" + std::to_string(port) + ": " + ec.message());
  }
}

GatewayServer::~GatewayServer() {
  stop();
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
}

unsigned short GatewayServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void GatewayServer::run(bool handle_signals) {
  std::optional<asio::signal_set> signals;
  if (handle_signals) {
    signals.emplace(impl_->ioc, SIGINT, SIGTERM);
    signals->async_wait([this](beast::error_code, int) { stop(); });
  }
  impl_->accept_next();
  impl_->ioc.run();
}

void GatewayServer::stop() {
  if (impl_->stopping.exchange(true)) return;
  asio::post(impl_->ioc, [this] {
    beast::error_code ignored;
    impl_->acceptor.close(ignored);
    impl_->ioc.stop();
  });
  // A run() that never started still has to notice.
  if (impl_->ioc.stopped()) impl_->acceptor.close();
  std::lock_guard lock(impl_->mutex);
  for (const auto& [id, fd] : impl_->open_fds) ::shutdown(fd, SHUT_RDWR);
}

}  // namespace dgr
