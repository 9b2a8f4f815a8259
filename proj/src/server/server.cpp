// Copyright 2026 The SwarmTouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "swarmtouch/server/server.hpp"

#include "swarmtouch/server/session.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace swarmtouch::server
{
namespace
{

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

class WsSession;

// Bookkeeping shared by the network side; touched only on the io thread
// except for the command queue.
struct Hub
{
  std::set<std::shared_ptr<WsSession>> sessions;

  std::mutex queue_mutex;
  std::deque<std::pair<std::weak_ptr<WsSession>, std::string>> commands;

  void submit(std::weak_ptr<WsSession> from, std::string text)
  {
    std::lock_guard lock(queue_mutex);
    commands.emplace_back(std::move(from), std::move(text));
  }
};

class WsSession : public std::enable_shared_from_this<WsSession>
{
public:
  WsSession(tcp::socket && socket, Hub & hub) : ws_(std::move(socket)), hub_(hub) {}

  void run(http::request<http::string_body> req)
  {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) { self->on_accept(ec); });
  }

  // Newer snapshot replaces one still waiting to be written.
  void deliver_snapshot(std::shared_ptr<const std::string> s)
  {
    latest_ = std::move(s);
    pump();
  }

  // Never dropped: error and status frames.
  void deliver_urgent(std::string s)
  {
    urgent_.push_back(std::move(s));
    pump();
  }

  void close()
  {
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
    beast::get_lowest_layer(ws_).close();
  }

private:
  void on_accept(beast::error_code ec)
  {
    if (ec) {
      return;
    }
    hub_.sessions.insert(shared_from_this());
    read();
  }

  void read()
  {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t n) {
      self->on_read(ec, n);
    });
  }

  void on_read(beast::error_code ec, std::size_t)
  {
    if (ec) {
      hub_.sessions.erase(shared_from_this());
      return;
    }
    hub_.submit(weak_from_this(), beast::buffers_to_string(buffer_.data()));
    buffer_.consume(buffer_.size());
    read();
  }

  void pump()
  {
    if (busy_) {
      return;
    }
    if (!urgent_.empty()) {
      out_ = std::move(urgent_.front());
      urgent_.pop_front();
    } else if (latest_) {
      out_ = *latest_;
      latest_.reset();
    } else {
      return;
    }
    busy_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(out_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->busy_ = false;
      if (ec) {
        self->hub_.sessions.erase(self);
        return;
      }
      self->pump();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Hub & hub_;
  beast::flat_buffer buffer_;
  std::deque<std::string> urgent_;
  std::shared_ptr<const std::string> latest_;
  std::string out_;
  bool busy_{false};
};

std::string mime_type(const std::filesystem::path & p)
{
  const auto ext = p.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

class HttpSession : public std::enable_shared_from_this<HttpSession>
{
public:
  HttpSession(tcp::socket && socket, Hub & hub, const std::filesystem::path & root)
  : stream_(std::move(socket)), hub_(hub), root_(root)
  {
  }

  void run() { read(); }

private:
  void read()
  {
    req_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->on_read(ec);
    });
  }

  void on_read(beast::error_code ec)
  {
    if (ec) {
      stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
      return;
    }
    if (websocket::is_upgrade(req_)) {
      if (req_.target() == "/ws") {
        stream_.expires_never();
        std::make_shared<WsSession>(stream_.release_socket(), hub_)->run(std::move(req_));
        return;
      }
      respond(text_response(http::status::not_found, "websocket endpoint is /ws\n"));
      return;
    }
    respond(serve_file());
  }

  http::response<http::string_body> text_response(http::status status, std::string body)
  {
    http::response<http::string_body> res{status, req_.version()};
    res.set(http::field::content_type, "text/plain");
    res.keep_alive(req_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> serve_file()
  {
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return text_response(http::status::method_not_allowed, "GET only\n");
    }
    std::string target(req_.target());
    target = target.substr(0, target.find('?'));
    if (target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
      return text_response(http::status::bad_request, "bad path\n");
    }
    if (target.back() == '/') {
      target += "index.html";
    }
    const auto path = root_ / target.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in || std::filesystem::is_directory(path)) {
      return text_response(http::status::not_found, "not found\n");
    }
    std::ostringstream body;
    body << in.rdbuf();
    http::response<http::string_body> res{http::status::ok, req_.version()};
    res.set(http::field::content_type, mime_type(path));
    res.keep_alive(req_.keep_alive());
    res.body() = body.str();
    res.prepare_payload();
    if (req_.method() == http::verb::head) {
      res.body().clear();
    }
    return res;
  }

  void respond(http::response<http::string_body> res)
  {
    auto owned = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *owned, [self = shared_from_this(), owned](beast::error_code ec, std::size_t) {
      if (ec || !owned->keep_alive()) {
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
        return;
      }
      self->read();
    });
  }

  beast::tcp_stream stream_;
  Hub & hub_;
  const std::filesystem::path & root_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

}  // namespace

std::pair<std::string, unsigned short> parse_bind(std::string_view bind)
{
  const auto colon = bind.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == bind.size()) {
    throw ConfigError("bind address must look like host:port");
  }
  const std::string host(bind.substr(0, colon));
  const std::string port(bind.substr(colon + 1));
  unsigned long value = 0;
  try {
    std::size_t used = 0;
    value = std::stoul(port, &used);
    if (used != port.size()) {
      throw std::invalid_argument(port);
    }
  } catch (const std::exception &) {
    throw ConfigError("bad port '" + port + "'");
  }
  if (value > 65535) {
    throw ConfigError("port out of range");
  }
  return {host, static_cast<unsigned short>(value)};
}

struct SteerServer::Impl
{
  Impl(const sim::ScenarioConfig & config, ServerOptions opts)
  : options(std::move(opts)), session(config, options.record_dir), acceptor(ioc), work(net::make_work_guard(ioc))
  {
    if (options.speed != 1.0) {
      session.apply(SetSpeed{options.speed});
    }
  }

  void accept()
  {
    acceptor.async_accept(ioc, [this](beast::error_code ec, tcp::socket socket) {
      if (ec) {
        return;
      }
      std::make_shared<HttpSession>(std::move(socket), hub, options.static_dir)->run();
      accept();
    });
  }

  void broadcast_snapshot(std::shared_ptr<const std::string> s)
  {
    net::post(ioc, [this, s] {
      for (const auto & c : hub.sessions) {
        c->deliver_snapshot(s);
      }
    });
  }

  void broadcast_urgent(std::string s)
  {
    net::post(ioc, [this, s = std::move(s)] {
      for (const auto & c : hub.sessions) {
        c->deliver_urgent(s);
      }
    });
  }

  void simulate()
  {
    using clock = std::chrono::steady_clock;
    const double dt = session.world().config().dt;
    const auto snapshot_period =
      std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(1.0 / session.world().config().snapshot_hz));
    auto next_tick = clock::now();
    auto next_snapshot = next_tick;
    std::optional<std::uint64_t> last_sent;

    while (!stopping.load()) {
      std::deque<std::pair<std::weak_ptr<WsSession>, std::string>> batch;
      {
        std::lock_guard lock(hub.queue_mutex);
        batch.swap(hub.commands);
      }
      for (auto & [from, text] : batch) {
        const bool was_paused = session.paused();
        const double was_speed = session.speed();
        if (auto err = session.apply_text(text)) {
          net::post(ioc, [from = from, frame = err->dump()] {
            if (auto s = from.lock()) {
              s->deliver_urgent(frame);
            }
          });
        } else if (was_paused != session.paused() || was_speed != session.speed()) {
          broadcast_urgent(session.status().dump());
        }
      }

      session.tick();

      const auto now = clock::now();
      if (now >= next_snapshot) {
        const auto tick = session.world().state().tick;
        if (!session.paused() && (!last_sent || tick > *last_sent)) {
          broadcast_snapshot(std::make_shared<const std::string>(session.snapshot().dump()));
          last_sent = tick;
        }
        next_snapshot += snapshot_period;
        if (next_snapshot < now) {
          next_snapshot = now + snapshot_period;
        }
      }

      next_tick += std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(dt / session.speed()));
      if (next_tick < now - std::chrono::milliseconds(250)) {
        next_tick = now;  // fell far behind; do not try to catch up in a burst
      }
      std::this_thread::sleep_until(next_tick);
    }
    session.flush();
  }

  ServerOptions options;
  LiveSession session;
  net::io_context ioc;
  tcp::acceptor acceptor;
  net::executor_work_guard<net::io_context::executor_type> work;
  Hub hub;
  std::thread io_thread;
  std::thread sim_thread;
  std::atomic<bool> stopping{false};
  std::mutex done_mutex;
  std::condition_variable done_cv;
  bool done{false};
};

SteerServer::SteerServer(const sim::ScenarioConfig & config, ServerOptions options)
: impl_(std::make_unique<Impl>(config, std::move(options)))
{
}

SteerServer::~SteerServer() { stop(); }

void SteerServer::start()
{
  auto & i = *impl_;
  const auto address = net::ip::make_address(i.options.address);
  const tcp::endpoint endpoint{address, i.options.port};
  i.acceptor.open(endpoint.protocol());
  i.acceptor.set_option(net::socket_base::reuse_address(true));
  i.acceptor.bind(endpoint);
  i.acceptor.listen(net::socket_base::max_listen_connections);
  i.accept();
  i.io_thread = std::thread([&i] { i.ioc.run(); });
  i.sim_thread = std::thread([&i] { i.simulate(); });
}

void SteerServer::stop()
{
  auto & i = *impl_;
  if (i.stopping.exchange(true)) {
    return;
  }
  if (i.sim_thread.joinable()) {
    i.sim_thread.join();
  }
  if (i.io_thread.joinable()) {
    std::promise<void> closed;
    net::post(i.ioc, [&i, &closed] {
      beast::error_code ec;
      i.acceptor.close(ec);
      for (const auto & s : i.hub.sessions) {
        s->close();
      }
      i.hub.sessions.clear();
      closed.set_value();
    });
    closed.get_future().wait_for(std::chrono::seconds(2));
  }
  i.work.reset();
  i.ioc.stop();
  if (i.io_thread.joinable()) {
    i.io_thread.join();
  }
  {
    std::lock_guard lock(i.done_mutex);
    i.done = true;
  }
  i.done_cv.notify_all();
}

void SteerServer::wait()
{
  auto & i = *impl_;
  std::unique_lock lock(i.done_mutex);
  i.done_cv.wait(lock, [&i] { return i.done; });
}

unsigned short SteerServer::port() const { return impl_->acceptor.local_endpoint().port(); }

}  // namespace swarmtouch::server
