#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cancoord/controller.hpp"
#include "cancoord/message.hpp"

namespace cancoord {

/// Newline-delimited JSON over TCP, fronting a Controller. Each connection
/// gets its own reader thread; the controller itself is locked per message,
/// which serializes processing exactly like the in-process carrier.
/// Outbound messages are routed to the connection that last spoke for the
/// addressed cf_id; unconnected CFs simply never hear the request and the
/// transaction times out.
class TcpLineServer {
  public:
    struct Options {
        std::string host = "127.0.0.1";
        std::uint16_t port = 0; // 0: pick an ephemeral port
        long tick_interval_ms = 50;
    };

    TcpLineServer(Controller& controller, Options options);
    ~TcpLineServer();

    TcpLineServer(const TcpLineServer&) = delete;
    TcpLineServer& operator=(const TcpLineServer&) = delete;

    /// Binds and starts serving. Throws Error when the address is busy.
    void start();

    /// Aborts in-flight collections, closes all sockets, joins all threads.
    void stop();

    std::uint16_t port() const { return port_; }
    bool running() const { return running_.load(); }

  private:
    void accept_loop();
    void connection_loop(int fd);
    void ticker_loop();
    void route(const std::vector<Outbound>& outbound, int origin_fd);

    Controller& controller_;
    Options options_;
    std::uint16_t port_ = 0;
    int listen_fd_ = -1;
    std::atomic<bool> running_{false};
    std::mutex mutex_; // guards controller_, routes_ and fds_
    std::map<std::string, int> routes_;
    std::vector<int> fds_;
    std::vector<std::thread> threads_;
    std::thread accept_thread_;
    std::thread ticker_thread_;
    long tick_ = 0;
};

/// Blocking line-oriented client used by CF-side scripts and tests.
class TcpLineClient {
  public:
    TcpLineClient(const std::string& host, std::uint16_t port);
    ~TcpLineClient();

    TcpLineClient(const TcpLineClient&) = delete;
    TcpLineClient& operator=(const TcpLineClient&) = delete;

    void send(const CoordMessage& msg);
    void send_raw(const std::string& bytes);

    /// One decoded message, or nullopt when the timeout expires or the
    /// peer closes.
    std::optional<CoordMessage> recv(long timeout_ms = 2000);

  private:
    int fd_ = -1;
    std::string buffer_;
};

} // namespace cancoord
