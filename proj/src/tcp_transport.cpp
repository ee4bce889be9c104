#include "cancoord/tcp_transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace cancoord {

namespace {

void send_line(int fd, const std::string& line) {
    std::size_t off = 0;
    while (off < line.size()) {
        const ssize_t n = ::send(fd, line.data() + off, line.size() - off, MSG_NOSIGNAL);
        if (n <= 0)
            return; // peer gone; the transaction will time out
        off += static_cast<std::size_t>(n);
    }
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw Error("invalid bind address '" + host + "'");
    return addr;
}

} // namespace

TcpLineServer::TcpLineServer(Controller& controller, Options options)
    : controller_(controller), options_(std::move(options)) {}

TcpLineServer::~TcpLineServer() {
    stop();
}

void TcpLineServer::start() {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0)
        throw Error("socket: " + std::string(std::strerror(errno)));
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

    sockaddr_in addr = make_addr(options_.host, options_.port);
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error("cannot bind " + options_.host + ":" + std::to_string(options_.port) + ": " +
                    reason);
    }
    if (::listen(listen_fd_, 16) != 0) {
        ::close(listen_fd_);
        listen_fd_ = -1;
        throw Error("listen: " + std::string(std::strerror(errno)));
    }

    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);

    running_.store(true);
    accept_thread_ = std::thread([this] { accept_loop(); });
    ticker_thread_ = std::thread([this] { ticker_loop(); });
}

void TcpLineServer::stop() {
    if (!running_.exchange(false)) {
        if (listen_fd_ >= 0) {
            ::close(listen_fd_);
            listen_fd_ = -1;
        }
        return;
    }

    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
    {
        std::lock_guard lock(mutex_);
        for (int fd : fds_)
            ::shutdown(fd, SHUT_RDWR);
    }
    if (accept_thread_.joinable())
        accept_thread_.join();
    if (ticker_thread_.joinable())
        ticker_thread_.join();
    for (std::thread& t : threads_)
        if (t.joinable())
            t.join();
    threads_.clear();
    {
        std::lock_guard lock(mutex_);
        for (int fd : fds_)
            ::close(fd);
        fds_.clear();
        routes_.clear();
        controller_.abort_active("server shutdown");
    }
}

void TcpLineServer::accept_loop() {
    while (running_.load()) {
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (running_.load())
                continue;
            break;
        }
        std::lock_guard lock(mutex_);
        fds_.push_back(fd);
        threads_.emplace_back([this, fd] { connection_loop(fd); });
    }
}

void TcpLineServer::route(const std::vector<Outbound>& outbound, int origin_fd) {
    for (const Outbound& out : outbound) {
        int fd = origin_fd;
        auto it = routes_.find(out.to);
        if (it != routes_.end())
            fd = it->second;
        else if (out.to != kControllerId && origin_fd < 0)
            continue; // no connection speaks for this cf yet
        if (fd >= 0)
            send_line(fd, encode(out.msg));
    }
}

void TcpLineServer::connection_loop(int fd) {
    std::string buffer;
    char chunk[4096];
    while (running_.load()) {
        const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
        if (n <= 0)
            break;
        buffer.append(chunk, static_cast<std::size_t>(n));

        std::size_t pos;
        while ((pos = buffer.find('\n')) != std::string::npos) {
            const std::string line = buffer.substr(0, pos);
            buffer.erase(0, pos + 1);
            if (line.empty())
                continue;

            CoordMessage msg;
            try {
                msg = decode(line);
            } catch (const Error& e) {
                // a bad frame answers with ProtocolError; the connection survives
                send_line(fd, encode(make_protocol_error("", kControllerId, e.what())));
                continue;
            }

            std::lock_guard lock(mutex_);
            routes_[msg.sender] = fd;
            route(controller_.handle(msg), fd);
        }
    }
}

void TcpLineServer::ticker_loop() {
    while (running_.load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(options_.tick_interval_ms));
        std::lock_guard lock(mutex_);
        route(controller_.advance_to(++tick_), -1);
    }
}

TcpLineClient::TcpLineClient(const std::string& host, std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0)
        throw Error("socket: " + std::string(std::strerror(errno)));
    sockaddr_in addr = make_addr(host, port);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(fd_);
        fd_ = -1;
        throw Error("cannot connect to " + host + ":" + std::to_string(port) + ": " + reason);
    }
}

TcpLineClient::~TcpLineClient() {
    if (fd_ >= 0)
        ::close(fd_);
}

void TcpLineClient::send(const CoordMessage& msg) {
    send_raw(encode(msg));
}

void TcpLineClient::send_raw(const std::string& bytes) {
    send_line(fd_, bytes);
}

std::optional<CoordMessage> TcpLineClient::recv(long timeout_ms) {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    for (;;) {
        const std::size_t pos = buffer_.find('\n');
        if (pos != std::string::npos) {
            const std::string line = buffer_.substr(0, pos);
            buffer_.erase(0, pos + 1);
            return decode(line);
        }

        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   deadline - std::chrono::steady_clock::now())
                                   .count();
        if (remaining <= 0)
            return std::nullopt;
        pollfd pfd{fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(remaining));
        if (ready <= 0)
            return std::nullopt;
        char chunk[4096];
        const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
        if (n <= 0)
            return std::nullopt;
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

} // namespace cancoord
