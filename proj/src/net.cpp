#include "dnsseckit/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "dnsseckit/error.hpp"
#include "dnsseckit/keystore.hpp"

namespace dnsseckit {

namespace {

class Fd {
public:
    explicit Fd(int fd) : fd_(fd) {}
    ~Fd() {
        if (fd_ >= 0) ::close(fd_);
    }
    Fd(const Fd &) = delete;
    Fd &operator=(const Fd &) = delete;
    int get() const noexcept { return fd_; }
    int release() noexcept { return std::exchange(fd_, -1); }

private:
    int fd_;
};

[[noreturn]] void socket_error(const std::string &what) {
    throw Error(Errc::SocketError, what + ": " + std::strerror(errno));
}

sockaddr_in make_addr(const std::string &address, std::uint16_t port) {
    sockaddr_in sa{};
    sa.sin_family = AF_INET;
    sa.sin_port = htons(port);
    const std::string host = (address == "localhost") ? "127.0.0.1" : address;
    if (inet_pton(AF_INET, host.c_str(), &sa.sin_addr) != 1) {
        throw Error(Errc::SocketError, "not an IPv4 address: " + address);
    }
    return sa;
}

std::int64_t remaining_ms(std::chrono::steady_clock::time_point deadline) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    return std::max<std::int64_t>(left.count(), 0);
}

bool wait_fd(int fd, short events, std::chrono::steady_clock::time_point deadline) {
    for (;;) {
        pollfd p{fd, events, 0};
        int rc = ::poll(&p, 1, static_cast<int>(remaining_ms(deadline)));
        if (rc > 0) return true;
        if (rc == 0) return false;
        if (errno != EINTR) socket_error("poll");
    }
}

bool read_exact(int fd, std::uint8_t *buf, std::size_t n, std::chrono::steady_clock::time_point deadline) {
    std::size_t got = 0;
    while (got < n) {
        if (!wait_fd(fd, POLLIN, deadline)) return false;
        auto r = ::recv(fd, buf + got, n - got, 0);
        if (r == 0) return false;
        if (r < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        got += static_cast<std::size_t>(r);
    }
    return true;
}

bool write_all(int fd, const std::uint8_t *buf, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        auto r = ::send(fd, buf + sent, n - sent, MSG_NOSIGNAL);
        if (r < 0) {
            if (errno == EINTR) continue;
            return false;
        }
        sent += static_cast<std::size_t>(r);
    }
    return true;
}

Bytes framed(const Bytes &msg) {
    Bytes out;
    out.reserve(msg.size() + 2);
    out.push_back(static_cast<std::uint8_t>(msg.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(msg.size()));
    out.insert(out.end(), msg.begin(), msg.end());
    return out;
}

}  // namespace

DnsMessage SocketTransport::exchange(const ExchangeRequest &request, const AcceptFn &accept) {
    const auto deadline = std::chrono::steady_clock::now() + request.timeout;
    const auto server = make_addr(request.server.address, request.server.port);
    const auto wire = encode_message(request.query);

    if (request.protocol == Protocol::Tcp) {
        Fd fd(::socket(AF_INET, SOCK_STREAM, 0));
        if (fd.get() < 0) socket_error("socket");
        if (::connect(fd.get(), reinterpret_cast<const sockaddr *>(&server), sizeof server) != 0) {
            socket_error("connect to " + to_string(request.server));
        }
        auto out = framed(wire);
        if (!write_all(fd.get(), out.data(), out.size())) socket_error("send");
        for (;;) {
            std::uint8_t len[2];
            if (!read_exact(fd.get(), len, 2, deadline)) {
                throw Error(Errc::Timeout, "no TCP answer from " + to_string(request.server));
            }
            Bytes body(static_cast<std::size_t>((len[0] << 8) | len[1]));
            if (!read_exact(fd.get(), body.data(), body.size(), deadline)) {
                throw Error(Errc::Timeout, "short TCP answer from " + to_string(request.server));
            }
            if (!wire_id_matches(body, request.query.id)) continue;
            try {
                auto msg = decode_message(body);
                if (accept(msg)) return msg;
            } catch (const Error &) {
            }
        }
    }

    Fd fd(::socket(AF_INET, SOCK_DGRAM, 0));
    if (fd.get() < 0) socket_error("socket");
    if (request.source_port != 0) {
        int one = 1;
        ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
        sockaddr_in local{};
        local.sin_family = AF_INET;
        local.sin_port = htons(request.source_port);
        local.sin_addr.s_addr = htonl(INADDR_ANY);
        if (::bind(fd.get(), reinterpret_cast<const sockaddr *>(&local), sizeof local) != 0) {
            socket_error("bind source port " + std::to_string(request.source_port));
        }
    }
    if (::sendto(fd.get(), wire.data(), wire.size(), 0, reinterpret_cast<const sockaddr *>(&server), sizeof server) <
        0) {
        socket_error("sendto " + to_string(request.server));
    }
    std::vector<std::uint8_t> buf(65535);
    for (;;) {
        if (!wait_fd(fd.get(), POLLIN, deadline)) {
            throw Error(Errc::Timeout, "no answer from " + to_string(request.server));
        }
        sockaddr_in from{};
        socklen_t from_len = sizeof from;
        auto n = ::recvfrom(fd.get(), buf.data(), buf.size(), 0, reinterpret_cast<sockaddr *>(&from), &from_len);
        if (n < 0) {
            if (errno == EINTR) continue;
            socket_error("recvfrom");
        }
        const std::span<const std::uint8_t> datagram(buf.data(), static_cast<std::size_t>(n));
        if (!wire_id_matches(datagram, request.query.id)) continue;
        try {
            auto msg = decode_message(datagram);
            if (accept(msg)) return msg;
        } catch (const Error &) {
        }
    }
}

DnsServer::DnsServer(ServerConfig config) : config_(std::move(config)) {
    zones_ = std::make_shared<const ZoneSet>(load_zones(config_));
    if (config_.recursion) {
        if (config_.root_hints.empty()) throw Error(Errc::ConfigError, "recursion needs a root-hints file");
        ResolverOptions opts;
        opts.dnssec_enabled = config_.dnssec_enabled;
        opts.iterative.port_mode = config_.source_port;
        if (config_.dnssec_enabled) {
            auto path = config_.trust_anchors.empty() ? default_trust_anchor_path() : config_.trust_anchors;
            opts.anchors = load_trust_anchors(path);
        }
        upstream_ = std::make_unique<SocketTransport>();
        rng_ = std::make_unique<SystemRandom>();
        resolver_ = std::make_unique<RecursiveResolver>(RootHints::load(config_.root_hints), *upstream_,
                                                        std::move(opts), *rng_);
    }
}

DnsServer::~DnsServer() { stop(); }

std::shared_ptr<const ZoneSet> DnsServer::zones() const {
    std::lock_guard lock(zones_mu_);
    return zones_;
}

void DnsServer::reload() {
    auto fresh = std::make_shared<const ZoneSet>(load_zones(config_));
    std::lock_guard lock(zones_mu_);
    zones_ = std::move(fresh);
}

std::optional<Bytes> DnsServer::handle(std::span<const std::uint8_t> query, Protocol protocol) {
    ++served_;
    auto zones = this->zones();
    if (resolver_) {
        try {
            auto q = decode_message(query);
            if (!q.flags.qr && q.flags.rd && q.questions.size() == 1 &&
                !zones->find(q.questions.front().name, q.questions.front().type)) {
                DnsMessage resp;
                {
                    std::lock_guard lock(resolver_mu_);
                    resp = resolver_->resolve(q, std::time(nullptr));
                }
                if (protocol == Protocol::Tcp) return encode_message(resp);
                return encode_with_limit(resp, udp_limit_for(q));
            }
        } catch (const Error &) {
            // fall through to the authoritative path, which reports FORMERR
        }
    }
    return serve_wire(query, protocol, *zones, config_.dnssec_enabled);
}

void DnsServer::start() {
    if (running_) return;
    const auto addr = make_addr(config_.listen, config_.port);

    Fd udp(::socket(AF_INET, SOCK_DGRAM, 0));
    if (udp.get() < 0) socket_error("socket");
    int one = 1;
    ::setsockopt(udp.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(udp.get(), reinterpret_cast<const sockaddr *>(&addr), sizeof addr) != 0) {
        socket_error("bind UDP " + config_.listen + "#" + std::to_string(config_.port));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(udp.get(), reinterpret_cast<sockaddr *>(&bound), &len);
    port_ = ntohs(bound.sin_port);

    Fd tcp(::socket(AF_INET, SOCK_STREAM, 0));
    if (tcp.get() < 0) socket_error("socket");
    ::setsockopt(tcp.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    auto tcp_addr = addr;
    tcp_addr.sin_port = htons(port_);
    if (::bind(tcp.get(), reinterpret_cast<const sockaddr *>(&tcp_addr), sizeof tcp_addr) != 0) {
        socket_error("bind TCP " + config_.listen + "#" + std::to_string(port_));
    }
    if (::listen(tcp.get(), 64) != 0) socket_error("listen");

    udp_fd_ = udp.release();
    tcp_fd_ = tcp.release();
    running_ = true;
    udp_thread_ = std::thread([this] { udp_loop(); });
    tcp_thread_ = std::thread([this] { tcp_loop(); });
}

void DnsServer::stop() {
    if (!running_.exchange(false)) return;
    if (udp_thread_.joinable()) udp_thread_.join();
    if (tcp_thread_.joinable()) tcp_thread_.join();
    {
        std::lock_guard lock(sessions_mu_);
        for (auto &s : sessions_) {
            if (s.thread.joinable()) s.thread.join();
        }
        sessions_.clear();
    }
    ::close(udp_fd_);
    ::close(tcp_fd_);
    udp_fd_ = tcp_fd_ = -1;
}

void DnsServer::udp_loop() {
    std::vector<std::uint8_t> buf(65535);
    while (running_) {
        pollfd p{udp_fd_, POLLIN, 0};
        if (::poll(&p, 1, 100) <= 0) continue;
        sockaddr_in from{};
        socklen_t from_len = sizeof from;
        auto n = ::recvfrom(udp_fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr *>(&from), &from_len);
        if (n <= 0) continue;
        if (auto reply = handle(std::span(buf.data(), static_cast<std::size_t>(n)), Protocol::Udp)) {
            ::sendto(udp_fd_, reply->data(), reply->size(), 0, reinterpret_cast<const sockaddr *>(&from), from_len);
        }
    }
}

void DnsServer::tcp_loop() {
    while (running_) {
        pollfd p{tcp_fd_, POLLIN, 0};
        if (::poll(&p, 1, 100) <= 0) continue;
        int fd = ::accept(tcp_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        std::lock_guard lock(sessions_mu_);
        std::erase_if(sessions_, [](Session &s) {
            if (!s.done->load()) return false;
            s.thread.join();
            return true;
        });
        auto done = std::make_shared<std::atomic<bool>>(false);
        sessions_.push_back(Session{std::thread([this, fd, done] {
                                        tcp_session(fd);
                                        *done = true;
                                    }),
                                    done});
    }
}

void DnsServer::tcp_session(int raw_fd) {
    Fd fd(raw_fd);
    // A connection may carry several queries; it closes after 5 idle seconds.
    while (running_) {
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
        std::uint8_t len[2];
        if (!read_exact(fd.get(), len, 2, deadline)) return;
        Bytes body(static_cast<std::size_t>((len[0] << 8) | len[1]));
        if (!read_exact(fd.get(), body.data(), body.size(), deadline)) return;
        auto reply = handle(body, Protocol::Tcp);
        if (!reply) return;
        auto out = framed(*reply);
        if (!write_all(fd.get(), out.data(), out.size())) return;
    }
}

}  // namespace dnsseckit
