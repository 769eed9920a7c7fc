#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "dnsseckit/config.hpp"
#include "dnsseckit/transport.hpp"

namespace dnsseckit {

/// Real UDP/TCP sockets (IPv4). TCP messages carry a 2-byte length prefix.
class SocketTransport final : public Transport {
public:
    DnsMessage exchange(const ExchangeRequest &request, const AcceptFn &accept) override;
};

/// Authoritative server (optionally recursive) on real sockets. UDP and TCP
/// share one port; each runs on its own thread.
class DnsServer {
public:
    /// Loads the configured zones; throws on any zone or config error.
    explicit DnsServer(ServerConfig config);
    ~DnsServer();

    DnsServer(const DnsServer &) = delete;
    DnsServer &operator=(const DnsServer &) = delete;

    /// Binds and starts serving. Port 0 in the config picks a free port.
    void start();
    void stop();

    /// Re-reads every zone file; the old zones stay live if loading fails.
    void reload();

    std::uint16_t port() const noexcept { return port_; }
    std::size_t queries_served() const noexcept { return served_.load(); }

    /// The wire handler used by both listeners.
    std::optional<Bytes> handle(std::span<const std::uint8_t> query, Protocol protocol);

private:
    void udp_loop();
    void tcp_loop();
    void tcp_session(int fd);
    std::shared_ptr<const ZoneSet> zones() const;

    ServerConfig config_;
    mutable std::mutex zones_mu_;
    std::shared_ptr<const ZoneSet> zones_;

    std::mutex resolver_mu_;
    std::unique_ptr<SocketTransport> upstream_;
    std::unique_ptr<RandomSource> rng_;
    std::unique_ptr<RecursiveResolver> resolver_;

    int udp_fd_ = -1;
    int tcp_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> running_{false};
    std::atomic<std::size_t> served_{0};
    std::thread udp_thread_;
    std::thread tcp_thread_;
    struct Session {
        std::thread thread;
        std::shared_ptr<std::atomic<bool>> done;
    };
    std::mutex sessions_mu_;
    std::vector<Session> sessions_;
};

}  // namespace dnsseckit
