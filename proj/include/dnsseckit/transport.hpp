#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "dnsseckit/authority.hpp"
#include "dnsseckit/message.hpp"

namespace dnsseckit {

struct Endpoint {
    std::string address;
    std::uint16_t port = 53;
    auto operator<=>(const Endpoint &) const = default;
};

std::string to_string(const Endpoint &e);

struct ExchangeRequest {
    DnsMessage query;
    Endpoint server;
    std::uint16_t source_port = 0;  // 0: let the transport choose
    Protocol protocol = Protocol::Udp;
    std::chrono::milliseconds timeout{2000};
};

/// Decides whether an arriving message answers the outstanding query.
using AcceptFn = std::function<bool(const DnsMessage &)>;

/// The resolver's view of the network. Implementations: real sockets and
/// the deterministic simulator.
class Transport {
public:
    virtual ~Transport() = default;

    /// Sends the query and returns the first decodable message the accept
    /// predicate takes. Datagrams whose header id differs from the query are
    /// dropped before decoding. Throws Error(Timeout) or Error(SocketError).
    virtual DnsMessage exchange(const ExchangeRequest &request, const AcceptFn &accept) = 0;
};

/// Standard acceptance rule: same id, qr set, same question.
bool matches_query(const DnsMessage &query, const DnsMessage &response);

/// Cheap pre-filter on raw bytes: at least a header, carrying `id`.
bool wire_id_matches(std::span<const std::uint8_t> wire, std::uint16_t id) noexcept;

// ---------------------------------------------------------------------------
// Simulated network

struct Packet {
    Endpoint source;
    Endpoint destination;
    Protocol protocol = Protocol::Udp;
    Bytes payload;
};

/// What an off-path observer learns: timing and destination only.
struct PacketNotice {
    std::int64_t time_ms = 0;
    std::string source_address;
    Endpoint destination;
};

/// Single-threaded discrete-event network with a virtual millisecond clock.
/// Host handlers answer packets; taps see full packets (on-path), observers
/// see notices (off-path). Both may inject packets.
class SimulatedNetwork {
public:
    using Handler = std::function<std::optional<Bytes>(const Packet &)>;
    using Tap = std::function<void(const Packet &, SimulatedNetwork &)>;
    using Observer = std::function<void(const PacketNotice &, SimulatedNetwork &)>;

    explicit SimulatedNetwork(std::uint64_t seed = 1) : rng_(seed) {}

    void add_host(const std::string &address, Handler handler);
    void add_authoritative(const std::string &address, std::shared_ptr<const ZoneSet> zones, bool dnssec = true);
    void clear_adversaries();
    void add_tap(Tap tap) { taps_.push_back(std::move(tap)); }
    void add_observer(Observer obs) { observers_.push_back(std::move(obs)); }

    /// One-way latency for ordinary traffic, and the loss probability.
    void set_latency(std::int64_t ms) { latency_ms_ = ms; }
    std::int64_t latency() const noexcept { return latency_ms_; }
    void set_loss(double p) { loss_ = p; }

    /// Queue `packet` for delivery `delay_ms` from now (default latency when
    /// negative). UDP only is subject to loss.
    void send(Packet packet, std::int64_t delay_ms = -1);

    /// Inject a packet bypassing taps and observers (attacker traffic).
    void inject(Packet packet, std::int64_t delay_ms);

    std::int64_t now_ms() const noexcept { return now_ms_; }
    void advance_to(std::int64_t ms) { now_ms_ = std::max(now_ms_, ms); }

    /// Run events until `deadline_ms` or until a packet lands in the mailbox
    /// of `waiting`; returns that packet.
    std::optional<Packet> run_until(const Endpoint &waiting, std::int64_t deadline_ms);

    /// Drops queued packets addressed to `client`.
    void purge(const Endpoint &client);

    std::size_t delivered() const noexcept { return delivered_; }
    std::size_t sent_to(const std::string &address) const;

private:
    struct Event {
        std::int64_t time;
        std::uint64_t seq;
        Packet packet;
        bool operator>(const Event &o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };

    void schedule(Packet packet, std::int64_t delay_ms);

    std::mt19937_64 rng_;
    std::int64_t now_ms_ = 0;
    std::int64_t latency_ms_ = 10;
    double loss_ = 0;
    std::uint64_t seq_ = 0;
    std::size_t delivered_ = 0;
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events_;
    std::map<std::string, Handler> hosts_;
    std::map<std::string, std::size_t> sent_counts_;
    std::vector<Tap> taps_;
    std::vector<Observer> observers_;
};

/// Transport for a client host on the simulated network.
class SimulatedTransport final : public Transport {
public:
    SimulatedTransport(SimulatedNetwork &network, std::string client_address)
        : network_(network), address_(std::move(client_address)) {}

    DnsMessage exchange(const ExchangeRequest &request, const AcceptFn &accept) override;

    const std::string &address() const noexcept { return address_; }
    std::size_t transactions() const noexcept { return transactions_; }

private:
    SimulatedNetwork &network_;
    std::string address_;
    std::uint16_t next_ephemeral_ = 40000;
    std::size_t transactions_ = 0;
};

}  // namespace dnsseckit
