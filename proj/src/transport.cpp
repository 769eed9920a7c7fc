#include "dnsseckit/transport.hpp"

#include "dnsseckit/error.hpp"

namespace dnsseckit {

std::string to_string(const Endpoint &e) { return e.address + "#" + std::to_string(e.port); }

bool matches_query(const DnsMessage &query, const DnsMessage &response) {
    return response.flags.qr && response.id == query.id && response.questions == query.questions;
}

bool wire_id_matches(std::span<const std::uint8_t> wire, std::uint16_t id) noexcept {
    return wire.size() >= 12 && ((wire[0] << 8) | wire[1]) == id;
}

void SimulatedNetwork::add_host(const std::string &address, Handler handler) { hosts_[address] = std::move(handler); }

void SimulatedNetwork::add_authoritative(const std::string &address, std::shared_ptr<const ZoneSet> zones,
                                         bool dnssec) {
    add_host(address, [zones, dnssec](const Packet &p) { return serve_wire(p.payload, p.protocol, *zones, dnssec); });
}

void SimulatedNetwork::clear_adversaries() {
    taps_.clear();
    observers_.clear();
}

void SimulatedNetwork::schedule(Packet packet, std::int64_t delay_ms) {
    events_.push(Event{now_ms_ + std::max<std::int64_t>(delay_ms, 0), seq_++, std::move(packet)});
}

void SimulatedNetwork::send(Packet packet, std::int64_t delay_ms) {
    ++sent_counts_[packet.destination.address];
    // Copies: adversaries may inject while we iterate.
    auto taps = taps_;
    auto observers = observers_;
    for (const auto &tap : taps) tap(packet, *this);
    const PacketNotice notice{now_ms_, packet.source.address, packet.destination};
    for (const auto &obs : observers) obs(notice, *this);
    if (packet.protocol == Protocol::Udp && loss_ > 0) {
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < loss_) return;
    }
    schedule(std::move(packet), delay_ms < 0 ? latency_ms_ : delay_ms);
}

void SimulatedNetwork::inject(Packet packet, std::int64_t delay_ms) { schedule(std::move(packet), delay_ms); }

std::optional<Packet> SimulatedNetwork::run_until(const Endpoint &waiting, std::int64_t deadline_ms) {
    while (!events_.empty() && events_.top().time <= deadline_ms) {
        Event ev = events_.top();
        events_.pop();
        now_ms_ = std::max(now_ms_, ev.time);
        ++delivered_;
        if (ev.packet.destination == waiting) return std::move(ev.packet);
        auto host = hosts_.find(ev.packet.destination.address);
        if (host == hosts_.end()) continue;  // nobody listening
        if (auto reply = host->second(ev.packet)) {
            send(Packet{ev.packet.destination, ev.packet.source, ev.packet.protocol, std::move(*reply)});
        }
    }
    now_ms_ = std::max(now_ms_, deadline_ms);
    return std::nullopt;
}

void SimulatedNetwork::purge(const Endpoint &client) {
    std::vector<Event> keep;
    while (!events_.empty()) {
        if (!(events_.top().packet.destination == client)) keep.push_back(events_.top());
        events_.pop();
    }
    for (auto &e : keep) events_.push(std::move(e));
}

std::size_t SimulatedNetwork::sent_to(const std::string &address) const {
    auto it = sent_counts_.find(address);
    return it == sent_counts_.end() ? 0 : it->second;
}

DnsMessage SimulatedTransport::exchange(const ExchangeRequest &request, const AcceptFn &accept) {
    std::uint16_t port = request.source_port;
    if (port == 0) {
        port = next_ephemeral_++;
        if (next_ephemeral_ < 40000) next_ephemeral_ = 40000;
    }
    const Endpoint self{address_, port};
    ++transactions_;
    network_.send(Packet{self, request.server, request.protocol, encode_message(request.query)});
    const auto deadline = network_.now_ms() + request.timeout.count();
    for (;;) {
        auto packet = network_.run_until(self, deadline);
        if (!packet) {
            network_.purge(self);
            throw Error(Errc::Timeout, "no answer from " + to_string(request.server));
        }
        if (!wire_id_matches(packet->payload, request.query.id)) continue;
        DnsMessage msg;
        try {
            msg = decode_message(packet->payload);
        } catch (const Error &) {
            continue;
        }
        if (!accept(msg)) continue;
        network_.purge(self);
        return msg;
    }
}

}  // namespace dnsseckit
