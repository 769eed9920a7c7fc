#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dnsseckit/message.hpp"
#include "dnsseckit/zone.hpp"

namespace dnsseckit {

enum class ZoneRole { Primary, Secondary };

/// A zone prepared for lookups: records indexed by owner.
class HostedZone {
public:
    HostedZone(Zone zone, ZoneRole role);

    const Zone &zone() const noexcept { return zone_; }
    const DnsName &apex() const noexcept { return zone_.apex(); }
    ZoneRole role() const noexcept { return role_; }
    bool is_signed() const noexcept { return signed_; }

    /// Records at `owner` (empty when the name owns nothing).
    const std::vector<ResourceRecord> &at(const DnsName &owner) const;
    bool name_exists(const DnsName &name) const;  // owns data or is an empty non-terminal

    /// The topmost zone cut at or above `name`, if any.
    std::optional<DnsName> cut_for(const DnsName &name) const;

    /// The NSEC whose span covers `name`, or the NSEC at `name`.
    const ResourceRecord *covering_nsec(const DnsName &name) const;

private:
    Zone zone_;
    ZoneRole role_;
    bool signed_ = false;
    std::map<DnsName, std::vector<ResourceRecord>> by_owner_;
    std::vector<DnsName> cuts_;
    std::vector<ResourceRecord> nsecs_;  // canonical owner order
};

/// The zones one server is authoritative for.
class ZoneSet {
public:
    /// Throws Error(ConfigError) when the apex is already present.
    void add(Zone zone, ZoneRole role = ZoneRole::Primary);

    /// Deepest hosted zone enclosing `qname`. For DS queries at a hosted
    /// apex, the parent zone when it is hosted too.
    const HostedZone *find(const DnsName &qname, RRType qtype = RRType::A) const;

    const std::vector<std::shared_ptr<const HostedZone>> &zones() const noexcept { return zones_; }
    bool empty() const noexcept { return zones_.empty(); }

private:
    std::vector<std::shared_ptr<const HostedZone>> zones_;
};

/// Answers an iterative query from the hosted zones. Queries outside every
/// zone get REFUSED. DNSSEC records are only added when the query sets DO
/// and `dnssec_enabled` holds (or the query asks for a DNSSEC type).
DnsMessage answer_authoritative(const DnsMessage &query, const ZoneSet &zones, bool dnssec_enabled = true);

enum class Protocol { Udp, Tcp };

/// Wire-level handler shared by the socket server and the simulator:
/// FORMERR for undecodable queries, truncation for UDP over the limit.
std::optional<Bytes> serve_wire(std::span<const std::uint8_t> query, Protocol protocol, const ZoneSet &zones,
                                bool dnssec_enabled = true);

}  // namespace dnsseckit
