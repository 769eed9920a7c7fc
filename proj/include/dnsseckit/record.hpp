#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnsseckit/name.hpp"
#include "dnsseckit/rdata.hpp"
#include "dnsseckit/types.hpp"

namespace dnsseckit {

struct ResourceRecord {
    DnsName owner;
    RRType type = RRType::A;
    RRClass rclass = RRClass::IN;
    std::uint32_t ttl = 0;
    Rdata rdata;

    bool operator==(const ResourceRecord &) const = default;
};

/// Records sharing owner, type and class; the unit that gets signed.
struct RRset {
    DnsName owner;
    RRType type = RRType::A;
    RRClass rclass = RRClass::IN;
    std::uint32_t ttl = 0;
    std::vector<Rdata> rdatas;

    std::vector<ResourceRecord> records() const;
    bool operator==(const RRset &) const = default;
};

/// "owner TTL CLASS TYPE rdata" on one line, tab separated.
std::string record_to_text(const ResourceRecord &rr);

/// For RRSIG records, the covered type; otherwise the record type.
RRType covered_type(const ResourceRecord &rr) noexcept;

/// Groups records by (owner, type, class) without reordering within groups.
/// Conflicting TTLs collapse to the minimum.
std::vector<RRset> rrsets_from_records(const std::vector<ResourceRecord> &records);

}  // namespace dnsseckit
