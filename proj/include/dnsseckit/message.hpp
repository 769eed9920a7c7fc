#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dnsseckit/name.hpp"
#include "dnsseckit/record.hpp"
#include "dnsseckit/types.hpp"

namespace dnsseckit {

inline constexpr std::size_t kClassicUdpLimit = 512;
inline constexpr std::uint16_t kDefaultEdnsPayload = 4096;

struct Question {
    DnsName name;
    RRType type = RRType::A;
    RRClass qclass = RRClass::IN;
    bool operator==(const Question &) const = default;
};

struct HeaderFlags {
    bool qr = false;
    bool aa = false;
    bool tc = false;
    bool rd = false;
    bool ra = false;
    bool ad = false;
    bool cd = false;
    bool operator==(const HeaderFlags &) const = default;
};

/// EDNS0 parameters carried by the OPT pseudo-record.
struct Edns {
    std::uint8_t version = 0;
    bool dnssec_ok = false;
    std::uint16_t udp_payload_size = kDefaultEdnsPayload;
    bool operator==(const Edns &) const = default;
};

struct DnsMessage {
    std::uint16_t id = 0;
    std::uint8_t opcode = 0;
    HeaderFlags flags;
    Rcode rcode = Rcode::NOERROR;
    std::vector<Question> questions;
    std::vector<ResourceRecord> answers;
    std::vector<ResourceRecord> authority;
    std::vector<ResourceRecord> additional;  // never holds the OPT record
    std::optional<Edns> edns;

    bool dnssec_ok() const noexcept { return edns && edns->dnssec_ok; }
    bool operator==(const DnsMessage &) const = default;
};

/// Throws Error(TooManyRecords) when a section count exceeds 65535.
Bytes encode_message(const DnsMessage &m);

/// Throws Error(Truncated / BadPointer / LabelTooLong / Malformed / OversizeName).
DnsMessage decode_message(std::span<const std::uint8_t> wire);

/// A query with rd set, and EDNS(do) when `dnssec` is requested.
DnsMessage make_query(const DnsName &name, RRType type, std::uint16_t id, bool recursion_desired = true,
                      bool dnssec = false, std::uint16_t udp_payload = kDefaultEdnsPayload);

/// Response skeleton: copies id, question, rd, opcode and EDNS presence.
DnsMessage make_response(const DnsMessage &query);

/// Returns a copy reduced to header + question + OPT with tc set.
DnsMessage truncated_copy(const DnsMessage &m);

/// Encodes; if the result exceeds `limit` octets, encodes the truncated copy.
Bytes encode_with_limit(const DnsMessage &m, std::size_t limit);

/// UDP payload a query permits its answer to use.
std::size_t udp_limit_for(const DnsMessage &query) noexcept;

}  // namespace dnsseckit
