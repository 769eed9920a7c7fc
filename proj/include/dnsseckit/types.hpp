#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dnsseckit {

using Bytes = std::vector<std::uint8_t>;

/// Seconds since the Unix epoch. Passed explicitly wherever time matters.
using UnixTime = std::int64_t;

enum class RRType : std::uint16_t {
    A = 1,
    NS = 2,
    CNAME = 5,
    SOA = 6,
    MX = 15,
    TXT = 16,
    AAAA = 28,
    OPT = 41,
    DS = 43,
    RRSIG = 46,
    NSEC = 47,
    DNSKEY = 48,
    ANY = 255,
};

enum class RRClass : std::uint16_t {
    IN = 1,
    CH = 3,
    ANY = 255,
};

enum class Rcode : std::uint8_t {
    NOERROR = 0,
    FORMERR = 1,
    SERVFAIL = 2,
    NXDOMAIN = 3,
    NOTIMP = 4,
    REFUSED = 5,
};

/// Mnemonic, or "TYPEnnn" for codes without one.
std::string type_to_string(RRType type);
std::optional<RRType> type_from_string(std::string_view text);

std::string class_to_string(RRClass rclass);
std::optional<RRClass> class_from_string(std::string_view text);

std::string rcode_to_string(Rcode rcode);

/// Types the master-file grammar accepts.
bool is_supported_zone_type(RRType type) noexcept;

/// Types whose records are DNSSEC metadata rather than zone data.
bool is_dnssec_type(RRType type) noexcept;

}  // namespace dnsseckit
