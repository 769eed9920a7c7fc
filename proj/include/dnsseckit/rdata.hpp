#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dnsseckit/name.hpp"
#include "dnsseckit/types.hpp"
#include "dnsseckit/wire_io.hpp"

namespace dnsseckit {

inline constexpr std::uint16_t kDnskeyZoneFlag = 0x0100;
inline constexpr std::uint16_t kDnskeySepFlag = 0x0001;
inline constexpr std::uint16_t kZskFlags = 256;
inline constexpr std::uint16_t kKskFlags = 257;

struct ARdata {
    std::array<std::uint8_t, 4> address{};
    bool operator==(const ARdata &) const = default;
};

struct AaaaRdata {
    std::array<std::uint8_t, 16> address{};
    bool operator==(const AaaaRdata &) const = default;
};

struct NsRdata {
    DnsName host;
    bool operator==(const NsRdata &) const = default;
};

struct CnameRdata {
    DnsName target;
    bool operator==(const CnameRdata &) const = default;
};

struct SoaRdata {
    DnsName mname;
    DnsName rname;
    std::uint32_t serial = 0;
    std::uint32_t refresh = 0;
    std::uint32_t retry = 0;
    std::uint32_t expire = 0;
    std::uint32_t minimum = 0;
    bool operator==(const SoaRdata &) const = default;
};

struct MxRdata {
    std::uint16_t preference = 0;
    DnsName exchange;
    bool operator==(const MxRdata &) const = default;
};

struct TxtRdata {
    std::vector<std::string> strings;
    bool operator==(const TxtRdata &) const = default;
};

struct DnskeyRdata {
    std::uint16_t flags = kZskFlags;
    std::uint8_t protocol = 3;
    std::uint8_t algorithm = 0;
    Bytes public_key;

    bool is_zone_key() const noexcept { return (flags & kDnskeyZoneFlag) != 0; }
    bool is_sep() const noexcept { return (flags & kDnskeySepFlag) != 0; }
    bool operator==(const DnskeyRdata &) const = default;
};

struct RrsigRdata {
    RRType type_covered = RRType::A;
    std::uint8_t algorithm = 0;
    std::uint8_t labels = 0;
    std::uint32_t original_ttl = 0;
    std::uint32_t expiration = 0;
    std::uint32_t inception = 0;
    std::uint16_t key_tag = 0;
    DnsName signer_name;
    Bytes signature;
    bool operator==(const RrsigRdata &) const = default;
};

struct NsecRdata {
    DnsName next_name;
    std::set<RRType> type_bitmap;
    bool operator==(const NsecRdata &) const = default;
};

struct DsRdata {
    std::uint16_t key_tag = 0;
    std::uint8_t algorithm = 0;
    std::uint8_t digest_type = 0;
    Bytes digest;
    bool operator==(const DsRdata &) const = default;
};

/// RDATA of a type the codec does not interpret; kept verbatim.
struct OpaqueRdata {
    Bytes data;
    bool operator==(const OpaqueRdata &) const = default;
};

using Rdata = std::variant<ARdata, AaaaRdata, NsRdata, CnameRdata, SoaRdata, MxRdata, TxtRdata, DnskeyRdata,
                           RrsigRdata, NsecRdata, DsRdata, OpaqueRdata>;

/// Writes RDATA without its length prefix. `canonical` lowercases embedded
/// names. Embedded names are never compressed.
void write_rdata(WireWriter &w, const Rdata &rdata, bool canonical = false);

Bytes rdata_to_wire(const Rdata &rdata, bool canonical = false);

/// Reads `length` octets of RDATA for `type`; unknown types become OpaqueRdata.
Rdata read_rdata(WireReader &r, RRType type, std::uint16_t length);

/// Decodes standalone RDATA octets (no surrounding message).
Rdata rdata_from_wire(RRType type, std::span<const std::uint8_t> data);

/// Presentation format of the RDATA fields (single line).
std::string rdata_to_text(const Rdata &rdata);

/// True when the variant alternative is the one `type` decodes to.
bool rdata_matches_type(const Rdata &rdata, RRType type) noexcept;

void write_type_bitmap(WireWriter &w, const std::set<RRType> &types);
std::set<RRType> read_type_bitmap(WireReader &r, std::size_t end);

}  // namespace dnsseckit
