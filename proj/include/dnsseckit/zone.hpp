#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dnsseckit/name.hpp"
#include "dnsseckit/record.hpp"

namespace dnsseckit {

/// A zone: its apex and every record at or below it, exactly one SOA at
/// the apex. Zones are values; transformations return new zones.
class Zone {
public:
    Zone() = default;

    /// Throws Error(MissingSoa / DuplicateSoa / OutOfZone).
    Zone(DnsName apex, std::vector<ResourceRecord> records);

    const DnsName &apex() const noexcept { return apex_; }
    const std::vector<ResourceRecord> &records() const noexcept { return records_; }

    const ResourceRecord &soa_record() const;
    const SoaRdata &soa() const;

    /// Names strictly below the apex that own NS records (zone cuts).
    std::vector<DnsName> delegations() const;

    /// True when `name` is strictly below a zone cut (glue or occluded data).
    bool is_below_cut(const DnsName &name) const;

    bool has_type(RRType type) const;

    /// Structural equality: same apex and same record multiset.
    friend bool operator==(const Zone &a, const Zone &b);

private:
    DnsName apex_;
    std::vector<ResourceRecord> records_;
};

struct ZoneParseOptions {
    /// Directory that $INCLUDE paths are relative to.
    std::filesystem::path base_dir = ".";
    /// TTL for records that give none when no $TTL is in effect (key files).
    std::optional<std::uint32_t> default_ttl;
};

/// Parses master-file text. Throws SyntaxError(line, column, reason),
/// Error(MissingSoa) or Error(DuplicateSoa).
Zone parse_zone_file(std::string_view text, const DnsName &origin, const ZoneParseOptions &options = {});

/// Reads and parses a zone file; $INCLUDE is resolved relative to its directory.
Zone load_zone_file(const std::filesystem::path &path, const DnsName &origin);

/// Parses master-file records without zone-level checks (key files, anchors).
std::vector<ResourceRecord> parse_records(std::string_view text, const DnsName &origin,
                                          const ZoneParseOptions &options = {});

/// Master-file text: owners in canonical order, each RRSIG after the RRset
/// it covers, DNSKEY/RRSIG payloads wrapped with key-id comments.
std::string serialize_zone(const Zone &zone);

/// Sort order used by serialize_zone.
void sort_records_canonically(std::vector<ResourceRecord> &records);

/// Partitions records by (owner, type, class), sorted by canonical owner
/// then type code. Conflicting TTLs within a group become the minimum and
/// produce one warning each.
std::vector<RRset> group_rrsets(std::span<const ResourceRecord> records, std::vector<std::string> *warnings = nullptr);
std::vector<RRset> group_rrsets(const Zone &zone, std::vector<std::string> *warnings = nullptr);

/// The octets an RRSIG covers for this RRset: each distinct record in
/// ascending canonical-RDATA order with lowercased owner and `original_ttl`.
Bytes canonical_rrset_bytes(const RRset &rrset, std::uint32_t original_ttl);

/// Lowercased uncompressed wire form of a name.
Bytes canonical_name_wire(const DnsName &name);

}  // namespace dnsseckit
