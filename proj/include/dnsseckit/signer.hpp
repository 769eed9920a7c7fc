#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnsseckit/keystore.hpp"
#include "dnsseckit/zone.hpp"

namespace dnsseckit {

struct SigningPolicy {
    std::uint32_t inception_skew = 3600;
    std::uint32_t validity = 30 * 86400;
    bool sign_dnskey_with_ksk = true;
    bool sign_dnskey_with_zsk = true;
    /// Add DNSKEY records for the signing keys when the zone lacks them.
    bool auto_insert_dnskey = true;
};

struct SigningStats {
    std::size_t signatures_generated = 0;
    std::size_t signatures_retained = 0;
    std::size_t signatures_dropped = 0;
    std::size_t signatures_verified = 0;
    std::size_t signatures_failed = 0;
    double runtime_seconds = 0;
    double signatures_per_second = 0;
};

struct SignedZone {
    Zone zone;
    SigningStats stats;
    std::vector<std::uint16_t> keys_used;
    std::vector<std::uint8_t> algorithms;
};

/// Owner names that carry authoritative data: everything except names
/// strictly below a zone cut. Canonically sorted, apex first.
std::vector<DnsName> authoritative_owners(const Zone &zone);

/// Adds one NSEC per authoritative owner (chain wraps to the apex); any
/// existing NSEC records are replaced.
Zone build_nsec_chain(const Zone &zone);

/// RRSIG RDATA minus the signature, followed by the canonical RRset: the
/// exact octets a signature covers.
Bytes rrsig_signing_input(const RrsigRdata &sig, const RRset &rrset);

/// Throws Error(LegacyAlgorithm / OutOfZoneOwner).
ResourceRecord sign_rrset(const RRset &rrset, const KeyPair &key, const SigningPolicy &policy, UnixTime now);

/// Throws Error(KeyZoneMismatch / MissingDnskeyRecords / LegacyAlgorithm / NotAKsk).
SignedZone sign_zone(const Zone &zone, const KeyPair &zsk, const KeyPair &ksk, const SigningPolicy &policy,
                     UnixTime now);

/// Number of signatures sign_zone will generate for `zone` (after NSEC
/// insertion) under `policy`.
std::size_t expected_signature_count(const Zone &zone_with_keys, const SigningPolicy &policy);

Bytes ds_digest(const DnsName &owner, const DnskeyRdata &key, std::uint8_t digest_type);

/// Throws Error(NotAKsk / UnsupportedDigest).
ResourceRecord make_ds(const DnsName &child_apex, const DnskeyRdata &ksk, std::uint8_t digest_type,
                       std::uint32_t ttl = 86400);

/// The counter block, one "Label:   value" line each.
std::string format_signing_stats(const SigningStats &stats);

/// Full signing report: algorithms line, key summary, output name, stats.
std::string format_signing_report(const SignedZone &signed_zone, const std::string &output_name);

}  // namespace dnsseckit
