#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "dnsseckit/keystore.hpp"
#include "dnsseckit/message.hpp"
#include "dnsseckit/record.hpp"

namespace dnsseckit {

enum class VerifyResult { Valid, Expired, NotYetValid, BadSignature, WrongKey, UnsupportedAlgorithm };

std::string_view verify_result_name(VerifyResult r) noexcept;

/// Pure: `now` is the only clock. `key_owner` is the name owning the DNSKEY.
VerifyResult verify_rrsig(const RRset &rrset, const RrsigRdata &sig, const DnskeyRdata &key, const DnsName &key_owner,
                          UnixTime now);

bool match_ds(const DsRdata &ds, const DnskeyRdata &key, const DnsName &owner);

enum class Security { Secure, Insecure, Bogus };

std::string_view security_name(Security s) noexcept;

enum class BogusReason {
    None,
    NoTrustAnchor,        // Insecure: no configured anchor covers the name
    NoDsAtDelegation,     // Insecure: parent proves the child is unsigned
    AnchorKeyMissing,
    DnskeyNotSigned,
    DsMismatch,
    MissingDsProof,
    MissingSignature,
    BadSignature,
    Expired,
    NotYetValid,
    WrongKey,
    UnsupportedAlgorithm,
    SignerOutOfBailiwick,
    BadDenial,
    DenialInvalid,
};

std::string_view reason_name(BogusReason r) noexcept;

struct ChainLink {
    DnsName zone;
    std::uint16_t key_tag = 0;
    bool operator==(const ChainLink &) const = default;
};

struct ValidationOutcome {
    Security status = Security::Bogus;
    BogusReason reason = BogusReason::None;
    std::vector<ChainLink> chain;
    std::string detail;
};

/// Transport-level failures are reported by throwing Error(FetchFailure).
using FetchFn = std::function<DnsMessage(const DnsName &, RRType)>;

ValidationOutcome validate_chain(const DnsMessage &response, const DnsName &qname, RRType qtype,
                                 const std::vector<TrustAnchor> &anchors, const FetchFn &fetch, UnixTime now);

enum class DenialKind { NameDoesNotExist, TypeDoesNotExist, NoProof, InvalidProof };

std::string_view denial_name(DenialKind k) noexcept;

struct NsecWitness {
    ResourceRecord nsec;
    std::vector<RrsigRdata> signatures;
};

struct ZoneKeys {
    DnsName zone;
    std::vector<DnskeyRdata> keys;
};

struct DenialOutcome {
    DenialKind kind = DenialKind::NoProof;
    std::vector<ResourceRecord> witnesses;  // the NSEC records that decided it
};

DenialOutcome check_denial(const DnsName &qname, RRType qtype, const std::vector<NsecWitness> &witnesses,
                           const ZoneKeys &zone_keys, UnixTime now);

/// NSEC records of a section paired with the RRSIGs covering them.
std::vector<NsecWitness> collect_witnesses(const std::vector<ResourceRecord> &section);

/// RRSIG payloads in `records` covering (owner, type).
std::vector<RrsigRdata> signatures_for(const std::vector<ResourceRecord> &records, const DnsName &owner, RRType type);

/// Valid if any signature verifies under any of the keys; otherwise the most
/// specific failure seen. Callers handle an empty `sigs` themselves.
VerifyResult verify_with_keys(const RRset &rrset, const std::vector<RrsigRdata> &sigs, const ZoneKeys &keys,
                              UnixTime now, std::uint16_t *used_tag = nullptr);

}  // namespace dnsseckit
