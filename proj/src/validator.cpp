#include "dnsseckit/validator.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/crypto.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/signer.hpp"

namespace dnsseckit {

std::string_view verify_result_name(VerifyResult r) noexcept {
    switch (r) {
        case VerifyResult::Valid:                return "Valid";
        case VerifyResult::Expired:              return "Expired";
        case VerifyResult::NotYetValid:          return "NotYetValid";
        case VerifyResult::BadSignature:         return "BadSignature";
        case VerifyResult::WrongKey:             return "WrongKey";
        case VerifyResult::UnsupportedAlgorithm: return "UnsupportedAlgorithm";
    }
    return "?";
}

std::string_view security_name(Security s) noexcept {
    switch (s) {
        case Security::Secure:   return "Secure";
        case Security::Insecure: return "Insecure";
        case Security::Bogus:    return "Bogus";
    }
    return "?";
}

std::string_view reason_name(BogusReason r) noexcept {
    switch (r) {
        case BogusReason::None:                 return "None";
        case BogusReason::NoTrustAnchor:        return "NoTrustAnchor";
        case BogusReason::NoDsAtDelegation:     return "NoDsAtDelegation";
        case BogusReason::AnchorKeyMissing:     return "AnchorKeyMissing";
        case BogusReason::DnskeyNotSigned:      return "DnskeyNotSigned";
        case BogusReason::DsMismatch:           return "DsMismatch";
        case BogusReason::MissingDsProof:       return "MissingDsProof";
        case BogusReason::MissingSignature:     return "MissingSignature";
        case BogusReason::BadSignature:         return "BadSignature";
        case BogusReason::Expired:              return "Expired";
        case BogusReason::NotYetValid:          return "NotYetValid";
        case BogusReason::WrongKey:             return "WrongKey";
        case BogusReason::UnsupportedAlgorithm: return "UnsupportedAlgorithm";
        case BogusReason::SignerOutOfBailiwick: return "SignerOutOfBailiwick";
        case BogusReason::BadDenial:            return "BadDenial";
        case BogusReason::DenialInvalid:        return "DenialInvalid";
    }
    return "?";
}

std::string_view denial_name(DenialKind k) noexcept {
    switch (k) {
        case DenialKind::NameDoesNotExist: return "NameDoesNotExist";
        case DenialKind::TypeDoesNotExist: return "TypeDoesNotExist";
        case DenialKind::NoProof:          return "NoProof";
        case DenialKind::InvalidProof:     return "InvalidProof";
    }
    return "?";
}

VerifyResult verify_rrsig(const RRset &rrset, const RrsigRdata &sig, const DnskeyRdata &key, const DnsName &key_owner,
                          UnixTime now) {
    if (!key.is_zone_key() || key.protocol != 3) return VerifyResult::WrongKey;
    if (sig.algorithm != key.algorithm || sig.key_tag != compute_key_tag(key)) return VerifyResult::WrongKey;
    if (!(sig.signer_name == key_owner) || !rrset.owner.is_subdomain_of(sig.signer_name)) {
        return VerifyResult::WrongKey;
    }
    if (!algorithm_can_sign(sig.algorithm)) return VerifyResult::UnsupportedAlgorithm;
    if (sig.type_covered != rrset.type || sig.labels > rrset.owner.label_count() || rrset.rdatas.empty()) {
        return VerifyResult::BadSignature;
    }
    if (now < static_cast<UnixTime>(sig.inception)) return VerifyResult::NotYetValid;
    if (now > static_cast<UnixTime>(sig.expiration)) return VerifyResult::Expired;
    if (!rsa_verify(key.public_key, sig.algorithm, rrsig_signing_input(sig, rrset), sig.signature)) {
        return VerifyResult::BadSignature;
    }
    return VerifyResult::Valid;
}

bool match_ds(const DsRdata &ds, const DnskeyRdata &key, const DnsName &owner) {
    if (ds.key_tag != compute_key_tag(key) || ds.algorithm != key.algorithm) return false;
    if (digest_length(ds.digest_type) == 0) return false;
    return ds_digest(owner, key, ds.digest_type) == ds.digest;
}

namespace {

int failure_rank(VerifyResult r) {
    switch (r) {
        case VerifyResult::Expired:
        case VerifyResult::NotYetValid:          return 4;
        case VerifyResult::BadSignature:         return 3;
        case VerifyResult::UnsupportedAlgorithm: return 2;
        case VerifyResult::WrongKey:             return 1;
        case VerifyResult::Valid:                return 5;
    }
    return 0;
}

BogusReason reason_for(VerifyResult r) {
    switch (r) {
        case VerifyResult::Expired:              return BogusReason::Expired;
        case VerifyResult::NotYetValid:          return BogusReason::NotYetValid;
        case VerifyResult::WrongKey:             return BogusReason::WrongKey;
        case VerifyResult::UnsupportedAlgorithm: return BogusReason::UnsupportedAlgorithm;
        default:                                 return BogusReason::BadSignature;
    }
}

}  // namespace

VerifyResult verify_with_keys(const RRset &rrset, const std::vector<RrsigRdata> &sigs, const ZoneKeys &keys,
                              UnixTime now, std::uint16_t *used_tag) {
    VerifyResult worst = VerifyResult::WrongKey;
    for (const auto &sig : sigs) {
        for (const auto &key : keys.keys) {
            if (sig.key_tag != compute_key_tag(key)) continue;  // cheap pre-filter; collisions still iterate
            auto r = verify_rrsig(rrset, sig, key, keys.zone, now);
            if (r == VerifyResult::Valid) {
                if (used_tag) *used_tag = sig.key_tag;
                return r;
            }
            if (failure_rank(r) > failure_rank(worst)) worst = r;
        }
    }
    return worst;
}

std::vector<RrsigRdata> signatures_for(const std::vector<ResourceRecord> &records, const DnsName &owner,
                                       RRType type) {
    std::vector<RrsigRdata> out;
    for (const auto &rr : records) {
        if (rr.type != RRType::RRSIG || !(rr.owner == owner)) continue;
        const auto &sig = std::get<RrsigRdata>(rr.rdata);
        if (sig.type_covered == type) out.push_back(sig);
    }
    return out;
}

std::vector<NsecWitness> collect_witnesses(const std::vector<ResourceRecord> &section) {
    std::vector<NsecWitness> out;
    for (const auto &rr : section) {
        if (rr.type != RRType::NSEC) continue;
        out.push_back(NsecWitness{rr, signatures_for(section, rr.owner, RRType::NSEC)});
    }
    return out;
}

DenialOutcome check_denial(const DnsName &qname, RRType qtype, const std::vector<NsecWitness> &witnesses,
                           const ZoneKeys &zone_keys, UnixTime now) {
    DenialOutcome out;
    if (witnesses.empty()) return out;
    for (const auto &w : witnesses) {
        RRset set{w.nsec.owner, RRType::NSEC, w.nsec.rclass, w.nsec.ttl, {w.nsec.rdata}};
        if (w.signatures.empty() || verify_with_keys(set, w.signatures, zone_keys, now) != VerifyResult::Valid) {
            out.kind = DenialKind::InvalidProof;
            out.witnesses = {w.nsec};
            return out;
        }
    }
    for (const auto &w : witnesses) {
        const auto &nsec = std::get<NsecRdata>(w.nsec.rdata);
        const auto &owner = w.nsec.owner;
        if (owner == qname) {
            if (!nsec.type_bitmap.count(qtype) && !nsec.type_bitmap.count(RRType::CNAME)) {
                out.kind = DenialKind::TypeDoesNotExist;
                out.witnesses = {w.nsec};
                return out;
            }
            continue;
        }
        if (!(owner < qname)) continue;
        const bool wraps = !(owner < nsec.next_name);
        const bool covered = wraps ? qname.is_subdomain_of(nsec.next_name) : qname < nsec.next_name;
        if (!covered) continue;
        // A covered name with descendants in the chain is an empty
        // non-terminal: it exists, just owns no data.
        if (!wraps && nsec.next_name.is_subdomain_of(qname)) {
            out.kind = DenialKind::TypeDoesNotExist;
        } else {
            out.kind = DenialKind::NameDoesNotExist;
        }
        out.witnesses = {w.nsec};
        return out;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chain of trust

namespace {

ValidationOutcome bogus(BogusReason reason, std::vector<ChainLink> chain, std::string detail) {
    return ValidationOutcome{Security::Bogus, reason, std::move(chain), std::move(detail)};
}

std::optional<RRset> find_rrset(const std::vector<ResourceRecord> &records, const DnsName &owner, RRType type) {
    std::optional<RRset> out;
    for (const auto &rr : records) {
        if (rr.type != type || !(rr.owner == owner)) continue;
        if (!out) out = RRset{rr.owner, rr.type, rr.rclass, rr.ttl, {}};
        out->ttl = std::min(out->ttl, rr.ttl);
        if (std::find(out->rdatas.begin(), out->rdatas.end(), rr.rdata) == out->rdatas.end()) {
            out->rdatas.push_back(rr.rdata);
        }
    }
    return out;
}

std::vector<ResourceRecord> all_records(const DnsMessage &m) {
    auto out = m.answers;
    out.insert(out.end(), m.authority.begin(), m.authority.end());
    return out;
}

ZoneKeys zone_keys_from(const DnsName &zone, const RRset &dnskeys) {
    ZoneKeys keys{zone, {}};
    for (const auto &rd : dnskeys.rdatas) keys.keys.push_back(std::get<DnskeyRdata>(rd));
    return keys;
}

/// Verifies a DNSKEY RRset with one particular entry key (anchor or
/// DS-matched KSK).
VerifyResult verify_dnskey_set(const RRset &dnskeys, const std::vector<RrsigRdata> &sigs, const DnsName &zone,
                               const DnskeyRdata &entry, UnixTime now) {
    if (sigs.empty()) return VerifyResult::BadSignature;
    return verify_with_keys(dnskeys, sigs, ZoneKeys{zone, {entry}}, now);
}

struct Fetched {
    std::optional<RRset> set;
    std::vector<RrsigRdata> sigs;
    DnsMessage message;
};

Fetched fetch_set(const FetchFn &fetch, const DnsName &name, RRType type) {
    Fetched f;
    f.message = fetch(name, type);
    auto records = all_records(f.message);
    f.set = find_rrset(f.message.answers, name, type);
    f.sigs = signatures_for(records, name, type);
    return f;
}

/// Which zone signed the response: taken from the first answer RRSIG, or the
/// authority RRSIGs for negative answers.
std::optional<DnsName> signer_of(const DnsMessage &response) {
    for (const auto *section : {&response.answers, &response.authority}) {
        for (const auto &rr : *section) {
            if (rr.type == RRType::RRSIG) return std::get<RrsigRdata>(rr.rdata).signer_name;
        }
    }
    return std::nullopt;
}

}  // namespace

ValidationOutcome validate_chain(const DnsMessage &response, const DnsName &qname, RRType qtype,
                                 const std::vector<TrustAnchor> &anchors, const FetchFn &fetch, UnixTime now) {
    auto target = signer_of(response).value_or(qname);
    if (!qname.is_subdomain_of(target)) {
        return bogus(BogusReason::SignerOutOfBailiwick, {}, "signer " + target.to_string() + " does not enclose " +
                                                                qname.to_string());
    }

    const TrustAnchor *anchor = nullptr;
    for (const auto &a : anchors) {
        if (target.is_subdomain_of(a.zone) && (!anchor || a.zone.label_count() > anchor->zone.label_count())) {
            anchor = &a;
        }
    }
    if (!anchor) return ValidationOutcome{Security::Insecure, BogusReason::NoTrustAnchor, {}, "no trust anchor"};

    std::vector<ChainLink> chain;
    DnsName zone = anchor->zone;
    ZoneKeys keys;
    {
        auto f = fetch_set(fetch, zone, RRType::DNSKEY);
        if (!f.set) return bogus(BogusReason::AnchorKeyMissing, chain, "no DNSKEY set at " + zone.to_string());
        const bool present = std::any_of(f.set->rdatas.begin(), f.set->rdatas.end(), [&](const Rdata &rd) {
            return std::get<DnskeyRdata>(rd) == anchor->dnskey;
        });
        if (!present) return bogus(BogusReason::AnchorKeyMissing, chain, "anchor key absent from DNSKEY set");
        auto r = verify_dnskey_set(*f.set, f.sigs, zone, anchor->dnskey, now);
        if (r != VerifyResult::Valid) {
            return bogus(f.sigs.empty() ? BogusReason::DnskeyNotSigned : reason_for(r), chain,
                         "DNSKEY set at " + zone.to_string() + " not signed by the anchor");
        }
        keys = zone_keys_from(zone, *f.set);
        chain.push_back(ChainLink{zone, anchor->key_tag});
    }

    // Walk one label at a time from the anchor down to the signer.
    for (auto depth = zone.label_count() + 1; depth <= target.label_count(); ++depth) {
        const DnsName next = target.suffix(depth);
        auto ds = fetch_set(fetch, next, RRType::DS);
        if (ds.set) {
            if (ds.sigs.empty()) return bogus(BogusReason::MissingSignature, chain, "unsigned DS at " + next.to_string());
            auto r = verify_with_keys(*ds.set, ds.sigs, keys, now);
            if (r != VerifyResult::Valid) return bogus(reason_for(r), chain, "DS set at " + next.to_string());

            auto dk = fetch_set(fetch, next, RRType::DNSKEY);
            if (!dk.set) return bogus(BogusReason::DsMismatch, chain, "no DNSKEY set at " + next.to_string());
            std::optional<std::uint16_t> entry_tag;
            BogusReason failure = BogusReason::DsMismatch;
            for (const auto &krd : dk.set->rdatas) {
                const auto &key = std::get<DnskeyRdata>(krd);
                const bool matched = std::any_of(ds.set->rdatas.begin(), ds.set->rdatas.end(), [&](const Rdata &d) {
                    return match_ds(std::get<DsRdata>(d), key, next);
                });
                if (!matched) continue;
                auto vr = verify_dnskey_set(*dk.set, dk.sigs, next, key, now);
                if (vr == VerifyResult::Valid) {
                    entry_tag = compute_key_tag(key);
                    break;
                }
                failure = dk.sigs.empty() ? BogusReason::DnskeyNotSigned : reason_for(vr);
            }
            if (!entry_tag) return bogus(failure, chain, "no DS-matching key signs DNSKEY at " + next.to_string());
            zone = next;
            keys = zone_keys_from(zone, *dk.set);
            chain.push_back(ChainLink{zone, *entry_tag});
            continue;
        }

        auto denial = check_denial(next, RRType::DS, collect_witnesses(ds.message.authority), keys, now);
        switch (denial.kind) {
            case DenialKind::InvalidProof:
                return bogus(BogusReason::DenialInvalid, chain, "bad NSEC proof for DS at " + next.to_string());
            case DenialKind::NoProof:
                return bogus(BogusReason::MissingDsProof, chain, "no DS and no proof at " + next.to_string());
            case DenialKind::TypeDoesNotExist: {
                const auto &nsec = std::get<NsecRdata>(denial.witnesses.front().rdata);
                if (denial.witnesses.front().owner == next && nsec.type_bitmap.count(RRType::NS)) {
                    return ValidationOutcome{Security::Insecure, BogusReason::NoDsAtDelegation, chain,
                                             "unsigned delegation at " + next.to_string()};
                }
                break;  // an ordinary name inside the current zone
            }
            case DenialKind::NameDoesNotExist: break;
        }
    }

    if (!(zone == target)) {
        return bogus(BogusReason::WrongKey, chain, "signer " + target.to_string() + " is not a secure zone");
    }

    // The response itself.
    const bool positive = response.rcode == Rcode::NOERROR && !response.answers.empty();
    if (positive) {
        for (const auto &set : rrsets_from_records(response.answers)) {
            if (set.type == RRType::RRSIG) continue;
            auto sigs = signatures_for(response.answers, set.owner, set.type);
            if (sigs.empty()) {
                return bogus(BogusReason::MissingSignature, chain,
                             "unsigned " + type_to_string(set.type) + " at " + set.owner.to_string());
            }
            auto r = verify_with_keys(set, sigs, keys, now);
            if (r != VerifyResult::Valid) {
                return bogus(reason_for(r), chain, type_to_string(set.type) + " at " + set.owner.to_string());
            }
        }
        return ValidationOutcome{Security::Secure, BogusReason::None, chain, {}};
    }

    if (auto soa = find_rrset(response.authority, zone, RRType::SOA)) {
        auto sigs = signatures_for(response.authority, zone, RRType::SOA);
        if (sigs.empty()) return bogus(BogusReason::MissingSignature, chain, "unsigned SOA in negative answer");
        auto r = verify_with_keys(*soa, sigs, keys, now);
        if (r != VerifyResult::Valid) return bogus(reason_for(r), chain, "SOA in negative answer");
    }
    auto denial = check_denial(qname, qtype, collect_witnesses(response.authority), keys, now);
    const bool proven = (response.rcode == Rcode::NXDOMAIN && denial.kind == DenialKind::NameDoesNotExist) ||
                        (response.rcode == Rcode::NOERROR && denial.kind == DenialKind::TypeDoesNotExist);
    if (proven) return ValidationOutcome{Security::Secure, BogusReason::None, chain, {}};
    if (denial.kind == DenialKind::InvalidProof) return bogus(BogusReason::DenialInvalid, chain, "bad NSEC proof");
    return bogus(BogusReason::BadDenial, chain, std::string("denial not proven: ") + std::string(denial_name(denial.kind)));
}

}  // namespace dnsseckit
