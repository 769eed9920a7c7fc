#include "dnsseckit/signer.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/crypto.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/wire_io.hpp"

namespace dnsseckit {

std::vector<DnsName> authoritative_owners(const Zone &zone) {
    std::vector<DnsName> owners;
    for (const auto &rr : zone.records()) {
        if (zone.is_below_cut(rr.owner)) continue;
        owners.push_back(rr.owner);
    }
    std::sort(owners.begin(), owners.end());
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    return owners;
}

Zone build_nsec_chain(const Zone &zone) {
    std::vector<ResourceRecord> records;
    for (const auto &rr : zone.records()) {
        if (rr.type != RRType::NSEC) records.push_back(rr);
    }
    Zone base(zone.apex(), records);
    auto owners = authoritative_owners(base);

    std::map<DnsName, std::set<RRType>> types;
    for (const auto &rr : base.records()) {
        if (!base.is_below_cut(rr.owner)) types[rr.owner].insert(rr.type);
    }
    const auto ttl = base.soa().minimum;
    for (std::size_t i = 0; i < owners.size(); ++i) {
        NsecRdata nsec;
        nsec.next_name = owners[(i + 1) % owners.size()];
        nsec.type_bitmap = types[owners[i]];
        nsec.type_bitmap.insert(RRType::NSEC);
        nsec.type_bitmap.insert(RRType::RRSIG);
        records.push_back(ResourceRecord{owners[i], RRType::NSEC, RRClass::IN, ttl, nsec});
    }
    return Zone(zone.apex(), std::move(records));
}

Bytes rrsig_signing_input(const RrsigRdata &sig, const RRset &rrset) {
    WireWriter w;
    w.u16(static_cast<std::uint16_t>(sig.type_covered));
    w.u8(sig.algorithm);
    w.u8(sig.labels);
    w.u32(sig.original_ttl);
    w.u32(sig.expiration);
    w.u32(sig.inception);
    w.u16(sig.key_tag);
    w.name(sig.signer_name, false, true);

    // A signature over fewer labels than the owner has was made for the
    // wildcard that synthesised it.
    RRset covered = rrset;
    if (sig.labels < rrset.owner.label_count()) {
        covered.owner = rrset.owner.suffix(sig.labels).prepend("*");
    }
    auto body = canonical_rrset_bytes(covered, sig.original_ttl);
    w.bytes(body);
    return std::move(w).take();
}

ResourceRecord sign_rrset(const RRset &rrset, const KeyPair &key, const SigningPolicy &policy, UnixTime now) {
    if (!algorithm_can_sign(key.algorithm)) {
        throw Error(Errc::LegacyAlgorithm, "algorithm " + algorithm_mnemonic(key.algorithm) + " cannot sign");
    }
    if (!rrset.owner.is_subdomain_of(key.zone)) {
        throw Error(Errc::OutOfZoneOwner, rrset.owner.to_string() + " is not within " + key.zone.to_string());
    }
    RrsigRdata sig;
    sig.type_covered = rrset.type;
    sig.algorithm = key.algorithm;
    auto labels = rrset.owner.label_count();
    if (rrset.owner.is_wildcard()) --labels;
    sig.labels = static_cast<std::uint8_t>(labels);
    sig.original_ttl = rrset.ttl;
    sig.inception = static_cast<std::uint32_t>(now - policy.inception_skew);
    sig.expiration = sig.inception + policy.validity;
    sig.key_tag = key.key_tag;
    sig.signer_name = key.zone;
    sig.signature = sign_with(key, rrsig_signing_input(sig, rrset));
    return ResourceRecord{rrset.owner, RRType::RRSIG, rrset.rclass, rrset.ttl, sig};
}

namespace {

bool is_signable(const Zone &zone, const RRset &set) {
    if (set.type == RRType::RRSIG) return false;
    if (zone.is_below_cut(set.owner)) return false;  // glue, occluded data
    if (set.type == RRType::NS && !(set.owner == zone.apex())) return false;  // delegation
    return true;
}

std::size_t count_for(const Zone &zone, const RRset &set, const SigningPolicy &policy) {
    if (!is_signable(zone, set)) return 0;
    if (set.type == RRType::DNSKEY && set.owner == zone.apex()) {
        return (policy.sign_dnskey_with_ksk ? 1 : 0) + (policy.sign_dnskey_with_zsk ? 1 : 0);
    }
    return 1;
}

bool has_dnskey(const std::vector<ResourceRecord> &records, const DnsName &apex, const DnskeyRdata &key) {
    return std::any_of(records.begin(), records.end(), [&](const ResourceRecord &rr) {
        return rr.type == RRType::DNSKEY && rr.owner == apex && std::get<DnskeyRdata>(rr.rdata) == key;
    });
}

}  // namespace

std::size_t expected_signature_count(const Zone &zone_with_keys, const SigningPolicy &policy) {
    std::size_t n = 0;
    for (const auto &set : group_rrsets(zone_with_keys)) n += count_for(zone_with_keys, set, policy);
    return n;
}

SignedZone sign_zone(const Zone &zone, const KeyPair &zsk, const KeyPair &ksk, const SigningPolicy &policy,
                     UnixTime now) {
    const auto started = std::chrono::steady_clock::now();
    if (!(zsk.zone == zone.apex()) || !(ksk.zone == zone.apex())) {
        throw Error(Errc::KeyZoneMismatch, "keys " + zsk.base_name() + " and " + ksk.base_name() +
                                               " do not both belong to zone " + zone.apex().to_string());
    }
    if (ksk.role != KeyRole::Ksk) throw Error(Errc::NotAKsk, ksk.base_name() + " is not a key-signing key");
    if (zsk.role != KeyRole::Zsk) throw Error(Errc::KeyMismatch, zsk.base_name() + " is not a zone-signing key");
    for (const auto *k : {&zsk, &ksk}) {
        if (!algorithm_can_sign(k->algorithm)) {
            throw Error(Errc::LegacyAlgorithm, k->base_name() + " uses legacy algorithm " +
                                                   algorithm_mnemonic(k->algorithm) + " which cannot sign");
        }
    }

    SignedZone out;
    std::vector<ResourceRecord> records;
    for (const auto &rr : zone.records()) {
        if (rr.type == RRType::RRSIG) {
            ++out.stats.signatures_dropped;
            continue;
        }
        if (rr.type == RRType::NSEC) continue;
        records.push_back(rr);
    }
    const auto dnskey_ttl = zone.soa_record().ttl;
    for (const auto *k : {&ksk, &zsk}) {
        if (has_dnskey(records, zone.apex(), k->public_key)) continue;
        if (!policy.auto_insert_dnskey) {
            throw Error(Errc::MissingDnskeyRecords,
                        "zone lacks the DNSKEY record for " + k->base_name() + " and auto-insert is disabled");
        }
        records.push_back(ResourceRecord{zone.apex(), RRType::DNSKEY, RRClass::IN, dnskey_ttl, k->public_key});
    }

    Zone chained = build_nsec_chain(Zone(zone.apex(), records));
    std::vector<ResourceRecord> result = chained.records();

    struct Emitted {
        RRset set;
        const KeyPair *key;
        std::size_t index;
    };
    std::vector<Emitted> emitted;
    for (const auto &set : group_rrsets(chained)) {
        if (!is_signable(chained, set)) continue;
        std::vector<const KeyPair *> signers;
        if (set.type == RRType::DNSKEY && set.owner == chained.apex()) {
            if (policy.sign_dnskey_with_ksk) signers.push_back(&ksk);
            if (policy.sign_dnskey_with_zsk) signers.push_back(&zsk);
        } else {
            signers.push_back(&zsk);
        }
        for (const auto *k : signers) {
            result.push_back(sign_rrset(set, *k, policy, now));
            emitted.push_back(Emitted{set, k, result.size() - 1});
            ++out.stats.signatures_generated;
        }
    }

    // Verify every signature just produced against its published key.
    for (const auto &e : emitted) {
        const auto &sig = std::get<RrsigRdata>(result[e.index].rdata);
        if (rsa_verify(e.key->public_key.public_key, sig.algorithm, rrsig_signing_input(sig, e.set),
                       sig.signature)) {
            ++out.stats.signatures_verified;
        } else {
            ++out.stats.signatures_failed;
        }
    }

    out.zone = Zone(zone.apex(), std::move(result));
    out.keys_used = {ksk.key_tag, zsk.key_tag};
    out.algorithms = {ksk.algorithm};
    if (zsk.algorithm != ksk.algorithm) out.algorithms.push_back(zsk.algorithm);

    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
    out.stats.runtime_seconds = std::max(elapsed.count(), 1e-6);
    out.stats.signatures_per_second =
        static_cast<double>(out.stats.signatures_generated) / out.stats.runtime_seconds;
    return out;
}

Bytes ds_digest(const DnsName &owner, const DnskeyRdata &key, std::uint8_t digest_type) {
    auto data = canonical_name_wire(owner);
    auto rdata = rdata_to_wire(key, true);
    data.insert(data.end(), rdata.begin(), rdata.end());
    return compute_digest(digest_type, data);
}

ResourceRecord make_ds(const DnsName &child_apex, const DnskeyRdata &ksk, std::uint8_t digest_type,
                       std::uint32_t ttl) {
    if (!ksk.is_sep()) throw Error(Errc::NotAKsk, "DS records are made from key-signing keys (flags 257)");
    DsRdata ds;
    ds.key_tag = compute_key_tag(ksk);
    ds.algorithm = ksk.algorithm;
    ds.digest_type = digest_type;
    ds.digest = ds_digest(child_apex, ksk, digest_type);
    return ResourceRecord{child_apex, RRType::DS, RRClass::IN, ttl, ds};
}

namespace {

std::string stat_line(const char *label, const std::string &value) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-36s%10s\n", label, value.c_str());
    return buf;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string format_signing_stats(const SigningStats &s) {
    std::string out;
    out += stat_line("Signatures generated:", std::to_string(s.signatures_generated));
    out += stat_line("Signatures retained:", std::to_string(s.signatures_retained));
    out += stat_line("Signatures dropped:", std::to_string(s.signatures_dropped));
    out += stat_line("Signatures successfully verified:", std::to_string(s.signatures_verified));
    out += stat_line("Signatures unsuccessfully verified:", std::to_string(s.signatures_failed));
    out += stat_line("Runtime in seconds:", fixed3(s.runtime_seconds));
    out += stat_line("Signatures per second:", fixed3(s.signatures_per_second));
    return out;
}

std::string format_signing_report(const SignedZone &sz, const std::string &output_name) {
    std::string algs;
    for (auto a : sz.algorithms) {
        if (!algs.empty()) algs += ", ";
        algs += algorithm_mnemonic(a);
    }
    std::size_t ksks = 0, zsks = 0;
    for (const auto &rr : sz.zone.records()) {
        if (rr.type != RRType::DNSKEY || !(rr.owner == sz.zone.apex())) continue;
        (std::get<DnskeyRdata>(rr.rdata).is_sep() ? ksks : zsks)++;
    }
    const std::string head = "Algorithm: " + algs + ": ";
    std::string out = "Verifying the zone using the following algorithms: " + algs + ".\n";
    out += "Zone signing complete:\n";
    out += head + "KSKs: " + std::to_string(ksks) + " active, 0 stand-by, 0 revoked\n";
    out += std::string(head.size(), ' ') + "ZSKs: " + std::to_string(zsks) + " active, 0 stand-by, 0 revoked\n";
    out += output_name + "\n";
    out += format_signing_stats(sz.stats);
    return out;
}

}  // namespace dnsseckit
