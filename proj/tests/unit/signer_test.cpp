#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <regex>
#include <set>

#include "dnsseckit/encoding.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/signer.hpp"
#include "dnsseckit/validator.hpp"
#include "fixtures.hpp"

using namespace dnsseckit;
using fixtures::name;

namespace {

std::vector<ResourceRecord> of_type(const Zone &z, RRType t) {
    std::vector<ResourceRecord> out;
    for (const auto &rr : z.records()) {
        if (rr.type == t) out.push_back(rr);
    }
    return out;
}

// Sorting oracle independent of canonical_compare: reverse the lowercased
// labels and compare the resulting sequences lexicographically.
std::vector<std::string> reversed_key(const DnsName &n) {
    auto labels = n.lowercased().labels();
    std::reverse(labels.begin(), labels.end());
    return labels;
}

bool key_less(const std::vector<std::string> &a, const std::vector<std::string> &b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const auto &x, const auto &y) {
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), [](char p, char q) {
            return static_cast<unsigned char>(p) < static_cast<unsigned char>(q);
        });
    });
}

Zone random_zone(std::mt19937_64 &rng) {
    std::vector<ResourceRecord> records{fixtures::zone().soa_record()};
    const auto n = 1 + rng() % 25;
    for (std::size_t i = 0; i < n; ++i) {
        auto owner = fixtures::apex();
        const auto depth = 1 + rng() % 3;
        for (std::size_t d = 0; d < depth; ++d) owner = owner.prepend(std::string(1, "abcAB"[rng() % 5]) + std::to_string(rng() % 3));
        if (rng() % 3 == 0) {
            records.push_back(ResourceRecord{owner, RRType::TXT, RRClass::IN, 60, TxtRdata{{"t"}}});
        } else {
            records.push_back(ResourceRecord{owner, RRType::A, RRClass::IN, 60,
                                             ARdata{{10, 0, 0, static_cast<std::uint8_t>(rng())}}});
        }
    }
    return Zone(fixtures::apex(), std::move(records));
}

void expect_closed_chain(const Zone &z) {
    const auto nsecs = of_type(z, RRType::NSEC);
    const auto owners = authoritative_owners(z);
    ASSERT_EQ(nsecs.size(), owners.size());
    std::map<std::string, DnsName> next;
    for (const auto &rr : nsecs) next[rr.owner.lowercased().to_string()] = std::get<NsecRdata>(rr.rdata).next_name;
    std::set<std::string> seen;
    auto at = z.apex();
    for (std::size_t i = 0; i < owners.size(); ++i) {
        const auto key = at.lowercased().to_string();
        ASSERT_TRUE(seen.insert(key).second) << "revisited " << key;
        ASSERT_TRUE(next.count(key)) << "no NSEC at " << key;
        const auto to = next[key];
        // Each hop moves forward in canonical order except the final wrap.
        if (i + 1 < owners.size()) {
            EXPECT_TRUE(key_less(reversed_key(at), reversed_key(to))) << key << " -> " << to.to_string();
        }
        at = to;
    }
    EXPECT_EQ(at, z.apex());
    EXPECT_EQ(seen.size(), owners.size());
}

}  // namespace

TEST(NsecChain, WrapsFromTheLastOwnerToTheApex) {
    std::vector<ResourceRecord> rrs{fixtures::zone().soa_record()};
    rrs.push_back(ResourceRecord{name("mail.domaine.ma."), RRType::A, RRClass::IN, 60, ARdata{{1, 1, 1, 1}}});
    rrs.push_back(ResourceRecord{name("www.domaine.ma."), RRType::A, RRClass::IN, 60, ARdata{{1, 1, 1, 2}}});
    const auto z = build_nsec_chain(Zone(fixtures::apex(), rrs));
    for (const auto &rr : of_type(z, RRType::NSEC)) {
        const auto &n = std::get<NsecRdata>(rr.rdata);
        if (rr.owner == name("www.domaine.ma.")) EXPECT_EQ(n.next_name, fixtures::apex());
        if (rr.owner == fixtures::apex()) EXPECT_EQ(n.next_name, name("mail.domaine.ma."));
    }
}

TEST(NsecChain, TtlIsTheSoaMinimum) {
    const auto z = build_nsec_chain(fixtures::zone());
    for (const auto &rr : of_type(z, RRType::NSEC)) EXPECT_EQ(rr.ttl, z.soa().minimum);
}

TEST(NsecChain, ApexOnlyZonePointsAtItself) {
    const auto z = build_nsec_chain(Zone(fixtures::apex(), {fixtures::zone().soa_record()}));
    const auto nsecs = of_type(z, RRType::NSEC);
    ASSERT_EQ(nsecs.size(), 1u);
    const auto &n = std::get<NsecRdata>(nsecs[0].rdata);
    EXPECT_EQ(n.next_name, fixtures::apex());
    EXPECT_EQ(n.type_bitmap, (std::set<RRType>{RRType::SOA, RRType::RRSIG, RRType::NSEC}));
}

TEST(NsecChain, BitmapListsTypesAtTheOwner) {
    const auto base = fixtures::zone();
    const auto z = build_nsec_chain(base);
    for (const auto &rr : of_type(z, RRType::NSEC)) {
        std::set<RRType> expect{RRType::RRSIG, RRType::NSEC};
        for (const auto &other : base.records()) {
            if (other.owner == rr.owner) expect.insert(other.type);
        }
        EXPECT_EQ(std::get<NsecRdata>(rr.rdata).type_bitmap, expect) << rr.owner.to_string();
    }
}

TEST(NsecChain, ClosedCycleOverRandomZones) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) expect_closed_chain(build_nsec_chain(random_zone(rng)));
}

TEST(NsecChain, GlueIsNotAnOwner) {
    auto base = fixtures::zone();
    auto rrs = base.records();
    rrs.push_back(ResourceRecord{name("sub.domaine.ma."), RRType::NS, RRClass::IN, 60, NsRdata{name("ns.sub.domaine.ma.")}});
    rrs.push_back(ResourceRecord{name("ns.sub.domaine.ma."), RRType::A, RRClass::IN, 60, ARdata{{9, 9, 9, 9}}});
    const auto z = build_nsec_chain(Zone(fixtures::apex(), rrs));
    for (const auto &rr : of_type(z, RRType::NSEC)) {
        EXPECT_FALSE(rr.owner == name("ns.sub.domaine.ma."));
        if (rr.owner == name("sub.domaine.ma.")) {
            EXPECT_EQ(std::get<NsecRdata>(rr.rdata).type_bitmap,
                      (std::set<RRType>{RRType::NS, RRType::RRSIG, RRType::NSEC}));
        }
    }
    expect_closed_chain(z);
}

TEST(SignRrset, PresentationShape) {
    RRset s{fixtures::apex(), RRType::A, RRClass::IN, 86400, {ARdata{{192, 168, 1, 3}}}};
    const auto sig = sign_rrset(s, fixtures::zsk(), SigningPolicy{}, fixtures::kNow);
    const auto text = rdata_to_text(sig.rdata);
    const std::regex shape("^A 5 2 86400 \\d{14} \\d{14} " + std::to_string(fixtures::zsk().key_tag) +
                           " domaine\\.ma\\. .+");
    EXPECT_TRUE(std::regex_match(text, shape)) << text;
    const auto &r = std::get<RrsigRdata>(sig.rdata);
    EXPECT_EQ(r.inception, fixtures::kNow - 3600);
    EXPECT_EQ(r.expiration, r.inception + 30 * 86400);
    EXPECT_EQ(sig.owner, s.owner);
    EXPECT_EQ(sig.ttl, 86400u);
}

TEST(SignRrset, VerifiesAnywhereInTheWindow) {
    RRset s{name("www.domaine.ma."), RRType::A, RRClass::IN, 600, {ARdata{{1, 2, 3, 4}}, ARdata{{5, 6, 7, 8}}}};
    const auto sig = std::get<RrsigRdata>(sign_rrset(s, fixtures::zsk(), SigningPolicy{}, fixtures::kNow).rdata);
    for (UnixTime t : {static_cast<UnixTime>(sig.inception), fixtures::kNow, static_cast<UnixTime>(sig.expiration)}) {
        EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), t), VerifyResult::Valid);
    }
}

TEST(SignRrset, AnyFlippedOctetBreaksTheSignature) {
    RRset s{name("www.domaine.ma."), RRType::TXT, RRClass::IN, 600, {TxtRdata{{"some text to perturb"}}}};
    const auto sig = std::get<RrsigRdata>(sign_rrset(s, fixtures::zsk(), SigningPolicy{}, fixtures::kNow).rdata);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 50; ++i) {
        auto m = s;
        auto &str = std::get<TxtRdata>(m.rdatas[0]).strings[0];
        str[rng() % str.size()] ^= static_cast<char>(1u << (rng() % 8));
        EXPECT_EQ(verify_rrsig(m, sig, fixtures::zsk().public_key, fixtures::apex(), fixtures::kNow),
                  VerifyResult::BadSignature);
    }
}

TEST(SignRrset, Errors) {
    RRset outside{name("www.example.com."), RRType::A, RRClass::IN, 60, {ARdata{}}};
    try {
        sign_rrset(outside, fixtures::zsk(), SigningPolicy{}, fixtures::kNow);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::OutOfZoneOwner);
    }
    auto legacy = fixtures::zsk();
    legacy.algorithm = 1;
    legacy.public_key.algorithm = 1;
    RRset inside{fixtures::apex(), RRType::A, RRClass::IN, 60, {ARdata{}}};
    try {
        sign_rrset(inside, legacy, SigningPolicy{}, fixtures::kNow);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::LegacyAlgorithm);
    }
}

TEST(SignZone, CountIsRrsetsPlusTwo) {
    for (std::size_t extra : {0u, 3u, 10u}) {
        const auto z = fixtures::zone_with_owners(extra);
        const auto sz = sign_zone(z, fixtures::zsk(), fixtures::ksk(), SigningPolicy{}, fixtures::kNow);
        // Brute force: RRsets after NSEC insertion, excluding DNSKEY and RRSIG.
        std::set<std::pair<std::string, RRType>> sets;
        for (const auto &rr : sz.zone.records()) {
            if (rr.type == RRType::RRSIG || rr.type == RRType::DNSKEY) continue;
            sets.insert({rr.owner.lowercased().to_string(), rr.type});
        }
        EXPECT_EQ(sz.stats.signatures_generated, sets.size() + 2);
        EXPECT_EQ(of_type(sz.zone, RRType::RRSIG).size(), sz.stats.signatures_generated);
        EXPECT_EQ(sz.stats.signatures_verified, sz.stats.signatures_generated);
        EXPECT_EQ(sz.stats.signatures_failed, 0u);
    }
}

TEST(SignZone, FixtureCounts) {
    const auto &sz = fixtures::signed_zone();
    EXPECT_EQ(sz.stats.signatures_generated, 19u);
    EXPECT_EQ(of_type(sz.zone, RRType::DNSKEY).size(), 2u);
    EXPECT_EQ(sz.stats.signatures_retained, 0u);
    EXPECT_EQ(sz.stats.signatures_dropped, 0u);
    EXPECT_GT(sz.stats.signatures_per_second, 0);
}

TEST(SignZone, EveryRrsetIsCoveredAndVerifies) {
    const auto &sz = fixtures::signed_zone();
    const ZoneKeys keys{fixtures::apex(), {fixtures::zsk().public_key, fixtures::ksk().public_key}};
    for (const auto &set : group_rrsets(sz.zone)) {
        if (set.type == RRType::RRSIG) continue;
        const auto sigs = signatures_for(sz.zone.records(), set.owner, set.type);
        ASSERT_FALSE(sigs.empty()) << set.owner.to_string() << " " << type_to_string(set.type);
        EXPECT_EQ(verify_with_keys(set, sigs, keys, fixtures::kNow), VerifyResult::Valid);
    }
    expect_closed_chain(sz.zone);
}

TEST(SignZone, DnskeySetSignedByBothKeys) {
    const auto &sz = fixtures::signed_zone();
    std::set<std::uint16_t> tags;
    for (const auto &rr : of_type(sz.zone, RRType::RRSIG)) {
        const auto &r = std::get<RrsigRdata>(rr.rdata);
        if (r.type_covered == RRType::DNSKEY) tags.insert(r.key_tag);
        else EXPECT_EQ(r.key_tag, fixtures::zsk().key_tag);
    }
    EXPECT_EQ(tags, (std::set<std::uint16_t>{fixtures::zsk().key_tag, fixtures::ksk().key_tag}));
}

TEST(SignZone, PolicyCanDropTheZskDnskeySignature) {
    SigningPolicy p;
    p.sign_dnskey_with_zsk = false;
    const auto sz = sign_zone(fixtures::zone(), fixtures::zsk(), fixtures::ksk(), p, fixtures::kNow);
    EXPECT_EQ(sz.stats.signatures_generated, 18u);
}

TEST(SignZone, ResigningDropsThePreviousSignatures) {
    const auto &first = fixtures::signed_zone();
    const auto again = sign_zone(first.zone, fixtures::zsk(), fixtures::ksk(), SigningPolicy{}, fixtures::kNow);
    EXPECT_EQ(again.stats.signatures_dropped, first.stats.signatures_generated);
    EXPECT_EQ(again.stats.signatures_generated, first.stats.signatures_generated);
}

TEST(SignZone, DeterministicGivenKeysAndClock) {
    const auto a = sign_zone(fixtures::zone(), fixtures::zsk(), fixtures::ksk(), SigningPolicy{}, fixtures::kNow);
    EXPECT_EQ(a.zone, fixtures::signed_zone().zone);
}

TEST(SignZone, Errors) {
    const auto &other = fixtures::key_for(name("example.com."), KeyRole::Zsk, 512, 7);
    try {
        sign_zone(fixtures::zone(), other, fixtures::ksk(), SigningPolicy{}, fixtures::kNow);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::KeyZoneMismatch);
    }
    SigningPolicy strict;
    strict.auto_insert_dnskey = false;
    try {
        sign_zone(fixtures::zone(), fixtures::zsk(), fixtures::ksk(), strict, fixtures::kNow);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::MissingDnskeyRecords);
    }
    try {
        sign_zone(fixtures::zone(), fixtures::zsk(), fixtures::zsk(), SigningPolicy{}, fixtures::kNow);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::NotAKsk);
    }
}

TEST(MakeDs, DigestLengthsAndDeterminism) {
    const auto &k = fixtures::ksk().public_key;
    const auto a = make_ds(fixtures::apex(), k, 1);
    EXPECT_EQ(a, make_ds(fixtures::apex(), k, 1));
    EXPECT_EQ(std::get<DsRdata>(a.rdata).digest.size(), 20u);
    EXPECT_EQ(std::get<DsRdata>(make_ds(fixtures::apex(), k, 2).rdata).digest.size(), 32u);
    EXPECT_EQ(std::get<DsRdata>(a.rdata).key_tag, fixtures::ksk().key_tag);
    try {
        make_ds(fixtures::apex(), fixtures::zsk().public_key, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::NotAKsk);
    }
    try {
        make_ds(fixtures::apex(), k, 7);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::UnsupportedDigest);
    }
}

TEST(MakeDs, ReferenceVectors) {
    // The worked DS example of the DNSSEC record specification and its SHA-256 companion.
    const auto rrs = parse_records(
        "dskey.example.com. 86400 IN DNSKEY 257 3 5 ( AQOeiiR0GOMYkDshWoSKz9Xz\n"
        "  fwJr1AYtsmx3TGkJaNXVbfi/ 2pHm822aJ5iI9BMzNXxeYCmZ DRD99WYwYqUSdjMmmAphXdvx\n"
        "  egXd/M5+X7OrzKBaMbCVdFLU Uh6DhweJBjEVv5f2wwjM9Xzc nOf+EPbtG9DMBmADjFDc2w/r\n"
        "  ljwvFw== )\n",
        DnsName{});
    auto key = std::get<DnskeyRdata>(rrs[0].rdata);
    // The published example uses flags 256; the digest depends on it.
    key.flags = 256;
    EXPECT_EQ(hex_encode(ds_digest(name("dskey.example.com."), key, 1)), "2BB183AF5F22588179A53B0A98631FAD1A292118");
    EXPECT_EQ(hex_encode(ds_digest(name("DSKEY.example.com."), key, 2)),
              "D4B7D520E7BB5F0F67674A0CCEB1E3E0614B93C4F9E99B8383F6A1E4469DA50A");
}

TEST(MakeDs, MatchesOnlyItsOwnKey) {
    for (std::uint64_t seed = 100; seed < 200; ++seed) {
        const auto &k = fixtures::key_for(fixtures::apex(), KeyRole::Ksk, 512, seed);
        const auto ds = std::get<DsRdata>(make_ds(fixtures::apex(), k.public_key, seed % 2 ? 1 : 2).rdata);
        ASSERT_TRUE(match_ds(ds, k.public_key, fixtures::apex()));
        const auto &other = fixtures::key_for(fixtures::apex(), KeyRole::Ksk, 512, seed + 1);
        ASSERT_FALSE(match_ds(ds, other.public_key, fixtures::apex()));
        ASSERT_FALSE(match_ds(ds, k.public_key, name("other.ma.")));
    }
}

TEST(Stats, LinesInReportOrder) {
    SigningStats s;
    s.signatures_generated = 23;
    s.runtime_seconds = 0.141;
    s.signatures_per_second = 162.838;
    const auto text = format_signing_stats(s);
    const char *labels[] = {"Signatures generated:", "Signatures retained:", "Signatures dropped:",
                            "Signatures successfully verified:", "Signatures unsuccessfully verified:",
                            "Runtime in seconds:", "Signatures per second:"};
    std::size_t pos = 0;
    for (const auto *l : labels) {
        const auto at = text.find(l, pos);
        ASSERT_NE(at, std::string::npos) << l;
        pos = at;
    }
    EXPECT_TRUE(std::regex_search(text, std::regex("Signatures generated: +23\n")));
    EXPECT_TRUE(std::regex_search(text, std::regex("Signatures retained: +0\n")));
    EXPECT_NE(text.find("0.141"), std::string::npos);
    EXPECT_NE(text.find("162.838"), std::string::npos);
}
