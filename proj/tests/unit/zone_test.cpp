#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <regex>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/encoding.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/zone.hpp"
#include "fixtures.hpp"

using namespace dnsseckit;
using fixtures::name;

namespace {

const char *kSoa = "@ 3600 IN SOA ns1 admin 1 3600 900 604800 300\n";

Zone parse(const std::string &text) { return parse_zone_file(text, fixtures::apex()); }

std::string squash(const std::string &s) { return std::regex_replace(s, std::regex("[ \t]+"), " "); }

// One record of every supported type.
std::string all_types_zone() {
    return std::string("$TTL 3600\n") + kSoa +
           "@ NS ns1\n"
           "@ NS ns2.other.example.\n"
           "@ MX 10 mail\n"
           "@ TXT \"hello world\" \"second \\\"quoted\\\" string\"\n"
           "@ A 192.168.1.3\n"
           "www AAAA 2001:db8::1\n"
           "ftp CNAME www\n"
           "ns1 A 192.168.1.1\n"
           "sub NS ns.sub\n"
           "ns.sub A 192.168.9.9\n"
           "sub DS 12345 5 1 0123456789ABCDEF0123456789ABCDEF01234567\n"
           "@ DNSKEY 256 3 5 AwEAAbamzBwMtPRM3UG02zpv5UX0sxVDqHQuAKnDKG0HLLTV6boL0caE\n"
           "@ RRSIG A 5 2 3600 20110812095331 20110713095331 18235 domaine.ma. AAECAwQFBgcICQ==\n"
           "www NSEC zzz A AAAA RRSIG NSEC\n";
}

}  // namespace

TEST(ZoneParse, ReadsSingleAddressRecord) {
    const auto z = parse(std::string(kSoa) + "domaine.ma. 86400 IN A 192.168.1.3\n");
    std::vector<ResourceRecord> a;
    std::copy_if(z.records().begin(), z.records().end(), std::back_inserter(a),
                 [](const ResourceRecord &rr) { return rr.type == RRType::A; });
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].owner, name("domaine.ma."));
    EXPECT_EQ(a[0].ttl, 86400u);
    EXPECT_EQ(std::get<ARdata>(a[0].rdata).address, (std::array<std::uint8_t, 4>{192, 168, 1, 3}));
}

TEST(ZoneParse, FixtureHasTwelveRecords) {
    const auto z = fixtures::zone();
    EXPECT_EQ(z.records().size(), 12u);
    EXPECT_EQ(z.soa().minimum, 3600u);
    EXPECT_EQ(z.soa().serial, 2011041501u);
}

TEST(ZoneParse, EmptyInputHasNoSoa) {
    try {
        parse("");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::MissingSoa);
    }
}

TEST(ZoneParse, SecondSoaIsRejected) {
    try {
        parse(std::string(kSoa) + kSoa);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::DuplicateSoa);
    }
}

TEST(ZoneParse, OutOfZoneOwnerIsRejected) {
    try {
        parse(std::string(kSoa) + "www.elsewhere. 60 IN A 1.2.3.4\n");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), Errc::OutOfZone);
    }
}

TEST(ZoneParse, SyntaxErrorsCarryPosition) {
    try {
        parse(std::string(kSoa) + "www 60 IN A 1.2.3\n");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_GT(e.column(), 1u);
    }
    try {
        parse(std::string(kSoa) + "www 60 IN HINFO a b\n");
        FAIL();
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.line(), 2u);
    }
    EXPECT_THROW(parse(std::string(kSoa) + "www 60 IN A (1.2.3.4\n"), SyntaxError);
    EXPECT_THROW(parse(std::string(kSoa) + "www 60 IN TXT \"open\n"), SyntaxError);
}

TEST(ZoneParse, DirectivesAndContinuations) {
    const auto z = parse(
        "$TTL 2h\n"
        "@ IN SOA ns1 admin (\n"
        "   7 ; serial\n"
        "   1h 15m 1w 5m )\n"
        "$ORIGIN sub.domaine.ma.\n"
        "www A 10.0.0.1\n"
        "    A 10.0.0.2\n"
        "@ 30 DNSKEY 257 3 5 (\n"
        "   AwEAAbamzBwMtPRM3UG02zpv5UX0\n"
        "   sxVDqHQuAKnDKG0HLLTV6boL0caE )\n");
    const auto &soa = z.soa();
    EXPECT_EQ(soa.serial, 7u);
    EXPECT_EQ(soa.refresh, 3600u);
    EXPECT_EQ(soa.retry, 900u);
    EXPECT_EQ(soa.expire, 604800u);
    EXPECT_EQ(soa.minimum, 300u);
    EXPECT_EQ(z.soa_record().ttl, 7200u);
    std::size_t www = 0;
    for (const auto &rr : z.records()) {
        if (rr.owner == name("www.sub.domaine.ma.")) ++www;
        if (rr.type == RRType::DNSKEY) {
            EXPECT_EQ(rr.owner, name("sub.domaine.ma."));
            EXPECT_EQ(rr.ttl, 30u);
            EXPECT_EQ(base64_encode(std::get<DnskeyRdata>(rr.rdata).public_key),
                      "AwEAAbamzBwMtPRM3UG02zpv5UX0sxVDqHQuAKnDKG0HLLTV6boL0caE");
        }
    }
    EXPECT_EQ(www, 2u);
}

TEST(ZoneParse, IncludeIsRelativeToTheZoneFile) {
    fixtures::TempDir dir;
    fixtures::write_file(dir / "keys.inc", "@ IN DNSKEY 256 3 5 AwEAAbamzBwMtPRM3UG02zpv5UX0\n");
    fixtures::write_file(dir / "zone.db", std::string("$TTL 60\n") + kSoa + "$INCLUDE keys.inc\nwww A 1.2.3.4\n");
    const auto z = load_zone_file(dir / "zone.db", fixtures::apex());
    EXPECT_TRUE(z.has_type(RRType::DNSKEY));
    // The origin is restored after the include, so www stays under the apex.
    EXPECT_TRUE(std::any_of(z.records().begin(), z.records().end(),
                            [](const ResourceRecord &rr) { return rr.owner == name("www.domaine.ma."); }));
}

TEST(ZoneParse, KeyRecordsRejectBadFlagsAndProtocol) {
    EXPECT_THROW(parse(std::string(kSoa) + "@ DNSKEY 255 3 5 AwEAAQ==\n"), SyntaxError);
    EXPECT_THROW(parse(std::string(kSoa) + "@ DNSKEY 256 2 5 AwEAAQ==\n"), SyntaxError);
    EXPECT_THROW(parse(std::string(kSoa) + "sub DS 1 5 1 0011\n"), SyntaxError);
}

TEST(ZoneSerialize, RoundTripsEveryType) {
    const auto z = parse(all_types_zone());
    EXPECT_EQ(z.records().size(), 15u);
    const auto text = serialize_zone(z);
    EXPECT_EQ(parse(text), z);
    EXPECT_EQ(serialize_zone(parse(text)), text);
}

TEST(ZoneSerialize, RoundTripsTheSignedFixture) {
    const auto &sz = fixtures::signed_zone();
    EXPECT_EQ(parse(serialize_zone(sz.zone)), sz.zone);
}

TEST(ZoneSerialize, KeyLinesMirrorKeyFilePresentation) {
    const auto z = parse(std::string(kSoa) +
                         "@ 86400 IN DNSKEY 256 3 1 AwEAAbamzBwMtPRM3UG02zpv5UX0sxVDqHQuAKnDKG0HLLTV6boL0caE\n");
    const auto text = squash(serialize_zone(z));
    EXPECT_NE(text.find("IN DNSKEY 256 3 1"), std::string::npos) << text;
    EXPECT_NE(text.find("key id ="), std::string::npos);
}

TEST(ZoneSerialize, SoaOnlyZone) {
    const auto z = parse(kSoa);
    const auto text = serialize_zone(z);
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    EXPECT_EQ(lines, 2u);  // header comment and the SOA
    EXPECT_NE(text.find("SOA"), std::string::npos);
}

TEST(ZoneSerialize, OwnersComeOutInCanonicalOrder) {
    const auto text = serialize_zone(fixtures::zone());
    const auto apex_pos = text.find("\ndomaine.ma.");
    const auto mail_pos = text.find("\nmail.domaine.ma.");
    const auto www_pos = text.find("\nwww.domaine.ma.");
    EXPECT_LT(apex_pos, mail_pos);
    EXPECT_LT(mail_pos, www_pos);
}

TEST(GroupRrsets, PartitionsByOwnerTypeClass) {
    const auto z = parse(std::string(kSoa) +
                         "www 60 A 1.1.1.1\nwww 60 A 1.1.1.2\n@ 60 MX 10 mail\n");
    auto sets = group_rrsets(z.records());
    ASSERT_EQ(sets.size(), 3u);
    EXPECT_EQ(sets[0].type, RRType::SOA);
    EXPECT_EQ(sets[1].type, RRType::MX);
    EXPECT_EQ(sets[2].owner, name("www.domaine.ma."));
    EXPECT_EQ(sets[2].rdatas.size(), 2u);
}

TEST(GroupRrsets, SingleRecordGivesSingleSet) {
    std::vector<ResourceRecord> one{ResourceRecord{name("a."), RRType::A, RRClass::IN, 5, ARdata{}}};
    EXPECT_EQ(group_rrsets(one).size(), 1u);
}

TEST(GroupRrsets, TtlConflictTakesMinimumAndWarns) {
    const auto z = parse(std::string(kSoa) + "www 300 A 1.1.1.1\nwww 600 A 1.1.1.2\n");
    std::vector<std::string> warnings;
    auto sets = group_rrsets(z.records(), &warnings);
    ASSERT_EQ(sets.size(), 2u);
    EXPECT_EQ(sets[1].ttl, 300u);
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(GroupRrsets, CoversEveryRecordExactlyOnce) {
    const auto z = parse(all_types_zone());
    std::map<std::string, int> expected, got;
    for (const auto &rr : z.records()) ++expected[record_to_text(rr)];
    for (const auto &set : group_rrsets(z.records())) {
        for (const auto &rr : set.records()) ++got[record_to_text(rr)];
    }
    EXPECT_EQ(got, expected);
}

TEST(CanonicalRrset, OrderIndependent) {
    RRset a{name("www.domaine.ma."), RRType::A, RRClass::IN, 60, {ARdata{{1, 1, 1, 1}}, ARdata{{2, 2, 2, 2}}}};
    RRset b = a;
    std::swap(b.rdatas[0], b.rdatas[1]);
    EXPECT_EQ(canonical_rrset_bytes(a, 60), canonical_rrset_bytes(b, 60));
}

TEST(CanonicalRrset, CaseOfOwnerAndRdataNamesDoesNotMatter) {
    RRset a{name("WWW.Domaine.MA."), RRType::MX, RRClass::IN, 60, {MxRdata{10, name("Mail.Domaine.ma.")}}};
    RRset b{name("www.domaine.ma."), RRType::MX, RRClass::IN, 60, {MxRdata{10, name("mail.domaine.ma.")}}};
    EXPECT_EQ(canonical_rrset_bytes(a, 60), canonical_rrset_bytes(b, 60));
}

TEST(CanonicalRrset, EndsWithTheAddress) {
    RRset s{name("domaine.ma."), RRType::A, RRClass::IN, 86400, {ARdata{{192, 168, 1, 3}}}};
    const auto bytes = canonical_rrset_bytes(s, 86400);
    ASSERT_GE(bytes.size(), 4u);
    EXPECT_EQ(Bytes(bytes.end() - 4, bytes.end()), (Bytes{192, 168, 1, 3}));
    // owner, type, class, ttl, rdlength, rdata
    EXPECT_EQ(bytes.size(), name("domaine.ma.").wire_length() + 10 + 4);
}

TEST(CanonicalRrset, AnyRdataOctetChangesTheOutput) {
    std::mt19937_64 rng(7);
    RRset s{name("domaine.ma."), RRType::TXT, RRClass::IN, 60, {TxtRdata{{"abcdef", "ghij"}}, TxtRdata{{"zz"}}}};
    const auto base = canonical_rrset_bytes(s, 60);
    for (int i = 0; i < 50; ++i) {
        auto m = s;
        auto &str = std::get<TxtRdata>(m.rdatas[rng() % 2]).strings.front();
        str[rng() % str.size()] ^= static_cast<char>(1 + rng() % 100);
        EXPECT_NE(canonical_rrset_bytes(m, 60), base);
    }
}

TEST(CanonicalRrset, UsesTheGivenOriginalTtl) {
    RRset s{name("domaine.ma."), RRType::A, RRClass::IN, 301, {ARdata{{192, 168, 1, 3}}}};
    RRset t = s;
    t.ttl = 86400;
    EXPECT_EQ(canonical_rrset_bytes(s, 86400), canonical_rrset_bytes(t, 86400));
}
