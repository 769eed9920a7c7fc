#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/authority.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/signer.hpp"
#include "dnsseckit/validator.hpp"
#include "fixtures.hpp"

using namespace dnsseckit;
using fixtures::name;

namespace {

const UnixTime kNow = fixtures::kNow;

RRset a_set(std::uint32_t ttl = 86400) {
    return RRset{fixtures::apex(), RRType::A, RRClass::IN, ttl, {ARdata{{192, 168, 1, 3}}}};
}

RrsigRdata sign(const RRset &s, const KeyPair &k = fixtures::zsk()) {
    return std::get<RrsigRdata>(sign_rrset(s, k, SigningPolicy{}, kNow).rdata);
}

FetchFn fetch_from(const ZoneSet &zones) {
    return [&zones](const DnsName &n, RRType t) {
        return answer_authoritative(make_query(n, t, 7, false, true), zones);
    };
}

DnsMessage ask(const ZoneSet &zones, const DnsName &n, RRType t) { return fetch_from(zones)(n, t); }

// Parent "ma." delegating domaine.ma.; `ds_from` decides which key the DS
// describes (null for an unsigned delegation).
Zone parent_zone(const DnskeyRdata *ds_from) {
    std::string text =
        "$TTL 3600\n"
        "@ SOA ns.ma. admin.ma. 1 3600 900 604800 3600\n"
        "@ NS ns.ma.\n"
        "ns A 10.0.0.2\n"
        "domaine NS ns1.domaine.ma.\n"
        "ns1.domaine A 192.168.1.1\n";
    auto z = parse_zone_file(text, name("ma."));
    auto rrs = z.records();
    if (ds_from) rrs.push_back(make_ds(fixtures::apex(), *ds_from, 2, 3600));
    const auto &zsk = fixtures::key_for(name("ma."), KeyRole::Zsk, 1024, 50);
    const auto &ksk = fixtures::key_for(name("ma."), KeyRole::Ksk, 1024, 51);
    return sign_zone(Zone(name("ma."), rrs), zsk, ksk, SigningPolicy{}, kNow).zone;
}

std::vector<TrustAnchor> parent_anchor() {
    return {make_trust_anchor(fixtures::key_for(name("ma."), KeyRole::Ksk, 1024, 51))};
}

std::vector<TrustAnchor> leaf_anchor() { return parse_trust_anchors(export_trust_anchor(fixtures::ksk())); }

// Three owners: the apex, mail and www.
const SignedZone &three_owner_zone() {
    static const SignedZone sz = [] {
        const auto z = parse_zone_file(
            "$TTL 3600\n"
            "@ SOA ns.other.example. admin 1 3600 900 604800 3600\n"
            "@ NS ns.other.example.\n"
            "mail A 192.168.1.4\n"
            "www A 192.168.1.5\n",
            fixtures::apex());
        return sign_zone(z, fixtures::zsk(), fixtures::ksk(), SigningPolicy{}, kNow);
    }();
    return sz;
}

std::vector<NsecWitness> all_witnesses(const Zone &z) { return collect_witnesses(z.records()); }

NsecWitness witness_at(const Zone &z, const DnsName &owner) {
    for (const auto &w : all_witnesses(z)) {
        if (w.nsec.owner == owner) return w;
    }
    throw std::runtime_error("no NSEC at " + owner.to_string());
}

ZoneKeys leaf_keys() { return ZoneKeys{fixtures::apex(), {fixtures::zsk().public_key, fixtures::ksk().public_key}}; }

}  // namespace

TEST(VerifyRrsig, ValidInsideTheWindow) {
    const auto s = a_set();
    const auto sig = sign(s);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), kNow), VerifyResult::Valid);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), sig.expiration), VerifyResult::Valid);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), sig.inception), VerifyResult::Valid);
}

TEST(VerifyRrsig, WindowBoundaries) {
    const auto s = a_set();
    const auto sig = sign(s);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), sig.expiration + 1ull),
              VerifyResult::Expired);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), sig.inception - 1ull),
              VerifyResult::NotYetValid);
}

TEST(VerifyRrsig, CachedTtlDecrementStillVerifies) {
    const auto sig = sign(a_set(86400));
    EXPECT_EQ(verify_rrsig(a_set(301), sig, fixtures::zsk().public_key, fixtures::apex(), kNow), VerifyResult::Valid);
}

TEST(VerifyRrsig, WrongKeyAndBadSignature) {
    const auto s = a_set();
    auto sig = sign(s);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::ksk().public_key, fixtures::apex(), kNow), VerifyResult::WrongKey);
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, name("ma."), kNow), VerifyResult::WrongKey);
    auto other = s;
    std::get<ARdata>(other.rdatas[0]).address[3] = 4;
    EXPECT_EQ(verify_rrsig(other, sig, fixtures::zsk().public_key, fixtures::apex(), kNow), VerifyResult::BadSignature);
    sig.signature.back() ^= 1;
    EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), kNow), VerifyResult::BadSignature);
}

TEST(VerifyRrsig, UnknownAlgorithmIsReported) {
    const auto s = a_set();
    auto sig = sign(s);
    auto key = fixtures::zsk().public_key;
    key.algorithm = 200;
    sig.algorithm = 200;
    sig.key_tag = compute_key_tag(key);
    EXPECT_EQ(verify_rrsig(s, sig, key, fixtures::apex(), kNow), VerifyResult::UnsupportedAlgorithm);
}

TEST(VerifyRrsig, Pure) {
    const auto s = a_set();
    const auto sig = sign(s);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(verify_rrsig(s, sig, fixtures::zsk().public_key, fixtures::apex(), kNow), VerifyResult::Valid);
    }
}

TEST(MatchDs, SourceKeyMatchesAndFlipsDoNot) {
    const auto &k = fixtures::ksk().public_key;
    const auto ds = std::get<DsRdata>(make_ds(fixtures::apex(), k, 2).rdata);
    EXPECT_TRUE(match_ds(ds, k, fixtures::apex()));
    EXPECT_TRUE(match_ds(ds, k, name("DOMAINE.ma.")));
    for (std::size_t i = 0; i < ds.digest.size(); ++i) {
        auto bad = ds;
        bad.digest[i] ^= 0x40;
        EXPECT_FALSE(match_ds(bad, k, fixtures::apex()));
    }
    auto alg = ds;
    alg.algorithm = 8;
    EXPECT_FALSE(match_ds(alg, k, fixtures::apex()));
}

TEST(MatchDs, TagCollisionIsCaughtByTheDigest) {
    const auto &k = fixtures::ksk().public_key;
    // Moving one unit between two even-offset octets keeps the checksum.
    auto twin = k;
    auto &pk = twin.public_key;
    std::size_t i = 4, j = 6;
    while (pk[i] == 0xFF) i += 2;
    while (pk[j] == 0x00) j += 2;
    ASSERT_NE(i, j);
    ++pk[i];
    --pk[j];
    ASSERT_NE(twin, k);
    ASSERT_EQ(compute_key_tag(twin), compute_key_tag(k));
    const auto ds = std::get<DsRdata>(make_ds(fixtures::apex(), k, 1).rdata);
    EXPECT_FALSE(match_ds(ds, twin, fixtures::apex()));
}

TEST(ValidateChain, SignedZoneUnderItsOwnAnchorIsSecure) {
    ZoneSet zones;
    zones.add(fixtures::signed_zone().zone);
    const auto resp = ask(zones, name("www.domaine.ma."), RRType::A);
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, leaf_anchor(), fetch_from(zones), kNow);
    EXPECT_EQ(out.status, Security::Secure) << out.detail;
    EXPECT_EQ(out.chain, (std::vector<ChainLink>{{fixtures::apex(), fixtures::ksk().key_tag}}));
}

TEST(ValidateChain, NoAnchorIsInsecure) {
    ZoneSet zones;
    zones.add(fixtures::signed_zone().zone);
    const auto resp = ask(zones, name("www.domaine.ma."), RRType::A);
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, {}, fetch_from(zones), kNow);
    EXPECT_EQ(out.status, Security::Insecure);
    EXPECT_EQ(out.reason, BogusReason::NoTrustAnchor);
}

TEST(ValidateChain, ThreeLevelTreeFromTheRoot) {
    const auto &w = fixtures::chain_world();
    const auto out = validate_chain(w.ask(name("www.domaine.ma."), RRType::A), name("www.domaine.ma."), RRType::A,
                                    w.anchors, w.fetcher(), w.now);
    EXPECT_EQ(out.status, Security::Secure) << out.detail;
    ASSERT_EQ(out.chain.size(), 3u);
    EXPECT_EQ(out.chain[0].zone, DnsName{});
    EXPECT_EQ(out.chain[1].zone, name("ma."));
    EXPECT_EQ(out.chain[2].zone, fixtures::apex());
}

TEST(ValidateChain, NegativeAnswersAreSecure) {
    const auto &w = fixtures::chain_world();
    const auto nx = w.ask(name("nope.domaine.ma."), RRType::A);
    ASSERT_EQ(nx.rcode, Rcode::NXDOMAIN);
    EXPECT_EQ(validate_chain(nx, name("nope.domaine.ma."), RRType::A, w.anchors, w.fetcher(), w.now).status,
              Security::Secure);
    const auto nodata = w.ask(name("www.domaine.ma."), RRType::MX);
    ASSERT_EQ(nodata.rcode, Rcode::NOERROR);
    ASSERT_TRUE(nodata.answers.empty());
    EXPECT_EQ(validate_chain(nodata, name("www.domaine.ma."), RRType::MX, w.anchors, w.fetcher(), w.now).status,
              Security::Secure);
}

TEST(ValidateChain, NegativeAnswerWithoutProofIsBogus) {
    const auto &w = fixtures::chain_world();
    auto nx = w.ask(name("nope.domaine.ma."), RRType::A);
    nx.authority.erase(std::remove_if(nx.authority.begin(), nx.authority.end(),
                                      [](const ResourceRecord &rr) { return covered_type(rr) == RRType::NSEC; }),
                       nx.authority.end());
    EXPECT_EQ(validate_chain(nx, name("nope.domaine.ma."), RRType::A, w.anchors, w.fetcher(), w.now).status,
              Security::Bogus);
}

TEST(ValidateChain, SwappedChildKeyIsDsMismatch) {
    const auto &stale = fixtures::key_for(fixtures::apex(), KeyRole::Ksk, 1024, 77);
    ZoneSet zones;
    zones.add(parent_zone(&stale.public_key));
    zones.add(fixtures::signed_zone().zone);  // signed by fixtures::ksk(), not the key the DS names
    const auto resp = ask(zones, name("www.domaine.ma."), RRType::A);
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, parent_anchor(), fetch_from(zones), kNow);
    EXPECT_EQ(out.status, Security::Bogus);
    EXPECT_EQ(out.reason, BogusReason::DsMismatch);
}

TEST(ValidateChain, MatchingDsIsSecureFromTheParent) {
    ZoneSet zones;
    zones.add(parent_zone(&fixtures::ksk().public_key));
    zones.add(fixtures::signed_zone().zone);
    const auto resp = ask(zones, name("www.domaine.ma."), RRType::A);
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, parent_anchor(), fetch_from(zones), kNow);
    EXPECT_EQ(out.status, Security::Secure) << out.detail;
    EXPECT_EQ(out.chain.size(), 2u);
}

TEST(ValidateChain, ProvablyUnsignedDelegationIsInsecure) {
    ZoneSet zones;
    zones.add(parent_zone(nullptr));
    zones.add(fixtures::zone());
    const auto resp = ask(zones, name("www.domaine.ma."), RRType::A);
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, parent_anchor(), fetch_from(zones), kNow);
    EXPECT_EQ(out.status, Security::Insecure);
    EXPECT_EQ(out.reason, BogusReason::NoDsAtDelegation);
}

TEST(ValidateChain, ExpiredSignaturesAreBogus) {
    const auto &w = fixtures::chain_world();
    const auto later = w.now + 60ull * 86400;
    const auto out = validate_chain(w.ask(name("www.domaine.ma."), RRType::A), name("www.domaine.ma."), RRType::A,
                                    w.anchors, w.fetcher(), later);
    EXPECT_EQ(out.status, Security::Bogus);
    EXPECT_EQ(out.reason, BogusReason::Expired);
}

TEST(ValidateChain, StrippedSignatureIsBogus) {
    const auto &w = fixtures::chain_world();
    auto resp = w.ask(name("www.domaine.ma."), RRType::A);
    resp.answers.erase(std::remove_if(resp.answers.begin(), resp.answers.end(),
                                      [](const ResourceRecord &rr) { return rr.type == RRType::RRSIG; }),
                       resp.answers.end());
    const auto out = validate_chain(resp, name("www.domaine.ma."), RRType::A, w.anchors, w.fetcher(), w.now);
    EXPECT_EQ(out.status, Security::Bogus);
    EXPECT_EQ(out.reason, BogusReason::MissingSignature);
}

TEST(ValidateChain, FetchFailuresPropagate) {
    const auto &w = fixtures::chain_world();
    FetchFn broken = [](const DnsName &, RRType) -> DnsMessage { throw Error(Errc::FetchFailure, "down"); };
    EXPECT_THROW(validate_chain(w.ask(name("www.domaine.ma."), RRType::A), name("www.domaine.ma."), RRType::A,
                                w.anchors, broken, w.now),
                 Error);
}

TEST(ValidateChain, RemovingAnchorsNeverCreatesTrust) {
    const auto &w = fixtures::chain_world();
    auto bogus_resp = w.ask(name("www.domaine.ma."), RRType::A);
    std::get<ARdata>(bogus_resp.answers[0].rdata).address[0] ^= 1;
    for (const auto &resp : {w.ask(name("www.domaine.ma."), RRType::A), bogus_resp}) {
        const auto with = validate_chain(resp, name("www.domaine.ma."), RRType::A, w.anchors, w.fetcher(), w.now);
        const auto without = validate_chain(resp, name("www.domaine.ma."), RRType::A, {}, w.fetcher(), w.now);
        EXPECT_NE(without.status, Security::Secure);
        if (with.status != Security::Secure) EXPECT_NE(without.status, Security::Secure);
    }
}

TEST(Tamper, SingleOctetMutationsNeverValidate) {
    const auto tally = fixtures::run_tamper(200, 17);
    EXPECT_EQ(tally.mutations, 200u);
    EXPECT_EQ(tally.secure, 0u);
    for (auto t : {fixtures::TamperTarget::AnswerRdata, fixtures::TamperTarget::AnswerRrsig,
                   fixtures::TamperTarget::Dnskey, fixtures::TamperTarget::Ds}) {
        EXPECT_EQ(tally.per_target.at(t), 50u);
    }
}

TEST(CheckDenial, NameBetweenOwnerAndNext) {
    const auto &z = three_owner_zone().zone;
    const auto w = witness_at(z, name("mail.domaine.ma."));
    ASSERT_EQ(std::get<NsecRdata>(w.nsec.rdata).next_name, name("www.domaine.ma."));
    const auto out = check_denial(name("ns.domaine.ma."), RRType::A, {w}, leaf_keys(), kNow);
    EXPECT_EQ(out.kind, DenialKind::NameDoesNotExist);
    ASSERT_EQ(out.witnesses.size(), 1u);
    EXPECT_EQ(out.witnesses[0].owner, name("mail.domaine.ma."));
}

TEST(CheckDenial, TypeBitAbsent) {
    const auto &z = three_owner_zone().zone;
    const auto w = witness_at(z, name("mail.domaine.ma."));
    EXPECT_EQ(std::get<NsecRdata>(w.nsec.rdata).type_bitmap,
              (std::set<RRType>{RRType::A, RRType::RRSIG, RRType::NSEC}));
    EXPECT_EQ(check_denial(name("mail.domaine.ma."), RRType::AAAA, {w}, leaf_keys(), kNow).kind,
              DenialKind::TypeDoesNotExist);
    EXPECT_EQ(check_denial(name("mail.domaine.ma."), RRType::A, {w}, leaf_keys(), kNow).kind, DenialKind::NoProof);
}

TEST(CheckDenial, WraparoundCoversNamesAfterTheLastOwner) {
    const auto &z = three_owner_zone().zone;
    const auto w = witness_at(z, name("www.domaine.ma."));
    EXPECT_EQ(check_denial(name("zzz.domaine.ma."), RRType::A, {w}, leaf_keys(), kNow).kind,
              DenialKind::NameDoesNotExist);
    EXPECT_EQ(check_denial(name("a.www.domaine.ma."), RRType::A, {w}, leaf_keys(), kNow).kind,
              DenialKind::NameDoesNotExist);
    EXPECT_EQ(check_denial(name("aaa.domaine.ma."), RRType::A, {w}, leaf_keys(), kNow).kind, DenialKind::NoProof);
}

TEST(CheckDenial, UnsignedOrForgedWitnessIsInvalid) {
    const auto &z = three_owner_zone().zone;
    auto w = witness_at(z, name("mail.domaine.ma."));
    auto forged = w;
    std::get<NsecRdata>(forged.nsec.rdata).next_name = name("zzzz.domaine.ma.");
    EXPECT_EQ(check_denial(name("www.domaine.ma."), RRType::A, {forged}, leaf_keys(), kNow).kind,
              DenialKind::InvalidProof);
    auto bare = w;
    bare.signatures.clear();
    EXPECT_EQ(check_denial(name("ns.domaine.ma."), RRType::A, {bare}, leaf_keys(), kNow).kind,
              DenialKind::InvalidProof);
    EXPECT_EQ(check_denial(name("ns.domaine.ma."), RRType::A, {}, leaf_keys(), kNow).kind, DenialKind::NoProof);
}

TEST(CheckDenial, AgreesWithMembershipOverAUniverse) {
    const auto &z = three_owner_zone().zone;
    std::set<std::string> present;
    std::map<std::string, std::set<RRType>> types;
    for (const auto &rr : z.records()) {
        present.insert(rr.owner.lowercased().to_string());
        types[rr.owner.lowercased().to_string()].insert(rr.type);
    }
    std::vector<DnsName> universe{fixtures::apex()};
    const char *labels[] = {"a", "m", "mail", "MAIL", "mailx", "n", "ns", "w", "www", "wwx", "x", "zz", "0", "-"};
    for (const auto *l : labels) {
        universe.push_back(fixtures::apex().prepend(l));
        for (const auto *top : {"mail", "www", "a"}) universe.push_back(fixtures::apex().prepend(top).prepend(l));
    }
    ASSERT_LE(universe.size(), 200u);
    const auto witnesses = all_witnesses(z);
    const RRType qtypes[] = {RRType::A, RRType::MX, RRType::AAAA, RRType::SOA};
    std::size_t checked = 0;
    for (const auto &q : universe) {
        const auto key = q.lowercased().to_string();
        const bool exists = present.count(key) > 0;
        for (auto t : qtypes) {
            const auto out = check_denial(q, t, witnesses, leaf_keys(), kNow);
            EXPECT_EQ(out.kind == DenialKind::NameDoesNotExist, !exists) << key;
            const bool type_absent = exists && !types[key].count(t);
            EXPECT_EQ(out.kind == DenialKind::TypeDoesNotExist, type_absent) << key << " " << type_to_string(t);
            ++checked;
        }
    }
    EXPECT_EQ(checked, universe.size() * 4);
}

TEST(CheckDenial, EmptyNonTerminalIsNotNxdomain) {
    auto rrs = fixtures::zone().records();
    rrs.push_back(ResourceRecord{name("a.b.domaine.ma."), RRType::A, RRClass::IN, 60, ARdata{{1, 1, 1, 1}}});
    const auto sz = sign_zone(Zone(fixtures::apex(), rrs), fixtures::zsk(), fixtures::ksk(), SigningPolicy{}, kNow);
    const auto out = check_denial(name("b.domaine.ma."), RRType::A, all_witnesses(sz.zone), leaf_keys(), kNow);
    EXPECT_EQ(out.kind, DenialKind::TypeDoesNotExist);
}
