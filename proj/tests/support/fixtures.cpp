#include "fixtures.hpp"

#include "dnsseckit/error.hpp"

#include <unistd.h>

#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

namespace fixtures {

DnsName apex() { return name("domaine.ma."); }

Zone zone() { return parse_zone_file(demo_zone_text(), apex()); }

const KeyPair &key_for(const DnsName &z, KeyRole role, unsigned bits, std::uint64_t seed) {
    static std::mutex mu;
    static std::map<std::tuple<std::string, int, unsigned, std::uint64_t>, KeyPair> cache;
    std::lock_guard lock(mu);
    auto k = std::make_tuple(z.lowercased().to_string(), static_cast<int>(role), bits, seed);
    auto it = cache.find(k);
    if (it == cache.end()) {
        SeededRandom rng(seed);
        it = cache.emplace(k, generate_key(z, role, 5, bits, rng, kNow)).first;
    }
    return it->second;
}

const KeyPair &zsk() { return key_for(apex(), KeyRole::Zsk, 1024, 42); }
const KeyPair &ksk() { return key_for(apex(), KeyRole::Ksk, 1024, 43); }

const SignedZone &signed_zone() {
    static const SignedZone sz = sign_zone(zone(), zsk(), ksk(), SigningPolicy{}, kNow);
    return sz;
}

Zone zone_with_owners(std::size_t extra) {
    auto base = zone();
    std::vector<ResourceRecord> records{base.soa_record()};
    for (std::size_t i = 0; i < extra; ++i) {
        records.push_back(ResourceRecord{apex().prepend("h" + std::to_string(i)), RRType::A, RRClass::IN, 3600,
                                         ARdata{{10, 0, static_cast<std::uint8_t>(i / 256),
                                                 static_cast<std::uint8_t>(i % 256)}}});
    }
    return Zone(apex(), std::move(records));
}

DnsName random_name(std::mt19937_64 &rng, std::size_t max_labels) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_";
    std::uniform_int_distribution<std::size_t> count(0, max_labels), len(1, 12), pick(0, alphabet.size() - 1);
    std::vector<std::string> labels(count(rng));
    for (auto &l : labels) {
        const auto n = len(rng);
        for (std::size_t i = 0; i < n; ++i) l.push_back(alphabet[pick(rng)]);
    }
    return DnsName(std::move(labels));
}

namespace {

Rdata random_rdata(std::mt19937_64 &rng, RRType type) {
    auto byte = [&] { return static_cast<std::uint8_t>(rng()); };
    auto blob = [&](std::size_t lo, std::size_t hi) {
        Bytes b(std::uniform_int_distribution<std::size_t>(lo, hi)(rng));
        for (auto &x : b) x = byte();
        return b;
    };
    switch (type) {
    case RRType::A: return ARdata{{byte(), byte(), byte(), byte()}};
    case RRType::AAAA: {
        AaaaRdata a;
        for (auto &x : a.address) x = byte();
        return a;
    }
    case RRType::NS: return NsRdata{random_name(rng)};
    case RRType::CNAME: return CnameRdata{random_name(rng)};
    case RRType::SOA:
        return SoaRdata{random_name(rng), random_name(rng), static_cast<std::uint32_t>(rng()),
                        static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()),
                        static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    case RRType::MX: return MxRdata{static_cast<std::uint16_t>(rng()), random_name(rng)};
    case RRType::TXT: {
        TxtRdata t;
        const auto n = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int i = 0; i < n; ++i) {
            auto b = blob(0, 40);
            t.strings.emplace_back(b.begin(), b.end());
        }
        return t;
    }
    case RRType::DNSKEY:
        return DnskeyRdata{rng() % 2 ? kZskFlags : kKskFlags, 3, 5, blob(4, 140)};
    case RRType::RRSIG:
        return RrsigRdata{RRType::A,         5, static_cast<std::uint8_t>(rng() % 5),
                          static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng()),
                          static_cast<std::uint32_t>(rng()), static_cast<std::uint16_t>(rng()),
                          random_name(rng), blob(1, 128)};
    case RRType::NSEC: {
        NsecRdata n{random_name(rng), {}};
        const RRType pool[] = {RRType::A, RRType::NS, RRType::SOA, RRType::MX, RRType::TXT, RRType::AAAA,
                               RRType::RRSIG, RRType::NSEC, RRType::DNSKEY, static_cast<RRType>(1234)};
        for (auto t : pool) {
            if (rng() % 2) n.type_bitmap.insert(t);
        }
        return n;
    }
    case RRType::DS: {
        const bool sha256 = rng() % 2;
        Bytes d(sha256 ? 32 : 20);
        for (auto &x : d) x = byte();
        return DsRdata{static_cast<std::uint16_t>(rng()), 5, static_cast<std::uint8_t>(sha256 ? 2 : 1), d};
    }
    default: return OpaqueRdata{blob(0, 30)};
    }
}

}  // namespace

DnsMessage random_message(std::mt19937_64 &rng) {
    static const RRType types[] = {RRType::A,     RRType::AAAA,  RRType::NS,   RRType::CNAME,
                                   RRType::SOA,   RRType::MX,    RRType::TXT,  RRType::DNSKEY,
                                   RRType::RRSIG, RRType::NSEC,  RRType::DS,   static_cast<RRType>(99)};
    auto coin = [&] { return rng() % 2 == 1; };
    DnsMessage m;
    m.id = static_cast<std::uint16_t>(rng());
    m.opcode = 0;
    m.flags = HeaderFlags{coin(), coin(), coin(), coin(), coin(), coin(), coin()};
    const Rcode rcodes[] = {Rcode::NOERROR, Rcode::FORMERR, Rcode::SERVFAIL, Rcode::NXDOMAIN, Rcode::REFUSED};
    m.rcode = rcodes[rng() % 5];
    // Names drawn from a small pool so compression has suffixes to reuse.
    std::vector<DnsName> pool;
    for (int i = 0; i < 4; ++i) pool.push_back(random_name(rng, 3));
    auto owner = [&] {
        auto base = pool[rng() % pool.size()];
        return coin() ? base : base.prepend("x" + std::to_string(rng() % 5));
    };
    const auto nq = rng() % 3;
    for (std::size_t i = 0; i < nq; ++i) m.questions.push_back(Question{owner(), types[rng() % 12], RRClass::IN});
    auto section = [&](std::vector<ResourceRecord> &out) {
        const auto n = rng() % 5;
        for (std::size_t i = 0; i < n; ++i) {
            const auto t = types[rng() % 12];
            out.push_back(ResourceRecord{owner(), t, RRClass::IN, static_cast<std::uint32_t>(rng() % 2000000),
                                         random_rdata(rng, t)});
        }
    };
    section(m.answers);
    section(m.authority);
    section(m.additional);
    if (coin()) m.edns = Edns{0, coin(), static_cast<std::uint16_t>(512 + rng() % 4000)};
    return m;
}

DnsMessage ChainWorld::ask(const DnsName &qname, RRType qtype) const {
    return answer_authoritative(make_query(qname, qtype, 1, false, true), zones);
}

FetchFn ChainWorld::fetcher() const {
    return [this](const DnsName &n, RRType t) { return ask(n, t); };
}

const ChainWorld &chain_world() {
    static const ChainWorld world = [] {
        const auto &h = demo_hierarchy(1024);
        ChainWorld w;
        std::set<std::string> added;
        for (const auto &[address, set] : h.servers) {
            for (const auto &hz : set->zones()) {
                if (added.insert(hz->apex().to_string()).second) w.zones.add(hz->zone());
            }
        }
        w.anchors = h.anchors;
        w.now = h.now;
        return w;
    }();
    return world;
}

std::string_view tamper_target_name(TamperTarget t) {
    switch (t) {
    case TamperTarget::AnswerRdata: return "answer-rdata";
    case TamperTarget::AnswerRrsig: return "answer-rrsig";
    case TamperTarget::Dnskey: return "dnskey";
    case TamperTarget::Ds: return "ds";
    }
    return "?";
}

namespace {

// Flips one octet of one record of `type` in `section`. False when the
// draw has to be repeated.
bool mutate_one(std::vector<ResourceRecord> &section, RRType type, std::mt19937_64 &rng) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < section.size(); ++i) {
        if (section[i].type == type) idx.push_back(i);
    }
    if (idx.empty()) return false;
    auto &rr = section[idx[rng() % idx.size()]];
    auto wire = rdata_to_wire(rr.rdata);
    if (wire.empty()) return false;
    wire[rng() % wire.size()] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    Rdata changed;
    try {
        changed = rdata_from_wire(rr.type, wire);
    } catch (const Error &) {
        return false;
    }
    if (changed == rr.rdata) return false;
    rr.rdata = std::move(changed);
    return true;
}

}  // namespace

TamperTally run_tamper(std::size_t mutations, std::uint64_t seed) {
    const auto &w = chain_world();
    const auto qname = name("www.domaine.ma.");
    const auto clean = w.ask(qname, RRType::A);
    const std::vector<DnsName> dnskey_zones{DnsName{}, name("ma."), name("domaine.ma.")};
    const std::vector<DnsName> ds_owners{name("ma."), name("domaine.ma.")};
    std::mt19937_64 rng(seed);
    TamperTally tally;
    static const TamperTarget order[] = {TamperTarget::AnswerRdata, TamperTarget::AnswerRrsig, TamperTarget::Dnskey,
                                         TamperTarget::Ds};
    while (tally.mutations < mutations) {
        const auto target = order[tally.mutations % 4];
        auto response = clean;
        std::optional<std::pair<DnsName, RRType>> hit;
        DnsMessage forged;
        bool ok = false;
        switch (target) {
        case TamperTarget::AnswerRdata: ok = mutate_one(response.answers, RRType::A, rng); break;
        case TamperTarget::AnswerRrsig: ok = mutate_one(response.answers, RRType::RRSIG, rng); break;
        case TamperTarget::Dnskey:
        case TamperTarget::Ds: {
            const auto type = target == TamperTarget::Dnskey ? RRType::DNSKEY : RRType::DS;
            const auto &owners = target == TamperTarget::Dnskey ? dnskey_zones : ds_owners;
            hit.emplace(owners[rng() % owners.size()], type);
            forged = w.ask(hit->first, type);
            ok = mutate_one(forged.answers, type, rng);
            break;
        }
        }
        if (!ok) {
            ++tally.redrawn;
            continue;
        }
        FetchFn fetch = [&](const DnsName &n, RRType t) {
            if (hit && t == hit->second && n == hit->first) return forged;
            return w.ask(n, t);
        };
        const auto outcome = validate_chain(response, qname, RRType::A, w.anchors, fetch, w.now);
        ++tally.mutations;
        ++tally.per_target[target];
        if (outcome.status == Security::Secure) ++tally.secure;
        ++tally.outcomes[std::string(security_name(outcome.status)) + "/" + std::string(reason_name(outcome.reason))];
    }
    return tally;
}

TempDir::TempDir() {
    auto base = std::filesystem::temp_directory_path();
    static std::mutex mu;
    static unsigned counter = 0;
    std::lock_guard lock(mu);
    for (;;) {
        auto candidate = base / ("dnsseckit-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        if (std::filesystem::create_directory(candidate)) {
            path_ = candidate;
            return;
        }
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path &path, std::string_view text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << text;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace fixtures
