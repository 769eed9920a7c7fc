#include "dnsseckit/attack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_set>

#include "dnsseckit/config.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/signer.hpp"

namespace dnsseckit {

std::string_view mode_name(AttackMode m) noexcept {
    return m == AttackMode::Kaminsky ? "kaminsky" : "race-spoof";
}

std::string_view placement_name(AttackerPlacement p) noexcept {
    return p == AttackerPlacement::OffPath ? "off-path" : "on-path";
}

namespace {

std::string_view port_mode_name(SourcePortMode m) noexcept {
    return m == SourcePortMode::Fixed ? "fixed" : "random";
}

constexpr UnixTime kDemoTime = 1302825600;  // 2011-04-15
constexpr const char *kAttackerAddress = "6.6.6.6";

std::uint64_t guess_space(std::uint32_t txid_space, SourcePortMode mode, std::uint32_t port_space) {
    return static_cast<std::uint64_t>(txid_space) * (mode == SourcePortMode::Random ? port_space : 1);
}

// n distinct values from [0, space), uniformly.
std::vector<std::uint64_t> sample_distinct(std::mt19937_64 &rng, std::size_t n, std::uint64_t space) {
    std::vector<std::uint64_t> out;
    out.reserve(n);
    if (n * 2 > space && space <= (1u << 24)) {
        std::vector<std::uint64_t> all(space);
        std::iota(all.begin(), all.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            std::uniform_int_distribution<std::uint64_t> pick(i, space - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        all.resize(n);
        return all;
    }
    std::unordered_set<std::uint64_t> seen;
    std::uniform_int_distribution<std::uint64_t> pick(0, space - 1);
    while (out.size() < n) {
        auto v = pick(rng);
        if (seen.insert(v).second) out.push_back(v);
    }
    return out;
}

ARdata parse_a(const std::string &text) {
    auto rrs = parse_records(". 0 IN A " + text, DnsName{});
    return std::get<ARdata>(rrs.front().rdata);
}

std::string target_text(const TargetRecord &t) {
    return t.name.to_string() + " " + std::string(type_to_string(t.type)) + " " + rdata_to_text(t.rdata);
}

TargetRecord default_target(AttackMode mode, const DemoHierarchy &h) {
    if (mode == AttackMode::Kaminsky) {
        return TargetRecord{h.target_zone, RRType::NS, NsRdata{DnsName::from_text("ns", h.target_zone)}};
    }
    return TargetRecord{DnsName::from_text("www", h.target_zone), RRType::A, parse_a(kAttackerAddress)};
}

void check_config(const AttackConfig &cfg) {
    if (cfg.query_rounds < 1) throw Error(Errc::ConfigError, "rounds must be at least 1");
    if (cfg.trials < 1) throw Error(Errc::ConfigError, "trials must be at least 1");
    if (cfg.txid_space != 65536) throw Error(Errc::ConfigError, "transaction ids are 16 bits; txid-space must be 65536");
    if (cfg.port_mode == SourcePortMode::Random && (cfg.port_space < 1 || cfg.port_space > 64512)) {
        throw Error(Errc::ConfigError, "port-space must be within 1..64512");
    }
    if (cfg.mode == AttackMode::Kaminsky && cfg.attacker != AttackerPlacement::OffPath) {
        throw Error(Errc::ConfigError, "the Kaminsky attack is run by an off-path attacker; an on-path one needs no guesses");
    }
    if (cfg.mode == AttackMode::RaceSpoof && cfg.attacker != AttackerPlacement::OnPath) {
        throw Error(Errc::ConfigError, "race spoofing needs an on-path attacker that sees the query");
    }
    if (cfg.mode == AttackMode::Kaminsky &&
        cfg.forged_per_query > guess_space(cfg.txid_space, cfg.port_mode, cfg.port_space)) {
        throw Error(Errc::ConfigError, "forged-per-query exceeds the guess space");
    }
}

DnsMessage forged_response(const DnsName &qname, RRType qtype, std::vector<ResourceRecord> answers,
                           std::vector<ResourceRecord> authority, std::vector<ResourceRecord> additional) {
    DnsMessage m;
    m.flags.qr = true;
    m.flags.aa = true;
    m.questions.push_back(Question{qname, qtype, RRClass::IN});
    m.answers = std::move(answers);
    m.authority = std::move(authority);
    m.additional = std::move(additional);
    return m;
}

}  // namespace

double analytic_success_probability(std::size_t n, std::size_t q, SourcePortMode port_mode, std::uint32_t port_space,
                                    std::uint32_t txid_space) {
    if (n == 0) return 0.0;
    const double space = static_cast<double>(guess_space(txid_space, port_mode, port_space));
    const double p1 = std::min(1.0, static_cast<double>(n) / space);
    if (p1 >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(q) * std::log1p(-p1));
}

// ---------------------------------------------------------------------------
// Demo hierarchy

std::string demo_zone_text() {
    return R"($TTL 86400
$ORIGIN domaine.ma.
@       IN SOA  ns1.domaine.ma. admin.domaine.ma. (
                2011041501 ; serial
                3600       ; refresh
                900        ; retry
                604800     ; expire
                3600 )     ; minimum
@       IN NS   ns1
@       IN NS   ns2
@       IN A    192.168.1.3
@       IN MX   10 mail
@       IN TXT  "domaine.ma test zone"
ns1     IN A    192.168.1.1
ns2     IN A    192.168.1.2
mail    IN A    192.168.1.4
www     IN A    192.168.1.5
www     IN AAAA 2001:db8::5
ftp     IN CNAME www
)";
}

namespace {

const char *kMaZone = R"($TTL 86400
ma.             IN SOA ns.ma. hostmaster.ma. 2011041500 3600 900 604800 3600
ma.             IN NS  ns.ma.
ns.ma.          IN A   10.0.0.2
domaine.ma.     IN NS  ns1.domaine.ma.
domaine.ma.     IN NS  ns2.domaine.ma.
ns1.domaine.ma. IN A   192.168.1.1
ns2.domaine.ma. IN A   192.168.1.2
)";

const char *kRootZone = R"($TTL 86400
.                  IN SOA a.root-servers.net. nstld.root-servers.net. 2011041500 1800 900 604800 86400
.                  IN NS  a.root-servers.net.
a.root-servers.net. IN A  198.41.0.4
ma.                IN NS  ns.ma.
ns.ma.             IN A   10.0.0.2
)";

struct SignedLevel {
    Zone zone;
    KeyPair ksk;
};

SignedLevel sign_level(Zone zone, unsigned bits, RandomSource &rng, const std::vector<ResourceRecord> &extra) {
    auto records = zone.records();
    records.insert(records.end(), extra.begin(), extra.end());
    Zone full(zone.apex(), std::move(records));
    auto zsk = generate_key(full.apex(), KeyRole::Zsk, 5, bits, rng, kDemoTime);
    auto ksk = generate_key(full.apex(), KeyRole::Ksk, 5, bits, rng, kDemoTime);
    auto signed_zone = sign_zone(full, zsk, ksk, SigningPolicy{}, kDemoTime);
    return SignedLevel{std::move(signed_zone.zone), std::move(ksk)};
}

std::shared_ptr<const ZoneSet> hosting(Zone zone) {
    auto set = std::make_shared<ZoneSet>();
    set->add(std::move(zone));
    return set;
}

}  // namespace

void DemoHierarchy::attach(SimulatedNetwork &network) const {
    for (const auto &[address, zones] : servers) network.add_authoritative(address, zones, true);
}

DemoHierarchy build_demo_hierarchy(unsigned key_bits, std::uint64_t key_seed) {
    SeededRandom rng(key_seed);
    const auto leaf_apex = DnsName::from_text("domaine.ma.");
    const auto ma_apex = DnsName::from_text("ma.");

    auto leaf = sign_level(parse_zone_file(demo_zone_text(), leaf_apex), key_bits, rng, {});
    auto ma = sign_level(parse_zone_file(kMaZone, ma_apex), key_bits, rng,
                         {make_ds(leaf_apex, leaf.ksk.public_key, 2)});
    auto root = sign_level(parse_zone_file(kRootZone, DnsName{}), key_bits, rng,
                           {make_ds(ma_apex, ma.ksk.public_key, 2)});

    DemoHierarchy h;
    h.now = kDemoTime;
    h.hints = RootHints::parse(". 3600000 IN NS a.root-servers.net.\na.root-servers.net. 3600000 IN A 198.41.0.4\n");
    h.anchors.push_back(make_trust_anchor(root.ksk));
    h.target_zone = leaf_apex;
    h.target_servers = {"192.168.1.1", "192.168.1.2"};
    auto leaf_set = hosting(std::move(leaf.zone));
    h.servers.emplace_back("198.41.0.4", hosting(std::move(root.zone)));
    h.servers.emplace_back("10.0.0.2", hosting(std::move(ma.zone)));
    h.servers.emplace_back("192.168.1.1", leaf_set);
    h.servers.emplace_back("192.168.1.2", leaf_set);
    return h;
}

const DemoHierarchy &demo_hierarchy(unsigned key_bits) {
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<DemoHierarchy>> built;
    std::lock_guard lock(mu);
    auto &slot = built[key_bits];
    if (!slot) slot = std::make_unique<DemoHierarchy>(build_demo_hierarchy(key_bits));
    return *slot;
}

// ---------------------------------------------------------------------------
// Running the attack

namespace {

struct Round {
    bool armed = false;
    DnsName qname;
    RRType qtype = RRType::A;
    Bytes forged;  // encoded with id 0
    std::size_t injected = 0;
};

bool is_target_server(const DemoHierarchy &h, const std::string &address) {
    return std::find(h.target_servers.begin(), h.target_servers.end(), address) != h.target_servers.end();
}

}  // namespace

AttackReport run_attack(const AttackConfig &cfg, RecursiveResolver &victim, SimulatedNetwork &network,
                        const AttackScene &scene) {
    check_config(cfg);
    const auto &h = scene.hierarchy;
    const auto target = cfg.target ? *cfg.target : default_target(cfg.mode, h);
    if (cfg.mode == AttackMode::Kaminsky) {
        if (!target.name.is_subdomain_of(h.target_zone)) {
            throw Error(Errc::ConfigError, "target " + target.name.to_string() + " is outside " + h.target_zone.to_string());
        }
        if (target.type != RRType::NS && target.type != RRType::A) {
            throw Error(Errc::ConfigError, "a Kaminsky target must be an NS or A record");
        }
    }

    AttackReport rep;
    rep.mode = cfg.mode;
    rep.attacker = cfg.attacker;
    rep.port_mode = cfg.port_mode;
    rep.port_space = cfg.port_mode == SourcePortMode::Random ? cfg.port_space : 1;
    rep.forged_per_query = cfg.forged_per_query;
    rep.rounds = cfg.query_rounds;
    rep.trials = cfg.trials;
    rep.seed = cfg.seed;
    rep.target = target_text(target);
    rep.validation_enabled = victim.options().dnssec_enabled;
    if (cfg.mode == AttackMode::Kaminsky) {
        rep.analytic_rate = analytic_success_probability(cfg.forged_per_query, cfg.query_rounds, cfg.port_mode,
                                                         cfg.port_space, cfg.txid_space);
    } else {
        rep.analytic_rate = cfg.forged_per_query > 0 ? 1.0 : 0.0;
    }

    std::mt19937_64 attacker_rng(cfg.seed);
    Round round;
    const auto now = h.now;
    const auto &vopt = scene.victim_options;

    // What the forged packets claim.
    DnsName rogue_ns = target.type == RRType::NS ? std::get<NsRdata>(target.rdata).host
                                                 : DnsName::from_text("ns", h.target_zone);
    Rdata rogue_addr = target.type == RRType::A ? target.rdata : Rdata{parse_a(kAttackerAddress)};
    if (cfg.mode == AttackMode::Kaminsky && target.type == RRType::A) rogue_ns = target.name;

    network.clear_adversaries();
    if (cfg.mode == AttackMode::Kaminsky) {
        network.add_observer([&](const PacketNotice &notice, SimulatedNetwork &net) {
            if (!round.armed || notice.source_address != scene.victim_address ||
                !is_target_server(h, notice.destination.address)) {
                return;
            }
            round.armed = false;
            const auto space = guess_space(cfg.txid_space, cfg.port_mode, cfg.port_space);
            for (auto guess : sample_distinct(attacker_rng, cfg.forged_per_query, space)) {
                const auto txid = static_cast<std::uint16_t>(guess % cfg.txid_space);
                const auto port = cfg.port_mode == SourcePortMode::Fixed
                                      ? vopt.fixed_port
                                      : static_cast<std::uint16_t>(vopt.first_random_port + guess / cfg.txid_space);
                Bytes payload = round.forged;
                payload[0] = static_cast<std::uint8_t>(txid >> 8);
                payload[1] = static_cast<std::uint8_t>(txid);
                net.inject(Packet{notice.destination, Endpoint{scene.victim_address, port}, Protocol::Udp,
                                  std::move(payload)},
                           1);
                ++round.injected;
            }
        });
    } else {
        network.add_tap([&](const Packet &packet, SimulatedNetwork &net) {
            if (!round.armed || packet.source.address != scene.victim_address) return;
            DnsMessage q;
            try {
                q = decode_message(packet.payload);
            } catch (const Error &) {
                return;
            }
            if (q.flags.qr || q.questions.size() != 1 || !(q.questions.front().name == round.qname) ||
                q.questions.front().type != round.qtype) {
                return;
            }
            round.armed = false;
            Bytes payload = round.forged;
            payload[0] = static_cast<std::uint8_t>(q.id >> 8);
            payload[1] = static_cast<std::uint8_t>(q.id);
            for (std::size_t i = 0; i < cfg.forged_per_query; ++i) {
                net.inject(Packet{packet.destination, packet.source, packet.protocol, payload}, 1);
                ++round.injected;
            }
        });
    }

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
        victim.reset_caches();
        for (std::size_t r = 0; r < cfg.query_rounds; ++r) {
            if (cfg.mode == AttackMode::Kaminsky) {
                // A fresh name each round, so nothing cached stands in the way.
                round.qname = DnsName::from_text("x" + std::to_string(trial) + "-" + std::to_string(r), h.target_zone);
                round.qtype = RRType::A;
                round.forged = encode_message(forged_response(
                    round.qname, RRType::A, {ResourceRecord{round.qname, RRType::A, RRClass::IN, 300, rogue_addr}},
                    {ResourceRecord{h.target_zone, RRType::NS, RRClass::IN, 86400, NsRdata{rogue_ns}}},
                    {ResourceRecord{rogue_ns, RRType::A, RRClass::IN, 86400, rogue_addr}}));
            } else {
                victim.reset_caches();
                round.qname = target.name;
                round.qtype = target.type;
                round.forged = encode_message(forged_response(
                    target.name, target.type, {ResourceRecord{target.name, target.type, RRClass::IN, 300, target.rdata}},
                    {}, {}));
            }
            round.armed = true;
            const auto id = static_cast<std::uint16_t>(attacker_rng() & 0xffff);
            auto answer = victim.resolve(make_query(round.qname, round.qtype, id, true), now);
            round.armed = false;
            ++rep.rounds_run;
            if (answer.rcode == Rcode::SERVFAIL) ++rep.victim_servfails;

            const bool hit = victim.cache().contains(target.name, target.type, target.rdata, now);
            const bool any_forged =
                hit || (cfg.mode == AttackMode::Kaminsky &&
                        (victim.cache().contains(round.qname, RRType::A, rogue_addr, now) ||
                         victim.cache().contains(rogue_ns, RRType::A, rogue_addr, now)));
            if (rep.validation_enabled && any_forged) ++rep.forged_accepted_post_validation;
            if (hit) {
                ++rep.successes;
                break;
            }
        }
    }
    rep.forged_packets = round.injected;
    network.clear_adversaries();
    rep.empirical_rate = static_cast<double>(rep.successes) / static_cast<double>(cfg.trials);
    return rep;
}

AttackReport run_attack(const AttackConfig &cfg) {
    check_config(cfg);
    const auto &h = demo_hierarchy(cfg.key_bits);
    SimulatedNetwork network(cfg.seed);
    h.attach(network);
    const std::string victim_address = "192.0.2.53";
    SimulatedTransport transport(network, victim_address);

    ResolverOptions opts;
    opts.dnssec_enabled = cfg.validation;
    if (cfg.validation) opts.anchors = h.anchors;
    opts.iterative.port_mode = cfg.port_mode;
    opts.iterative.port_space = cfg.port_space;
    SeededRandom victim_rng(cfg.seed * 0x9e3779b97f4a7c15ULL + 1);
    RecursiveResolver victim(h.hints, transport, opts, victim_rng);
    return run_attack(cfg, victim, network, AttackScene{h, victim_address, victim.options().iterative});
}

// ---------------------------------------------------------------------------
// Config and reports

namespace {

[[noreturn]] void bad(const ConfigStatement &s, const std::string &what) {
    throw Error(Errc::ConfigError, "line " + std::to_string(s.line) + ": " + what);
}

}  // namespace

AttackConfig parse_attack_config(std::string_view text) {
    auto statements = parse_config_statements(text);
    if (statements.size() == 1 && statements.front().keyword == "attack") {
        statements = statements.front().block;
    }
    AttackConfig cfg;
    std::optional<AttackerPlacement> placement;
    for (const auto &s : statements) {
        if (!s.block.empty()) bad(s, "'" + s.keyword + "' does not take a block");
        if (s.keyword == "mode") {
            const auto &v = config_single(s);
            if (v == "kaminsky") {
                cfg.mode = AttackMode::Kaminsky;
            } else if (v == "race-spoof") {
                cfg.mode = AttackMode::RaceSpoof;
            } else {
                bad(s, "mode must be kaminsky or race-spoof, got '" + v + "'");
            }
        } else if (s.keyword == "attacker") {
            const auto &v = config_single(s);
            if (v == "off-path") {
                placement = AttackerPlacement::OffPath;
            } else if (v == "on-path") {
                placement = AttackerPlacement::OnPath;
            } else {
                bad(s, "attacker must be on-path or off-path, got '" + v + "'");
            }
        } else if (s.keyword == "forged-per-query") {
            cfg.forged_per_query = config_number(s, 1u << 28);
        } else if (s.keyword == "rounds") {
            cfg.query_rounds = config_number(s, 1000000);
        } else if (s.keyword == "trials") {
            cfg.trials = config_number(s, 1000000);
        } else if (s.keyword == "txid-space") {
            cfg.txid_space = static_cast<std::uint32_t>(config_number(s, 65536));
        } else if (s.keyword == "source-port") {
            const auto &v = config_single(s);
            if (v == "fixed") {
                cfg.port_mode = SourcePortMode::Fixed;
            } else if (v == "random") {
                cfg.port_mode = SourcePortMode::Random;
            } else {
                bad(s, "source-port must be fixed or random, got '" + v + "'");
            }
        } else if (s.keyword == "port-space") {
            cfg.port_space = static_cast<std::uint32_t>(config_number(s, 64512));
        } else if (s.keyword == "validation") {
            cfg.validation = config_bool(s);
        } else if (s.keyword == "seed") {
            cfg.seed = config_number(s, UINT64_MAX);
        } else if (s.keyword == "key-bits") {
            cfg.key_bits = static_cast<unsigned>(config_number(s, kMaxRsaBits));
        } else if (s.keyword == "target") {
            if (s.args.size() < 3) bad(s, "target needs: name type rdata");
            std::string line = s.args[0] + " 0 IN";
            for (std::size_t i = 1; i < s.args.size(); ++i) line += " " + s.args[i];
            std::vector<ResourceRecord> rrs;
            try {
                rrs = parse_records(line, DnsName{});
            } catch (const std::exception &e) {
                bad(s, std::string("bad target record: ") + e.what());
            }
            if (rrs.size() != 1) bad(s, "target must be a single record");
            cfg.target = TargetRecord{rrs.front().owner, rrs.front().type, rrs.front().rdata};
        } else {
            bad(s, "unknown option '" + s.keyword + "'");
        }
    }
    cfg.attacker = placement.value_or(cfg.mode == AttackMode::Kaminsky ? AttackerPlacement::OffPath
                                                                       : AttackerPlacement::OnPath);
    check_config(cfg);
    return cfg;
}

AttackConfig load_attack_config(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_attack_config(ss.str());
}

namespace {

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

std::string format_attack_report(const AttackReport &r) {
    std::ostringstream o;
    o << "Attack: " << mode_name(r.mode) << " by an " << placement_name(r.attacker) << " attacker\n";
    o << "Target record: " << r.target << "\n";
    o << "Source port: " << port_mode_name(r.port_mode);
    if (r.port_mode == SourcePortMode::Random) o << " over " << r.port_space << " ports";
    o << "\n";
    o << "Victim validation: " << (r.validation_enabled ? "enabled" : "disabled") << "\n";
    o << "Forged responses per query: " << r.forged_per_query << "\n";
    o << "Rounds per campaign: " << r.rounds << ", campaigns: " << r.trials << ", seed " << r.seed << "\n";
    o << "Victim queries triggered: " << r.rounds_run << " (" << r.victim_servfails << " answered SERVFAIL)\n";
    o << "Forged packets sent: " << r.forged_packets << "\n";
    o << "Poisoned campaigns: " << r.successes << " of " << r.trials << "\n";
    o << "Empirical success rate: " << fixed6(r.empirical_rate) << "\n";
    o << "Analytic success rate: " << fixed6(r.analytic_rate) << "\n";
    if (r.validation_enabled) {
        o << "Forged records accepted despite validation: " << r.forged_accepted_post_validation << "\n";
    }
    return o.str();
}

std::string attack_report_kv(const AttackReport &r) {
    std::ostringstream o;
    o << "mode=" << mode_name(r.mode) << "\n";
    o << "attacker=" << placement_name(r.attacker) << "\n";
    o << "target=" << r.target << "\n";
    o << "port_mode=" << port_mode_name(r.port_mode) << "\n";
    o << "port_space=" << r.port_space << "\n";
    o << "forged_per_query=" << r.forged_per_query << "\n";
    o << "rounds=" << r.rounds << "\n";
    o << "trials=" << r.trials << "\n";
    o << "seed=" << r.seed << "\n";
    o << "rounds_run=" << r.rounds_run << "\n";
    o << "victim_servfails=" << r.victim_servfails << "\n";
    o << "forged_packets=" << r.forged_packets << "\n";
    o << "successes=" << r.successes << "\n";
    o << "empirical_rate=" << fixed6(r.empirical_rate) << "\n";
    o << "analytic_rate=" << fixed6(r.analytic_rate) << "\n";
    o << "validation_enabled=" << (r.validation_enabled ? 1 : 0) << "\n";
    o << "forged_accepted_post_validation=" << r.forged_accepted_post_validation << "\n";
    return o.str();
}

}  // namespace dnsseckit
