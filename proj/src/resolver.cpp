#include "dnsseckit/resolver.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dnsseckit/error.hpp"
#include "dnsseckit/zone.hpp"

namespace dnsseckit {

RootHints RootHints::parse(std::string_view text) {
    ZoneParseOptions opts;
    opts.default_ttl = 3600000;
    auto records = parse_records(text, DnsName{}, opts);
    RootHints hints;
    for (const auto &rr : records) {
        if (rr.type != RRType::NS) continue;
        const auto &host = std::get<NsRdata>(rr.rdata).host;
        for (const auto &a : records) {
            if (a.type == RRType::A && a.owner == host) {
                const auto &addr = std::get<ARdata>(a.rdata).address;
                hints.servers.push_back(RootHint{host, std::to_string(addr[0]) + "." + std::to_string(addr[1]) +
                                                           "." + std::to_string(addr[2]) + "." +
                                                           std::to_string(addr[3])});
            }
        }
    }
    if (hints.servers.empty()) throw Error(Errc::ConfigError, "root hints list no reachable name server");
    return hints;
}

RootHints RootHints::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open root hints " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void DelegationCache::put(const DnsName &zone, std::vector<std::string> addresses) {
    if (addresses.empty()) return;
    std::lock_guard lock(mu_);
    cuts_[zone] = std::move(addresses);
}

std::optional<std::pair<DnsName, std::vector<std::string>>> DelegationCache::closest(const DnsName &name) const {
    std::lock_guard lock(mu_);
    std::optional<std::pair<DnsName, std::vector<std::string>>> best;
    for (const auto &[zone, addrs] : cuts_) {
        if (name.is_subdomain_of(zone) && (!best || zone.label_count() > best->first.label_count())) {
            best = std::make_pair(zone, addrs);
        }
    }
    return best;
}

void DelegationCache::clear() {
    std::lock_guard lock(mu_);
    cuts_.clear();
}

namespace {

std::string address_text(const Rdata &rd) {
    if (const auto *a = std::get_if<ARdata>(&rd)) {
        return std::to_string(a->address[0]) + "." + std::to_string(a->address[1]) + "." +
               std::to_string(a->address[2]) + "." + std::to_string(a->address[3]);
    }
    return {};
}

struct Walker {
    const RootHints &hints;
    Transport &transport;
    const IterativeOptions &opts;
    RandomSource &rng;
    IterativeStats &stats;
    DelegationCache *delegations;
    std::size_t hops = 0;

    std::uint16_t source_port() {
        if (opts.port_mode == SourcePortMode::Fixed) return opts.fixed_port;
        return static_cast<std::uint16_t>(opts.first_random_port + rng.uniform(opts.port_space));
    }

    DnsMessage ask(const std::string &address, const DnsName &qname, RRType qtype, Protocol protocol) {
        auto query = make_query(qname, qtype, static_cast<std::uint16_t>(rng.uniform(65536)), false, opts.dnssec_ok,
                                opts.udp_payload);
        ExchangeRequest req{query, Endpoint{address, opts.server_port},
                            protocol == Protocol::Udp ? source_port() : std::uint16_t{0}, protocol, opts.timeout};
        ++stats.transactions;
        return transport.exchange(req, [&](const DnsMessage &m) { return matches_query(query, m); });
    }

    DnsMessage query_servers(const std::vector<std::string> &servers, const DnsName &qname, RRType qtype) {
        bool answered = false;
        std::string last_error;
        for (const auto &address : servers) {
            DnsMessage resp;
            try {
                resp = ask(address, qname, qtype, Protocol::Udp);
                if (resp.flags.tc) {
                    ++stats.tcp_retries;
                    resp = ask(address, qname, qtype, Protocol::Tcp);
                }
            } catch (const Error &e) {
                if (e.code() != Errc::Timeout && e.code() != Errc::SocketError) throw;
                last_error = e.what();
                continue;  // fail over to the next listed address
            }
            answered = true;
            if (resp.rcode == Rcode::SERVFAIL || resp.rcode == Rcode::REFUSED || resp.rcode == Rcode::FORMERR ||
                resp.rcode == Rcode::NOTIMP) {
                last_error = "server " + address + " answered " + rcode_to_string(resp.rcode);
                continue;
            }
            return resp;
        }
        if (!answered) throw Error(Errc::Timeout, last_error.empty() ? "no servers to ask" : last_error);
        throw Error(Errc::ServFail, last_error);
    }

    DnsMessage resolve(const DnsName &qname, RRType qtype, DnsName *answered_zone, int depth) {
        if (depth > 8) throw Error(Errc::HopLimitExceeded, "resolution nested too deeply");
        DnsName zone;
        std::vector<std::string> servers;
        // DS lives on the parent side of a cut, so start above it.
        const bool parent_side = qtype == RRType::DS && !qname.is_root();
        const DnsName lookup = parent_side ? qname.parent() : qname;
        if (auto known = delegations ? delegations->closest(lookup) : std::nullopt) {
            zone = known->first;
            servers = known->second;
        } else {
            for (const auto &h : hints.servers) servers.push_back(h.address);
        }

        for (;;) {
            if (++hops > opts.hop_limit) {
                throw Error(Errc::HopLimitExceeded, "gave up on " + qname.to_string() + " after " +
                                                        std::to_string(opts.hop_limit) + " referrals");
            }
            auto resp = query_servers(servers, qname, qtype);
            if (answered_zone) *answered_zone = zone;

            if (resp.rcode == Rcode::NXDOMAIN || resp.flags.aa || !resp.answers.empty()) {
                chase_cname(resp, qname, qtype, depth);
                return resp;
            }

            // Referral: the deepest NS set in authority that encloses qname.
            std::optional<DnsName> child;
            std::vector<DnsName> hosts;
            for (const auto &rr : resp.authority) {
                if (rr.type != RRType::NS || !qname.is_subdomain_of(rr.owner)) continue;
                if (parent_side && rr.owner == qname) continue;
                if (!rr.owner.is_subdomain_of(zone)) continue;  // out of bailiwick
                if (!child || rr.owner.label_count() > child->label_count()) {
                    child = rr.owner;
                    hosts.clear();
                }
                if (rr.owner == *child) hosts.push_back(std::get<NsRdata>(rr.rdata).host);
            }
            if (!child) return resp;  // NODATA from a non-authoritative server

            std::vector<std::string> next;
            for (const auto &host : hosts) {
                for (const auto &rr : resp.additional) {
                    if (rr.type == RRType::A && rr.owner == host) next.push_back(address_text(rr.rdata));
                }
            }
            if (next.empty()) {
                for (const auto &host : hosts) {
                    try {
                        auto addr = resolve(host, RRType::A, nullptr, depth + 1);
                        for (const auto &rr : addr.answers) {
                            if (rr.type == RRType::A) next.push_back(address_text(rr.rdata));
                        }
                    } catch (const Error &e) {
                        if (e.code() == Errc::HopLimitExceeded) throw;
                    }
                    if (!next.empty()) break;
                }
            }
            if (next.empty()) throw Error(Errc::ServFail, "no usable address for the servers of " + child->to_string());
            if (delegations) delegations->put(*child, next);
            zone = *child;
            servers = std::move(next);
        }
    }

    void chase_cname(DnsMessage &resp, const DnsName &qname, RRType qtype, int depth) {
        if (qtype == RRType::CNAME || qtype == RRType::ANY || resp.rcode != Rcode::NOERROR) return;
        DnsName name = qname;
        for (int i = 0; i < 8; ++i) {
            bool has_final = false;
            std::optional<DnsName> target;
            for (const auto &rr : resp.answers) {
                if (!(rr.owner == name)) continue;
                if (rr.type == qtype) has_final = true;
                if (rr.type == RRType::CNAME) target = std::get<CnameRdata>(rr.rdata).target;
            }
            if (has_final || !target) return;
            const bool present = std::any_of(resp.answers.begin(), resp.answers.end(),
                                             [&](const ResourceRecord &rr) { return rr.owner == *target; });
            if (!present) {
                auto more = resolve(*target, qtype, nullptr, depth + 1);
                resp.answers.insert(resp.answers.end(), more.answers.begin(), more.answers.end());
                if (more.rcode == Rcode::NXDOMAIN) resp.rcode = Rcode::NXDOMAIN;
            }
            name = *target;
        }
    }
};

}  // namespace

DnsMessage resolve_iterative(const DnsName &qname, RRType qtype, const RootHints &hints, Transport &transport,
                             const IterativeOptions &options, RandomSource *rng, IterativeStats *stats,
                             DelegationCache *delegations, DnsName *answered_zone) {
    SystemRandom system;
    IterativeStats local;
    Walker w{hints, transport, options, rng ? *rng : system, stats ? *stats : local, delegations};
    return w.resolve(qname, qtype, answered_zone, 0);
}

std::uint32_t negative_ttl(const DnsMessage &response, std::uint32_t cap) {
    for (const auto &rr : response.authority) {
        if (rr.type == RRType::SOA) return std::min({std::get<SoaRdata>(rr.rdata).minimum, rr.ttl, cap});
    }
    return 0;
}

RecursiveResolver::RecursiveResolver(RootHints hints, Transport &transport, ResolverOptions options,
                                     RandomSource &rng)
    : hints_(std::move(hints)),
      transport_(transport),
      options_(std::move(options)),
      rng_(rng),
      cache_(options_.cache_capacity) {
    if (options_.dnssec_enabled) options_.iterative.dnssec_ok = true;
}

void RecursiveResolver::reset_caches() {
    cache_.clear();
    delegations_.clear();
    key_fetches_.clear();
}

namespace {

std::vector<ResourceRecord> strip_dnssec(const std::vector<ResourceRecord> &records, RRType qtype) {
    std::vector<ResourceRecord> out;
    for (const auto &rr : records) {
        if (is_dnssec_type(rr.type) && rr.type != qtype) continue;
        out.push_back(rr);
    }
    return out;
}

}  // namespace

DnsMessage RecursiveResolver::from_cache(const DnsMessage &query, const CacheEntry &entry) const {
    auto resp = make_response(query);
    resp.flags.ra = true;
    resp.rcode = entry.rcode;
    const auto qtype = query.questions.front().type;
    const bool dnssec = query.dnssec_ok();
    resp.answers = dnssec ? entry.records : strip_dnssec(entry.records, qtype);
    resp.authority = dnssec ? entry.authority : strip_dnssec(entry.authority, qtype);
    resp.flags.ad = entry.security == Security::Secure;
    return resp;
}

DnsMessage RecursiveResolver::fetch_for_validation(const DnsName &name, RRType type) {
    auto key = std::make_pair(name.lowercased().to_string(), static_cast<int>(type));
    if (auto it = key_fetches_.find(key); it != key_fetches_.end()) return it->second;
    IterativeStats stats;
    DnsMessage resp;
    try {
        resp = resolve_iterative(name, type, hints_, transport_, options_.iterative, &rng_, &stats, &delegations_);
    } catch (const Error &e) {
        transactions_ += stats.transactions;
        throw Error(Errc::FetchFailure, std::string("fetching ") + type_to_string(type) + " " + name.to_string() +
                                            ": " + e.what());
    }
    transactions_ += stats.transactions;
    key_fetches_.emplace(key, resp);
    return resp;
}

void RecursiveResolver::cache_referral_data(const DnsMessage &response, const DnsName &zone, UnixTime now) {
    // What an unvalidating resolver keeps from an in-bailiwick answer: the
    // authority NS set and glue, which is the channel Kaminsky poisoning
    // rides on.
    std::map<DnsName, std::vector<std::string>> glue;
    for (const auto &set : rrsets_from_records(response.authority)) {
        if (set.type != RRType::NS || !set.owner.is_subdomain_of(zone)) continue;
        CacheEntry e{CacheKey{set.owner, RRType::NS, set.rclass}, Rcode::NOERROR, set.records(), {}, 0, 0,
                     Security::Insecure};
        cache_.put(std::move(e), set.ttl, now);
        glue[set.owner];
    }
    for (const auto &set : rrsets_from_records(response.additional)) {
        if ((set.type != RRType::A && set.type != RRType::AAAA) || !set.owner.is_subdomain_of(zone)) continue;
        CacheEntry e{CacheKey{set.owner, set.type, set.rclass}, Rcode::NOERROR, set.records(), {}, 0, 0,
                     Security::Insecure};
        cache_.put(std::move(e), set.ttl, now);
    }
    for (auto &[cut, addrs] : glue) {
        for (const auto &rr : response.authority) {
            if (rr.type != RRType::NS || !(rr.owner == cut)) continue;
            const auto &host = std::get<NsRdata>(rr.rdata).host;
            for (const auto &a : response.additional) {
                if (a.type == RRType::A && a.owner == host) addrs.push_back(address_text(a.rdata));
            }
        }
        delegations_.put(cut, addrs);
    }
}

DnsMessage RecursiveResolver::resolve(const DnsMessage &query, UnixTime now) {
    auto resp = make_response(query);
    resp.flags.ra = true;
    if (query.questions.size() != 1) {
        resp.rcode = Rcode::FORMERR;
        return resp;
    }
    const auto &q = query.questions.front();
    const CacheKey key{q.name, q.type, q.qclass};
    if (auto hit = cache_.get(key, now)) return from_cache(query, *hit);

    IterativeStats stats;
    DnsName zone;
    DnsMessage upstream;
    try {
        upstream = resolve_iterative(q.name, q.type, hints_, transport_, options_.iterative, &rng_, &stats,
                                     &delegations_, &zone);
    } catch (const Error &) {
        transactions_ += stats.transactions;
        resp.rcode = Rcode::SERVFAIL;
        return resp;
    }
    transactions_ += stats.transactions;

    Security security = Security::Insecure;
    last_validation_ = ValidationOutcome{Security::Insecure, BogusReason::None, {}, "validation disabled"};
    if (options_.dnssec_enabled) {
        try {
            last_validation_ = validate_chain(
                upstream, q.name, q.type, options_.anchors,
                [this](const DnsName &n, RRType t) { return fetch_for_validation(n, t); }, now);
        } catch (const Error &e) {
            last_validation_ = ValidationOutcome{Security::Bogus, BogusReason::None, {}, e.what()};
        }
        if (last_validation_.status == Security::Bogus) {
            resp.rcode = Rcode::SERVFAIL;
            return resp;
        }
        security = last_validation_.status;
    }

    CacheEntry entry;
    entry.key = key;
    entry.rcode = upstream.rcode;
    entry.records = upstream.answers;
    entry.security = security;
    std::uint32_t ttl = 0;
    if (!upstream.answers.empty()) {
        ttl = UINT32_MAX;
        for (const auto &rr : upstream.answers) ttl = std::min(ttl, rr.ttl);
    } else {
        entry.authority = upstream.authority;
        ttl = negative_ttl(upstream, options_.negative_ttl_cap);
    }
    cache_.put(entry, ttl, now);
    if (!options_.dnssec_enabled) cache_referral_data(upstream, zone, now);

    return from_cache(query, entry);
}

}  // namespace dnsseckit
