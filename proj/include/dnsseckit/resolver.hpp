#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "dnsseckit/cache.hpp"
#include "dnsseckit/crypto.hpp"
#include "dnsseckit/keystore.hpp"
#include "dnsseckit/transport.hpp"
#include "dnsseckit/validator.hpp"

namespace dnsseckit {

struct RootHint {
    DnsName name;
    std::string address;
};

struct RootHints {
    std::vector<RootHint> servers;

    /// Master-format NS records at the root plus A records for the hosts.
    static RootHints parse(std::string_view text);
    static RootHints load(const std::filesystem::path &path);
};

enum class SourcePortMode { Fixed, Random };

struct IterativeOptions {
    std::size_t hop_limit = 16;
    bool dnssec_ok = false;
    std::uint16_t udp_payload = kDefaultEdnsPayload;
    std::chrono::milliseconds timeout{2000};
    std::uint16_t server_port = 53;
    SourcePortMode port_mode = SourcePortMode::Random;
    std::uint16_t fixed_port = 33333;
    std::uint32_t port_space = 4096;  // random ports come from [1024, 1024 + space)
    std::uint16_t first_random_port = 1024;
};

/// Per-resolver memory of zone cuts and their server addresses.
class DelegationCache {
public:
    void put(const DnsName &zone, std::vector<std::string> addresses);
    /// Deepest known cut enclosing `name`.
    std::optional<std::pair<DnsName, std::vector<std::string>>> closest(const DnsName &name) const;
    void clear();

private:
    mutable std::mutex mu_;
    std::map<DnsName, std::vector<std::string>> cuts_;
};

struct IterativeStats {
    std::size_t transactions = 0;
    std::size_t tcp_retries = 0;
};

/// Follows referrals from the hints until an authoritative answer or
/// NXDOMAIN. Throws Error(HopLimitExceeded / Timeout / ServFail).
/// `on_final` sees the final response together with the zone it came from.
DnsMessage resolve_iterative(const DnsName &qname, RRType qtype, const RootHints &hints, Transport &transport,
                             const IterativeOptions &options = {}, RandomSource *rng = nullptr,
                             IterativeStats *stats = nullptr, DelegationCache *delegations = nullptr,
                             DnsName *answered_zone = nullptr);

struct ResolverOptions {
    IterativeOptions iterative;
    bool dnssec_enabled = false;
    std::vector<TrustAnchor> anchors;
    std::size_t cache_capacity = 10000;
    std::uint32_t negative_ttl_cap = 3600;
};

/// Caching recursive resolver (validating when dnssec_enabled).
class RecursiveResolver {
public:
    RecursiveResolver(RootHints hints, Transport &transport, ResolverOptions options, RandomSource &rng);

    /// Always returns a response; resolution failures become SERVFAIL.
    DnsMessage resolve(const DnsMessage &query, UnixTime now);

    Cache &cache() noexcept { return cache_; }
    DelegationCache &delegations() noexcept { return delegations_; }
    const ResolverOptions &options() const noexcept { return options_; }

    std::size_t upstream_transactions() const noexcept { return transactions_; }
    const ValidationOutcome &last_validation() const noexcept { return last_validation_; }

    void reset_caches();

private:
    DnsMessage from_cache(const DnsMessage &query, const CacheEntry &entry) const;
    DnsMessage fetch_for_validation(const DnsName &name, RRType type);
    void cache_referral_data(const DnsMessage &response, const DnsName &zone, UnixTime now);

    RootHints hints_;
    Transport &transport_;
    ResolverOptions options_;
    RandomSource &rng_;
    Cache cache_;
    DelegationCache delegations_;
    std::map<std::pair<std::string, int>, DnsMessage> key_fetches_;
    std::size_t transactions_ = 0;
    ValidationOutcome last_validation_;
};

/// TTL for a negative answer: the SOA minimum, capped.
std::uint32_t negative_ttl(const DnsMessage &response, std::uint32_t cap);

}  // namespace dnsseckit
