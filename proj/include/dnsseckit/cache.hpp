#pragma once

#include <cstddef>
#include <list>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dnsseckit/record.hpp"
#include "dnsseckit/validator.hpp"

namespace dnsseckit {

struct CacheKey {
    DnsName name;
    RRType type = RRType::A;
    RRClass rclass = RRClass::IN;
    bool operator==(const CacheKey &) const = default;
};

/// A cached answer. Negative answers have an empty `records` list and keep
/// the response code plus the authority proof.
struct CacheEntry {
    CacheKey key;
    Rcode rcode = Rcode::NOERROR;
    std::vector<ResourceRecord> records;    // answer section, RRSIGs included
    std::vector<ResourceRecord> authority;  // negative-answer proof
    UnixTime inserted_at = 0;
    UnixTime expires_at = 0;
    Security security = Security::Insecure;
};

/// Thread-safe LRU cache. Bogus data is never stored; a put only replaces
/// an unexpired entry of equal or lower security rank.
class Cache {
public:
    explicit Cache(std::size_t capacity = 10000);

    std::optional<CacheEntry> get(const CacheKey &key, UnixTime now);

    /// Stores `entry` with expires_at = now + ttl. Returns false when the
    /// entry was refused (zero TTL, Bogus, or outranked).
    bool put(CacheEntry entry, std::uint32_t ttl, UnixTime now);

    /// True when an unexpired entry for (name, type) holds `rdata`.
    bool contains(const DnsName &name, RRType type, const Rdata &rdata, UnixTime now);

    void clear();
    std::size_t size() const;
    std::size_t capacity() const noexcept { return capacity_; }
    std::size_t evictions() const;

    /// Keys from most to least recently used (for inspection and tests).
    std::vector<CacheKey> keys_by_recency() const;

private:
    using List = std::list<CacheEntry>;
    static std::string index_of(const CacheKey &key);

    mutable std::mutex mu_;
    std::size_t capacity_;
    std::size_t evictions_ = 0;
    List lru_;
    std::unordered_map<std::string, List::iterator> index_;
};

}  // namespace dnsseckit
