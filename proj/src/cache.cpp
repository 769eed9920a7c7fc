#include "dnsseckit/cache.hpp"

#include <algorithm>

namespace dnsseckit {

namespace {

int rank(Security s) { return s == Security::Secure ? 2 : s == Security::Insecure ? 1 : 0; }

}  // namespace

Cache::Cache(std::size_t capacity) : capacity_(std::max<std::size_t>(capacity, 1)) {}

std::string Cache::index_of(const CacheKey &key) {
    return key.name.lowercased().to_string() + "/" + std::to_string(static_cast<unsigned>(key.type)) + "/" +
           std::to_string(static_cast<unsigned>(key.rclass));
}

std::optional<CacheEntry> Cache::get(const CacheKey &key, UnixTime now) {
    std::lock_guard lock(mu_);
    auto it = index_.find(index_of(key));
    if (it == index_.end()) return std::nullopt;
    if (now > it->second->expires_at) {
        lru_.erase(it->second);
        index_.erase(it);
        return std::nullopt;
    }
    lru_.splice(lru_.begin(), lru_, it->second);
    return *it->second;
}

bool Cache::put(CacheEntry entry, std::uint32_t ttl, UnixTime now) {
    if (ttl == 0 || entry.security == Security::Bogus) return false;
    entry.inserted_at = now;
    entry.expires_at = now + ttl;
    std::lock_guard lock(mu_);
    const auto idx = index_of(entry.key);
    if (auto it = index_.find(idx); it != index_.end()) {
        const bool live = now <= it->second->expires_at;
        if (live && rank(entry.security) < rank(it->second->security)) return false;
        *it->second = std::move(entry);
        lru_.splice(lru_.begin(), lru_, it->second);
        return true;
    }
    if (lru_.size() >= capacity_) {
        index_.erase(index_of(lru_.back().key));
        lru_.pop_back();
        ++evictions_;
    }
    lru_.push_front(std::move(entry));
    index_.emplace(idx, lru_.begin());
    return true;
}

bool Cache::contains(const DnsName &name, RRType type, const Rdata &rdata, UnixTime now) {
    auto entry = get(CacheKey{name, type, RRClass::IN}, now);
    if (!entry) return false;
    return std::any_of(entry->records.begin(), entry->records.end(), [&](const ResourceRecord &rr) {
        return rr.type == type && rr.owner == name && rr.rdata == rdata;
    });
}

void Cache::clear() {
    std::lock_guard lock(mu_);
    lru_.clear();
    index_.clear();
}

std::size_t Cache::size() const {
    std::lock_guard lock(mu_);
    return lru_.size();
}

std::size_t Cache::evictions() const {
    std::lock_guard lock(mu_);
    return evictions_;
}

std::vector<CacheKey> Cache::keys_by_recency() const {
    std::lock_guard lock(mu_);
    std::vector<CacheKey> out;
    for (const auto &e : lru_) out.push_back(e.key);
    return out;
}

}  // namespace dnsseckit
