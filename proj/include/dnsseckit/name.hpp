#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dnsseckit {

inline constexpr std::size_t kMaxLabelLength = 63;
inline constexpr std::size_t kMaxNameLength = 255;

/// A domain name as an ordered list of labels, leftmost first. The root name
/// has no labels. Equality and ordering ignore ASCII case; ordering is the
/// DNSSEC canonical order (rightmost label first).
class DnsName {
public:
    DnsName() = default;

    /// Throws Error(LabelTooLong / EmptyLabel / OversizeName).
    explicit DnsName(std::vector<std::string> labels);

    /// Parses presentation format. "@" is the origin; names without a
    /// trailing dot are relative to origin. Supports \. and \DDD escapes.
    static DnsName from_text(std::string_view text, const DnsName &origin = DnsName{});

    static DnsName root() { return DnsName{}; }

    const std::vector<std::string> &labels() const noexcept { return labels_; }
    std::size_t label_count() const noexcept { return labels_.size(); }
    bool is_root() const noexcept { return labels_.empty(); }
    bool is_wildcard() const noexcept { return !labels_.empty() && labels_.front() == "*"; }

    /// Uncompressed wire length including the terminating root octet.
    std::size_t wire_length() const noexcept;

    /// Presentation format with trailing dot; root is ".".
    std::string to_string() const;

    DnsName lowercased() const;

    /// Drops the leftmost label. The parent of the root is the root.
    DnsName parent() const;

    DnsName prepend(std::string_view label) const;

    /// The name made of the rightmost `count` labels.
    DnsName suffix(std::size_t count) const;

    /// True when this name is equal to or below `ancestor`.
    bool is_subdomain_of(const DnsName &ancestor) const noexcept;

    friend bool operator==(const DnsName &a, const DnsName &b) noexcept;
    friend std::weak_ordering operator<=>(const DnsName &a, const DnsName &b) noexcept;

private:
    std::vector<std::string> labels_;
};

std::weak_ordering canonical_compare(const DnsName &a, const DnsName &b) noexcept;

/// Lexicographic octet comparison after ASCII lowercasing.
std::weak_ordering compare_labels(std::string_view a, std::string_view b) noexcept;

char ascii_lower(char c) noexcept;
std::string ascii_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

}  // namespace dnsseckit
