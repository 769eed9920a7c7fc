#include "dnsseckit/name.hpp"

#include <algorithm>
#include <cctype>

#include "dnsseckit/error.hpp"

namespace dnsseckit {

char ascii_lower(char c) noexcept {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (auto &c : out) c = ascii_lower(c);
    return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    }
    return true;
}

std::weak_ordering compare_labels(std::string_view a, std::string_view b) noexcept {
    const auto n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto ca = static_cast<unsigned char>(ascii_lower(a[i]));
        auto cb = static_cast<unsigned char>(ascii_lower(b[i]));
        if (ca != cb) return ca <=> cb;
    }
    return a.size() <=> b.size();
}

DnsName::DnsName(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::size_t total = 1;
    for (const auto &label : labels_) {
        if (label.empty()) throw Error(Errc::EmptyLabel, "empty label in domain name");
        if (label.size() > kMaxLabelLength) {
            throw Error(Errc::LabelTooLong, "label exceeds 63 octets");
        }
        total += label.size() + 1;
    }
    if (total > kMaxNameLength) throw Error(Errc::OversizeName, "name exceeds 255 octets");
}

DnsName DnsName::from_text(std::string_view text, const DnsName &origin) {
    if (text == "@") return origin;
    if (text == ".") return DnsName{};
    if (text.empty()) throw Error(Errc::EmptyLabel, "empty domain name");

    std::vector<std::string> labels;
    std::string current;
    bool absolute = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '\\') {
            if (i + 1 >= text.size()) throw Error(Errc::Malformed, "dangling escape in name");
            if (std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                int value = 0;
                for (std::size_t k = 1; k <= 3; ++k) {
                    if (i + k >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i + k]))) {
                        throw Error(Errc::Malformed, "bad \\DDD escape in name");
                    }
                    value = value * 10 + (text[i + k] - '0');
                }
                if (value > 255) throw Error(Errc::Malformed, "\\DDD escape out of range");
                current.push_back(static_cast<char>(value));
                i += 3;
            } else {
                current.push_back(text[++i]);
            }
        } else if (c == '.') {
            if (current.empty()) throw Error(Errc::EmptyLabel, "empty label in '" + std::string(text) + "'");
            labels.push_back(std::move(current));
            current.clear();
            if (i + 1 == text.size()) absolute = true;
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) labels.push_back(std::move(current));
    if (!absolute) labels.insert(labels.end(), origin.labels_.begin(), origin.labels_.end());
    return DnsName(std::move(labels));
}

std::size_t DnsName::wire_length() const noexcept {
    std::size_t total = 1;
    for (const auto &label : labels_) total += label.size() + 1;
    return total;
}

std::string DnsName::to_string() const {
    if (labels_.empty()) return ".";
    std::string out;
    for (const auto &label : labels_) {
        for (char c : label) {
            auto u = static_cast<unsigned char>(c);
            if (c == '.' || c == '\\' || c == '"' || c == ';' || c == '(' || c == ')' || c == '@' ||
                c == '$') {
                out.push_back('\\');
                out.push_back(c);
            } else if (u <= 0x20 || u >= 0x7f) {
                char buf[5];
                buf[0] = '\\';
                buf[1] = static_cast<char>('0' + u / 100);
                buf[2] = static_cast<char>('0' + (u / 10) % 10);
                buf[3] = static_cast<char>('0' + u % 10);
                buf[4] = '\0';
                out += buf;
            } else {
                out.push_back(c);
            }
        }
        out.push_back('.');
    }
    return out;
}

DnsName DnsName::lowercased() const {
    DnsName out;
    out.labels_.reserve(labels_.size());
    for (const auto &label : labels_) out.labels_.push_back(ascii_lower(label));
    return out;
}

DnsName DnsName::parent() const {
    if (labels_.empty()) return {};
    DnsName out;
    out.labels_.assign(labels_.begin() + 1, labels_.end());
    return out;
}

DnsName DnsName::prepend(std::string_view label) const {
    std::vector<std::string> labels;
    labels.reserve(labels_.size() + 1);
    labels.emplace_back(label);
    labels.insert(labels.end(), labels_.begin(), labels_.end());
    return DnsName(std::move(labels));
}

DnsName DnsName::suffix(std::size_t count) const {
    if (count >= labels_.size()) return *this;
    DnsName out;
    out.labels_.assign(labels_.end() - static_cast<std::ptrdiff_t>(count), labels_.end());
    return out;
}

bool DnsName::is_subdomain_of(const DnsName &ancestor) const noexcept {
    if (ancestor.labels_.size() > labels_.size()) return false;
    auto offset = labels_.size() - ancestor.labels_.size();
    for (std::size_t i = 0; i < ancestor.labels_.size(); ++i) {
        if (!iequals(labels_[offset + i], ancestor.labels_[i])) return false;
    }
    return true;
}

bool operator==(const DnsName &a, const DnsName &b) noexcept {
    if (a.labels_.size() != b.labels_.size()) return false;
    for (std::size_t i = 0; i < a.labels_.size(); ++i) {
        if (!iequals(a.labels_[i], b.labels_[i])) return false;
    }
    return true;
}

std::weak_ordering operator<=>(const DnsName &a, const DnsName &b) noexcept {
    return canonical_compare(a, b);
}

std::weak_ordering canonical_compare(const DnsName &a, const DnsName &b) noexcept {
    const auto &la = a.labels();
    const auto &lb = b.labels();
    auto i = la.size();
    auto j = lb.size();
    while (i > 0 && j > 0) {
        --i;
        --j;
        auto c = compare_labels(la[i], lb[j]);
        if (c != 0) return c;
    }
    return la.size() <=> lb.size();
}

}  // namespace dnsseckit
