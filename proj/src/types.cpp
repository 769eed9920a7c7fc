#include "dnsseckit/types.hpp"

#include <array>
#include <charconv>
#include <utility>

#include "dnsseckit/name.hpp"

namespace dnsseckit {

namespace {

constexpr std::array<std::pair<RRType, std::string_view>, 13> kTypeNames{{
    {RRType::A, "A"},
    {RRType::NS, "NS"},
    {RRType::CNAME, "CNAME"},
    {RRType::SOA, "SOA"},
    {RRType::MX, "MX"},
    {RRType::TXT, "TXT"},
    {RRType::AAAA, "AAAA"},
    {RRType::OPT, "OPT"},
    {RRType::DS, "DS"},
    {RRType::RRSIG, "RRSIG"},
    {RRType::NSEC, "NSEC"},
    {RRType::DNSKEY, "DNSKEY"},
    {RRType::ANY, "ANY"},
}};

std::optional<std::uint16_t> parse_prefixed_number(std::string_view text, std::string_view prefix) {
    if (text.size() <= prefix.size() || !iequals(text.substr(0, prefix.size()), prefix)) return std::nullopt;
    auto digits = text.substr(prefix.size());
    std::uint32_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || value > 0xFFFF) return std::nullopt;
    return static_cast<std::uint16_t>(value);
}

}  // namespace

std::string type_to_string(RRType type) {
    for (const auto &[code, name] : kTypeNames) {
        if (code == type) return std::string(name);
    }
    return "TYPE" + std::to_string(static_cast<unsigned>(type));
}

std::optional<RRType> type_from_string(std::string_view text) {
    for (const auto &[code, name] : kTypeNames) {
        if (iequals(name, text)) return code;
    }
    if (auto n = parse_prefixed_number(text, "TYPE")) return static_cast<RRType>(*n);
    return std::nullopt;
}

std::string class_to_string(RRClass rclass) {
    switch (rclass) {
        case RRClass::IN:  return "IN";
        case RRClass::CH:  return "CH";
        case RRClass::ANY: return "ANY";
    }
    return "CLASS" + std::to_string(static_cast<unsigned>(rclass));
}

std::optional<RRClass> class_from_string(std::string_view text) {
    if (iequals(text, "IN")) return RRClass::IN;
    if (iequals(text, "CH")) return RRClass::CH;
    if (iequals(text, "ANY")) return RRClass::ANY;
    if (auto n = parse_prefixed_number(text, "CLASS")) return static_cast<RRClass>(*n);
    return std::nullopt;
}

std::string rcode_to_string(Rcode rcode) {
    switch (rcode) {
        case Rcode::NOERROR:  return "NOERROR";
        case Rcode::FORMERR:  return "FORMERR";
        case Rcode::SERVFAIL: return "SERVFAIL";
        case Rcode::NXDOMAIN: return "NXDOMAIN";
        case Rcode::NOTIMP:   return "NOTIMP";
        case Rcode::REFUSED:  return "REFUSED";
    }
    return "RCODE" + std::to_string(static_cast<unsigned>(rcode));
}

bool is_supported_zone_type(RRType type) noexcept {
    switch (type) {
        case RRType::A:
        case RRType::NS:
        case RRType::CNAME:
        case RRType::SOA:
        case RRType::MX:
        case RRType::TXT:
        case RRType::AAAA:
        case RRType::DS:
        case RRType::RRSIG:
        case RRType::NSEC:
        case RRType::DNSKEY: return true;
        default:             return false;
    }
}

bool is_dnssec_type(RRType type) noexcept {
    return type == RRType::DS || type == RRType::RRSIG || type == RRType::NSEC || type == RRType::DNSKEY;
}

}  // namespace dnsseckit
