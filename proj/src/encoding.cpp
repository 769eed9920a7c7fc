#include "dnsseckit/encoding.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <charconv>
#include <ctime>

#include "dnsseckit/error.hpp"

namespace dnsseckit {

std::string base64_encode(std::span<const std::uint8_t> data) {
    if (data.empty()) return {};
    std::string out(4 * ((data.size() + 2) / 3) + 1, '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char *>(out.data()), data.data(),
                            static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

Bytes base64_decode(std::string_view text) {
    std::string clean;
    clean.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    }
    if (clean.empty()) return {};
    if (clean.size() % 4 != 0) throw Error(Errc::ParseError, "base64 length is not a multiple of 4");
    Bytes out(clean.size() / 4 * 3);
    int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char *>(clean.data()),
                            static_cast<int>(clean.size()));
    if (n < 0) throw Error(Errc::ParseError, "invalid base64 data");
    std::size_t pad = 0;
    if (clean.back() == '=') ++pad;
    if (clean.size() >= 2 && clean[clean.size() - 2] == '=') ++pad;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::string hex_encode(std::span<const std::uint8_t> data) {
    static constexpr char kDigits[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xF]);
    }
    return out;
}

Bytes hex_decode(std::string_view text) {
    std::string clean;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) clean.push_back(c);
    }
    if (clean.size() % 2 != 0) throw Error(Errc::ParseError, "odd number of hex digits");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error(Errc::ParseError, std::string("invalid hex digit '") + c + "'");
    };
    Bytes out;
    out.reserve(clean.size() / 2);
    for (std::size_t i = 0; i < clean.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>((nibble(clean[i]) << 4) | nibble(clean[i + 1])));
    }
    return out;
}

std::string format_dnssec_time(std::uint32_t seconds) {
    std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d%H%M%S", &tm);
    return buf;
}

std::uint32_t parse_dnssec_time(std::string_view text) {
    auto digits_only = !text.empty();
    for (char c : text) digits_only = digits_only && std::isdigit(static_cast<unsigned char>(c));
    if (!digits_only) throw Error(Errc::ParseError, "bad timestamp '" + std::string(text) + "'");
    auto number = [&](std::size_t off, std::size_t len) {
        int v = 0;
        std::from_chars(text.data() + off, text.data() + off + len, v);
        return v;
    };
    if (text.size() == 14) {
        std::tm tm{};
        tm.tm_year = number(0, 4) - 1900;
        tm.tm_mon = number(4, 2) - 1;
        tm.tm_mday = number(6, 2);
        tm.tm_hour = number(8, 2);
        tm.tm_min = number(10, 2);
        tm.tm_sec = number(12, 2);
        auto t = timegm(&tm);
        if (t < 0 || t > 0xFFFFFFFFLL) throw Error(Errc::ParseError, "timestamp out of range");
        return static_cast<std::uint32_t>(t);
    }
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || v > 0xFFFFFFFFULL) throw Error(Errc::ParseError, "timestamp out of range");
    return static_cast<std::uint32_t>(v);
}

}  // namespace dnsseckit
