#include "dnsseckit/algorithms.hpp"

#include <charconv>

#include "dnsseckit/name.hpp"

namespace dnsseckit {

std::string algorithm_mnemonic(std::uint8_t code) {
    switch (code) {
        case algorithm::kRsaMd5:    return "RSAMD5";
        case algorithm::kRsaSha1:   return "RSASHA1";
        case algorithm::kRsaSha256: return "RSASHA256";
        default:                    return std::to_string(code);
    }
}

std::optional<std::uint8_t> algorithm_from_text(std::string_view text) {
    if (iequals(text, "RSAMD5")) return algorithm::kRsaMd5;
    if (iequals(text, "RSASHA1")) return algorithm::kRsaSha1;
    if (iequals(text, "RSASHA256")) return algorithm::kRsaSha256;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value > 255) return std::nullopt;
    return static_cast<std::uint8_t>(value);
}

bool algorithm_known(std::uint8_t code) noexcept {
    return code == algorithm::kRsaMd5 || code == algorithm::kRsaSha1 || code == algorithm::kRsaSha256;
}

bool algorithm_can_sign(std::uint8_t code) noexcept {
    return code == algorithm::kRsaSha1 || code == algorithm::kRsaSha256;
}

std::size_t digest_length(std::uint8_t digest_type) noexcept {
    switch (digest_type) {
        case digest::kSha1:   return 20;
        case digest::kSha256: return 32;
        default:              return 0;
    }
}

std::uint16_t key_tag_checksum(std::span<const std::uint8_t> rdata) noexcept {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < rdata.size(); ++i) {
        acc += (i & 1) ? rdata[i] : static_cast<std::uint32_t>(rdata[i]) << 8;
    }
    acc += (acc >> 16) & 0xFFFF;
    return static_cast<std::uint16_t>(acc & 0xFFFF);
}

std::uint16_t compute_key_tag(const DnskeyRdata &key) {
    if (key.algorithm == algorithm::kRsaMd5) {
        const auto &k = key.public_key;
        if (k.size() < 3) return 0;
        return static_cast<std::uint16_t>((k[k.size() - 3] << 8) | k[k.size() - 2]);
    }
    auto wire = rdata_to_wire(key);
    return key_tag_checksum(wire);
}

}  // namespace dnsseckit
