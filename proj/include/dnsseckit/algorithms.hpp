#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "dnsseckit/rdata.hpp"

namespace dnsseckit {

namespace algorithm {
inline constexpr std::uint8_t kRsaMd5 = 1;
inline constexpr std::uint8_t kRsaSha1 = 5;
inline constexpr std::uint8_t kRsaSha256 = 8;
}  // namespace algorithm

namespace digest {
inline constexpr std::uint8_t kSha1 = 1;
inline constexpr std::uint8_t kSha256 = 2;
}  // namespace digest

/// "RSASHA1" etc; unknown codes render as their decimal value.
std::string algorithm_mnemonic(std::uint8_t code);

/// Accepts a mnemonic (case-insensitive) or a decimal code.
std::optional<std::uint8_t> algorithm_from_text(std::string_view text);

/// Known to the registry (parseable, key tag computable).
bool algorithm_known(std::uint8_t code) noexcept;

/// RSA/MD5 is parse-only; these may sign and validate.
bool algorithm_can_sign(std::uint8_t code) noexcept;

/// 0 for unsupported digest types.
std::size_t digest_length(std::uint8_t digest_type) noexcept;

/// Key tag of a DNSKEY. Algorithm 1 keys use the legacy rule (bits 8..23 of
/// the modulus tail); all others the 16-bit ones-complement-style checksum
/// over the RDATA octets.
std::uint16_t compute_key_tag(const DnskeyRdata &key);

/// The checksum half of compute_key_tag, over raw RDATA octets.
std::uint16_t key_tag_checksum(std::span<const std::uint8_t> rdata) noexcept;

}  // namespace dnsseckit
