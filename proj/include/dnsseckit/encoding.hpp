#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "dnsseckit/types.hpp"

namespace dnsseckit {

std::string base64_encode(std::span<const std::uint8_t> data);

/// Ignores embedded whitespace. Throws Error(ParseError) on bad input.
Bytes base64_decode(std::string_view text);

std::string hex_encode(std::span<const std::uint8_t> data);  // uppercase
Bytes hex_decode(std::string_view text);

/// 14-digit UTC YYYYMMDDHHmmSS, the RRSIG presentation format.
std::string format_dnssec_time(std::uint32_t seconds);

/// Accepts 14-digit timestamps or a plain decimal seconds value.
std::uint32_t parse_dnssec_time(std::string_view text);

}  // namespace dnsseckit
