#pragma once

#include <string>

#include "dnsseckit/message.hpp"

namespace dnsseckit {

/// dig-style diagnostic text: header line, flags and counts, the OPT
/// pseudosection when EDNS is present, then the four sections. Depends on
/// nothing but `m`.
std::string render_dig(const DnsMessage &m);

}  // namespace dnsseckit
