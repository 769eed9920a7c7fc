#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dnsseckit/authority.hpp"
#include "dnsseckit/resolver.hpp"

namespace dnsseckit {

/// One `keyword arg... ;` statement, optionally with a `{ ... }` block.
struct ConfigStatement {
    std::string keyword;
    std::vector<std::string> args;
    std::vector<ConfigStatement> block;
    std::size_t line = 0;
};

/// Tokenises the named.conf-like grammar shared by server and attack
/// configs; `#` and `//` start comments. Throws SyntaxError.
std::vector<ConfigStatement> parse_config_statements(std::string_view text);

/// "yes"/"no" (also true/false, on/off). Throws Error(ConfigError).
bool config_bool(const ConfigStatement &s);
std::uint64_t config_number(const ConfigStatement &s, std::uint64_t max);
const std::string &config_single(const ConfigStatement &s);

struct ZoneConfig {
    DnsName name;
    ZoneRole role = ZoneRole::Primary;
    std::filesystem::path file;
};

struct ServerConfig {
    std::string listen = "127.0.0.1";
    std::uint16_t port = 5353;
    bool recursion = false;
    bool dnssec_enabled = true;
    std::filesystem::path trust_anchors;  // empty: default path when recursing with DNSSEC
    SourcePortMode source_port = SourcePortMode::Random;
    std::filesystem::path root_hints;
    std::vector<ZoneConfig> zones;
};

/// Relative paths are resolved against `base_dir`. Throws SyntaxError or
/// Error(ConfigError), including for a zone apex listed twice.
ServerConfig parse_server_config(std::string_view text, const std::filesystem::path &base_dir = ".");
ServerConfig load_server_config(const std::filesystem::path &path);

/// Loads every configured zone file. Throws on parse errors.
ZoneSet load_zones(const ServerConfig &config);

}  // namespace dnsseckit
