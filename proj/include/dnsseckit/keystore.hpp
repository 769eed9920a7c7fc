#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dnsseckit/crypto.hpp"
#include "dnsseckit/name.hpp"
#include "dnsseckit/rdata.hpp"

namespace dnsseckit {

enum class KeyRole { Zsk, Ksk };

std::string_view role_name(KeyRole role) noexcept;  // "ZSK" / "KSK"

inline constexpr unsigned kMinRsaBits = 512;
inline constexpr unsigned kMaxRsaBits = 4096;
inline constexpr unsigned kDefaultRsaBits = 2048;

struct KeyPair {
    DnsName zone;
    KeyRole role = KeyRole::Zsk;
    std::uint8_t algorithm = 0;
    unsigned bits = 0;
    std::uint16_t key_tag = 0;
    DnskeyRdata public_key;
    RsaPrivateKey private_key;
    UnixTime created = 0;
    UnixTime publish = 0;
    UnixTime activate = 0;

    /// K<zone>.+NNN+TTTTT
    std::string base_name() const;
    bool operator==(const KeyPair &) const = default;
};

struct TrustAnchor {
    DnsName zone;
    DnskeyRdata dnskey;
    std::uint16_t key_tag = 0;
};

/// Throws Error(UnsupportedAlgorithm) for parse-only or unknown algorithms
/// and Error(BadKeySize) outside 512..4096 bits.
KeyPair generate_key(const DnsName &zone, KeyRole role, std::uint8_t algorithm, unsigned bits, RandomSource &rng,
                     UnixTime now);

/// Signs `message` with the key under its own algorithm.
Bytes sign_with(const KeyPair &key, std::span<const std::uint8_t> message);

std::string key_base_name(const DnsName &zone, std::uint8_t algorithm, std::uint16_t key_tag);

/// The DNSKEY line of the public key file (no TTL), as installed by clients.
std::string dnskey_line(const DnsName &zone, const DnskeyRdata &key);

std::string public_key_file_text(const KeyPair &key);
std::string private_key_file_text(const KeyPair &key);

struct KeyFilePaths {
    std::filesystem::path public_file;
    std::filesystem::path private_file;
};

/// Throws Error(IoError).
KeyFilePaths write_key_files(const KeyPair &key, const std::filesystem::path &dir);

/// Throws Error(ParseError / IoError / KeyMismatch).
KeyPair read_key_files(const std::filesystem::path &public_file, const std::filesystem::path &private_file);
KeyPair parse_key_files(std::string_view public_text, std::string_view private_text);

/// Accepts a base name with or without the .key / .private suffix.
KeyPair load_key(const std::filesystem::path &base);

/// Throws Error(NotAKsk) for zone-signing keys.
std::string export_trust_anchor(const KeyPair &key);

/// One DNSKEY master-format line per anchor; '#' and ';' comments ignored.
/// Throws SyntaxError, Error(ParseError) for non-DNSKEY lines, Error(NotAKsk).
std::vector<TrustAnchor> parse_trust_anchors(std::string_view text);
std::vector<TrustAnchor> load_trust_anchors(const std::filesystem::path &path);

TrustAnchor make_trust_anchor(const KeyPair &ksk);

/// DNSSECKIT_CONFIG_DIR when set, else the working directory.
std::filesystem::path config_dir();
std::filesystem::path default_trust_anchor_path();

}  // namespace dnsseckit
