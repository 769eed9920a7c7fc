#include "dnsseckit/keystore.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/encoding.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/zone.hpp"

namespace dnsseckit {

std::string_view role_name(KeyRole role) noexcept { return role == KeyRole::Ksk ? "KSK" : "ZSK"; }

std::string key_base_name(const DnsName &zone, std::uint8_t algorithm, std::uint16_t key_tag) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "+%03u+%05u", static_cast<unsigned>(algorithm), static_cast<unsigned>(key_tag));
    return "K" + zone.to_string() + buf;
}

std::string KeyPair::base_name() const { return key_base_name(zone, algorithm, key_tag); }

KeyPair generate_key(const DnsName &zone, KeyRole role, std::uint8_t algorithm, unsigned bits, RandomSource &rng,
                     UnixTime now) {
    if (!algorithm_can_sign(algorithm)) {
        if (algorithm == algorithm::kRsaMd5) {
            throw Error(Errc::UnsupportedAlgorithm, "RSAMD5 is a legacy algorithm and cannot be used to sign");
        }
        throw Error(Errc::UnsupportedAlgorithm, "algorithm " + algorithm_mnemonic(algorithm) + " is not supported");
    }
    if (bits < kMinRsaBits || bits > kMaxRsaBits) {
        throw Error(Errc::BadKeySize, "RSA key size must be between 512 and 4096 bits, got " + std::to_string(bits));
    }
    KeyPair k;
    k.zone = zone;
    k.role = role;
    k.algorithm = algorithm;
    k.bits = bits;
    k.private_key = generate_rsa_key(bits, rng);
    k.public_key.flags = role == KeyRole::Ksk ? kKskFlags : kZskFlags;
    k.public_key.protocol = 3;
    k.public_key.algorithm = algorithm;
    k.public_key.public_key = rsa_dnskey_public(k.private_key.modulus(), k.private_key.public_exponent());
    k.key_tag = compute_key_tag(k.public_key);
    k.created = k.publish = k.activate = now;
    return k;
}

Bytes sign_with(const KeyPair &key, std::span<const std::uint8_t> message) {
    if (!algorithm_can_sign(key.algorithm)) {
        throw Error(Errc::LegacyAlgorithm, "algorithm " + algorithm_mnemonic(key.algorithm) + " cannot sign");
    }
    return rsa_sign(key.private_key, key.algorithm, message);
}

std::string dnskey_line(const DnsName &zone, const DnskeyRdata &key) {
    return zone.to_string() + " IN DNSKEY " + std::to_string(key.flags) + " " + std::to_string(key.protocol) + " " +
           std::to_string(key.algorithm) + " " + base64_encode(key.public_key);
}

namespace {

std::string human_time(UnixTime t) {
    std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[64];
    std::strftime(buf, sizeof buf, "%a %b %e %H:%M:%S %Y", &tm);
    return buf;
}

std::string stamp(UnixTime t) { return format_dnssec_time(static_cast<std::uint32_t>(t)); }

std::string private_algorithm_label(std::uint8_t algorithm) {
    if (algorithm == algorithm::kRsaMd5) return "1 (RSA)";
    return std::to_string(algorithm) + " (" + algorithm_mnemonic(algorithm) + ")";
}

std::string read_text(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string public_key_file_text(const KeyPair &key) {
    std::string out;
    out += "; This is a ";
    out += key.role == KeyRole::Ksk ? "key-signing" : "zone-signing";
    out += " key, keyid " + std::to_string(key.key_tag) + ", for " + key.zone.to_string() + "\n";
    out += "; Created: " + stamp(key.created) + " (" + human_time(key.created) + ")\n";
    out += "; Publish: " + stamp(key.publish) + " (" + human_time(key.publish) + ")\n";
    out += "; Activate: " + stamp(key.activate) + " (" + human_time(key.activate) + ")\n";
    out += dnskey_line(key.zone, key.public_key) + "\n";
    return out;
}

std::string private_key_file_text(const KeyPair &key) {
    const auto &p = key.private_key;
    std::string out = "Private-key-format: v1.3\n";
    out += "Algorithm: " + private_algorithm_label(key.algorithm) + "\n";
    out += "Modulus: " + base64_encode(p.modulus()) + "\n";
    out += "PublicExponent: " + base64_encode(p.public_exponent()) + "\n";
    out += "PrivateExponent: " + base64_encode(p.private_exponent()) + "\n";
    out += "Prime1: " + base64_encode(p.prime1()) + "\n";
    out += "Prime2: " + base64_encode(p.prime2()) + "\n";
    out += "Exponent1: " + base64_encode(p.exponent1()) + "\n";
    out += "Exponent2: " + base64_encode(p.exponent2()) + "\n";
    out += "Coefficient: " + base64_encode(p.coefficient()) + "\n";
    out += "Created: " + stamp(key.created) + "\n";
    out += "Publish: " + stamp(key.publish) + "\n";
    out += "Activate: " + stamp(key.activate) + "\n";
    return out;
}

KeyFilePaths write_key_files(const KeyPair &key, const std::filesystem::path &dir) {
    KeyFilePaths paths{dir / (key.base_name() + ".key"), dir / (key.base_name() + ".private")};
    write_text(paths.public_file, public_key_file_text(key));
    write_text(paths.private_file, private_key_file_text(key));
    return paths;
}

KeyPair parse_key_files(std::string_view public_text, std::string_view private_text) {
    ZoneParseOptions opts;
    opts.default_ttl = 3600;
    std::vector<ResourceRecord> records;
    try {
        records = parse_records(public_text, DnsName{}, opts);
    } catch (const SyntaxError &e) {
        throw Error(Errc::ParseError, std::string("public key file: ") + e.what());
    }
    if (records.size() != 1 || records[0].type != RRType::DNSKEY) {
        throw Error(Errc::ParseError, "public key file must hold exactly one DNSKEY record");
    }

    // Field: value, with base64 values allowed to continue on following lines.
    std::map<std::string, std::string> fields;
    std::string last;
    std::istringstream in{std::string(private_text)};
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty()) continue;
        auto colon = t.find(':');
        if (colon == std::string::npos) {
            if (last.empty()) throw Error(Errc::ParseError, "private key file: stray line '" + t + "'");
            fields[last] += t;
            continue;
        }
        last = t.substr(0, colon);
        auto value = trim(std::string_view(t).substr(colon + 1));
        if (first && last != "Private-key-format") {
            throw Error(Errc::ParseError, "private key file lacks the Private-key-format header");
        }
        first = false;
        fields[last] = value;
    }
    if (!fields.count("Private-key-format")) {
        throw Error(Errc::ParseError, "private key file lacks the Private-key-format header");
    }
    const auto &format = fields["Private-key-format"];
    if (format.rfind("v1.", 0) != 0) throw Error(Errc::ParseError, "unsupported private key format " + format);

    auto field = [&](const char *name) -> Bytes {
        auto it = fields.find(name);
        if (it == fields.end() || it->second.empty()) {
            throw Error(Errc::ParseError, std::string("private key file lacks ") + name);
        }
        try {
            return base64_decode(it->second);
        } catch (const Error &) {
            throw Error(Errc::ParseError, std::string("private key field ") + name + " is not valid base64");
        }
    };
    auto time_field = [&](const char *name) -> UnixTime {
        auto it = fields.find(name);
        if (it == fields.end()) return 0;
        try {
            return parse_dnssec_time(it->second);
        } catch (const Error &) {
            throw Error(Errc::ParseError, std::string("bad timestamp in ") + name);
        }
    };

    auto alg_it = fields.find("Algorithm");
    if (alg_it == fields.end()) throw Error(Errc::ParseError, "private key file lacks Algorithm");
    unsigned alg = 0;
    if (std::sscanf(alg_it->second.c_str(), "%u", &alg) != 1 || alg > 255) {
        throw Error(Errc::ParseError, "bad Algorithm field '" + alg_it->second + "'");
    }

    KeyPair k;
    k.zone = records[0].owner;
    k.public_key = std::get<DnskeyRdata>(records[0].rdata);
    k.algorithm = static_cast<std::uint8_t>(alg);
    if (k.public_key.algorithm != k.algorithm) {
        throw Error(Errc::KeyMismatch, "public and private key files disagree on the algorithm");
    }
    k.role = k.public_key.is_sep() ? KeyRole::Ksk : KeyRole::Zsk;
    try {
        k.private_key = RsaPrivateKey(field("Modulus"), field("PublicExponent"), field("PrivateExponent"),
                                      field("Prime1"), field("Prime2"), field("Exponent1"), field("Exponent2"),
                                      field("Coefficient"));
    } catch (const Error &e) {
        if (e.code() == Errc::ParseError) throw;
        throw Error(Errc::ParseError, e.what());
    }
    k.bits = k.private_key.bits();
    k.key_tag = compute_key_tag(k.public_key);
    k.created = time_field("Created");
    k.publish = time_field("Publish");
    k.activate = time_field("Activate");

    // Self-test: a probe signed with the private half must verify under the
    // published key. SHA-256 is used regardless of the key's algorithm.
    static const std::string probe = "dnsseckit key correspondence probe";
    const std::span<const std::uint8_t> msg(reinterpret_cast<const std::uint8_t *>(probe.data()), probe.size());
    auto sig = rsa_sign(k.private_key, algorithm::kRsaSha256, msg);
    if (!rsa_verify(k.public_key.public_key, algorithm::kRsaSha256, msg, sig)) {
        throw Error(Errc::KeyMismatch, "private key does not correspond to public key " + k.base_name());
    }
    return k;
}

KeyPair read_key_files(const std::filesystem::path &public_file, const std::filesystem::path &private_file) {
    return parse_key_files(read_text(public_file), read_text(private_file));
}

KeyPair load_key(const std::filesystem::path &base) {
    auto s = base.string();
    for (const char *ext : {".key", ".private"}) {
        std::string e = ext;
        if (s.size() > e.size() && s.compare(s.size() - e.size(), e.size(), e) == 0) {
            s.resize(s.size() - e.size());
            break;
        }
    }
    return read_key_files(s + ".key", s + ".private");
}

TrustAnchor make_trust_anchor(const KeyPair &ksk) {
    if (ksk.role != KeyRole::Ksk) throw Error(Errc::NotAKsk, ksk.base_name() + " is a zone-signing key");
    return TrustAnchor{ksk.zone, ksk.public_key, ksk.key_tag};
}

std::string export_trust_anchor(const KeyPair &key) {
    if (key.role != KeyRole::Ksk || !key.public_key.is_sep()) {
        throw Error(Errc::NotAKsk, key.base_name() + " is a zone-signing key; only KSKs can be trust anchors");
    }
    return dnskey_line(key.zone, key.public_key);
}

std::vector<TrustAnchor> parse_trust_anchors(std::string_view text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty() && t[0] == '#') line.clear();
        cleaned += line;
        cleaned.push_back('\n');
    }
    ZoneParseOptions opts;
    opts.default_ttl = 3600;
    std::vector<TrustAnchor> out;
    for (auto &rr : parse_records(cleaned, DnsName{}, opts)) {
        if (rr.type != RRType::DNSKEY) {
            throw Error(Errc::ParseError, "trust anchor for " + rr.owner.to_string() + " is not a DNSKEY record");
        }
        const auto &key = std::get<DnskeyRdata>(rr.rdata);
        if (!key.is_sep()) throw Error(Errc::NotAKsk, "trust anchor for " + rr.owner.to_string() + " is not a KSK");
        out.push_back(TrustAnchor{rr.owner, key, compute_key_tag(key)});
    }
    return out;
}

std::vector<TrustAnchor> load_trust_anchors(const std::filesystem::path &path) {
    return parse_trust_anchors(read_text(path));
}

std::filesystem::path config_dir() {
    if (const char *dir = std::getenv("DNSSECKIT_CONFIG_DIR"); dir && *dir) return dir;
    return std::filesystem::current_path();
}

std::filesystem::path default_trust_anchor_path() { return config_dir() / "trusted-key.key"; }

}  // namespace dnsseckit
