#include "dnsseckit/zone.hpp"

#include <arpa/inet.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/encoding.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/wire_io.hpp"

namespace dnsseckit {

// ---------------------------------------------------------------------------
// Zone

Zone::Zone(DnsName apex, std::vector<ResourceRecord> records) : apex_(std::move(apex)), records_(std::move(records)) {
    std::size_t soa_count = 0;
    for (const auto &rr : records_) {
        if (!rr.owner.is_subdomain_of(apex_)) {
            throw Error(Errc::OutOfZone, rr.owner.to_string() + " is outside zone " + apex_.to_string());
        }
        if (rr.type == RRType::SOA) {
            if (!(rr.owner == apex_)) throw Error(Errc::OutOfZone, "SOA record is not at the zone apex");
            ++soa_count;
        }
    }
    if (soa_count == 0) throw Error(Errc::MissingSoa, "zone " + apex_.to_string() + " has no SOA record");
    if (soa_count > 1) throw Error(Errc::DuplicateSoa, "zone " + apex_.to_string() + " has more than one SOA");
}

const ResourceRecord &Zone::soa_record() const {
    for (const auto &rr : records_) {
        if (rr.type == RRType::SOA) return rr;
    }
    throw Error(Errc::MissingSoa, "zone has no SOA record");
}

const SoaRdata &Zone::soa() const { return std::get<SoaRdata>(soa_record().rdata); }

std::vector<DnsName> Zone::delegations() const {
    std::vector<DnsName> out;
    for (const auto &rr : records_) {
        if (rr.type == RRType::NS && !(rr.owner == apex_) &&
            std::find(out.begin(), out.end(), rr.owner) == out.end()) {
            out.push_back(rr.owner);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Zone::is_below_cut(const DnsName &name) const {
    for (const auto &cut : delegations()) {
        if (name.is_subdomain_of(cut) && !(name == cut)) return true;
    }
    return false;
}

bool Zone::has_type(RRType type) const {
    return std::any_of(records_.begin(), records_.end(), [&](const auto &rr) { return rr.type == type; });
}

bool operator==(const Zone &a, const Zone &b) {
    if (!(a.apex_ == b.apex_) || a.records_.size() != b.records_.size()) return false;
    auto x = a.records_;
    auto y = b.records_;
    sort_records_canonically(x);
    sort_records_canonically(y);
    return x == y;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
    std::string text;
    bool quoted = false;
    std::size_t line = 0;
    std::size_t column = 0;
};

struct Entry {
    std::vector<Token> tokens;
    bool leading_blank = false;
    std::size_t line = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    bool next(Entry &entry) {
        entry = Entry{};
        int depth = 0;
        bool line_start = true;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (line_start && entry.tokens.empty() && depth == 0) {
                entry.leading_blank = (c == ' ' || c == '\t');
                entry.line = line_;
                line_start = false;
            }
            if (c == '\n') {
                advance();
                line_start = true;
                if (depth == 0 && !entry.tokens.empty()) return true;
                continue;
            }
            if (c == '\r' || c == ' ' || c == '\t') {
                advance();
                continue;
            }
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == '(') {
                ++depth;
                advance();
                continue;
            }
            if (c == ')') {
                if (depth == 0) throw SyntaxError(line_, col_, "unbalanced ')'");
                --depth;
                advance();
                continue;
            }
            if (c == '"') {
                entry.tokens.push_back(quoted());
                continue;
            }
            entry.tokens.push_back(bare());
        }
        if (depth != 0) throw SyntaxError(line_, col_, "unterminated '('");
        return !entry.tokens.empty();
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token bare() {
        Token t{{}, false, line_, col_};
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ';' || c == '(' || c == ')' || c == '"') break;
            if (c == '\\' && pos_ + 1 < text_.size()) {
                t.text.push_back(c);
                advance();
            }
            t.text.push_back(text_[pos_]);
            advance();
        }
        return t;
    }

    Token quoted() {
        Token t{{}, true, line_, col_};
        advance();  // opening quote
        while (pos_ < text_.size() && text_[pos_] != '"') {
            char c = text_[pos_];
            if (c == '\n') throw SyntaxError(line_, col_, "newline inside quoted string");
            if (c == '\\') {
                advance();
                if (pos_ >= text_.size()) break;
                if (std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    int value = 0;
                    for (int k = 0; k < 3; ++k) {
                        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                            throw SyntaxError(line_, col_, "bad \\DDD escape");
                        }
                        value = value * 10 + (text_[pos_] - '0');
                        advance();
                    }
                    if (value > 255) throw SyntaxError(line_, col_, "\\DDD escape out of range");
                    t.text.push_back(static_cast<char>(value));
                    continue;
                }
            }
            t.text.push_back(text_[pos_]);
            advance();
        }
        if (pos_ >= text_.size()) throw SyntaxError(t.line, t.column, "unterminated quoted string");
        advance();  // closing quote
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------
// Field parsers

std::optional<std::uint32_t> parse_ttl(std::string_view text) {
    if (text.empty() || !std::isdigit(static_cast<unsigned char>(text[0]))) return std::nullopt;
    std::uint64_t total = 0;
    std::uint64_t current = 0;
    bool pending = false;
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            current = current * 10 + static_cast<std::uint64_t>(c - '0');
            pending = true;
            if (current > 0xFFFFFFFFULL) return std::nullopt;
            continue;
        }
        std::uint64_t unit = 0;
        switch (ascii_lower(c)) {
            case 's': unit = 1; break;
            case 'm': unit = 60; break;
            case 'h': unit = 3600; break;
            case 'd': unit = 86400; break;
            case 'w': unit = 604800; break;
            default:  return std::nullopt;
        }
        if (!pending) return std::nullopt;
        total += current * unit;
        current = 0;
        pending = false;
    }
    total += current;
    if (total > 0xFFFFFFFFULL) return std::nullopt;
    return static_cast<std::uint32_t>(total);
}

std::string unescape_bare(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
            if (i + 3 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])) &&
                std::isdigit(static_cast<unsigned char>(text[i + 2])) &&
                std::isdigit(static_cast<unsigned char>(text[i + 3]))) {
                out.push_back(static_cast<char>((text[i + 1] - '0') * 100 + (text[i + 2] - '0') * 10 +
                                                (text[i + 3] - '0')));
                i += 3;
            } else {
                out.push_back(text[++i]);
            }
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

class RdataParser {
public:
    RdataParser(const std::vector<Token> &tokens, std::size_t start, const DnsName &origin, const Token &anchor)
        : tokens_(tokens), idx_(start), origin_(origin), anchor_(anchor) {}

    Rdata parse(RRType type) {
        Rdata out;
        switch (type) {
            case RRType::A: {
                ARdata d;
                const auto &t = take("IPv4 address");
                if (inet_pton(AF_INET, t.text.c_str(), d.address.data()) != 1) fail(t, "invalid IPv4 address");
                out = d;
                break;
            }
            case RRType::AAAA: {
                AaaaRdata d;
                const auto &t = take("IPv6 address");
                if (inet_pton(AF_INET6, t.text.c_str(), d.address.data()) != 1) fail(t, "invalid IPv6 address");
                out = d;
                break;
            }
            case RRType::NS:    out = NsRdata{name("name server")}; break;
            case RRType::CNAME: out = CnameRdata{name("canonical name")}; break;
            case RRType::SOA: {
                SoaRdata d;
                d.mname = name("SOA mname");
                d.rname = name("SOA rname");
                d.serial = u32("serial");
                d.refresh = ttl("refresh");
                d.retry = ttl("retry");
                d.expire = ttl("expire");
                d.minimum = ttl("minimum");
                out = d;
                break;
            }
            case RRType::MX: {
                MxRdata d;
                d.preference = static_cast<std::uint16_t>(number("preference", 0xFFFF));
                d.exchange = name("exchange");
                out = d;
                break;
            }
            case RRType::TXT: {
                TxtRdata d;
                if (idx_ >= tokens_.size()) fail(anchor_, "TXT record needs at least one string");
                while (idx_ < tokens_.size()) {
                    const auto &t = tokens_[idx_++];
                    auto s = t.quoted ? t.text : unescape_bare(t.text);
                    if (s.size() > 255) fail(t, "TXT string exceeds 255 octets");
                    d.strings.push_back(std::move(s));
                }
                out = d;
                break;
            }
            case RRType::DNSKEY: {
                DnskeyRdata d;
                d.flags = static_cast<std::uint16_t>(number("flags", 0xFFFF));
                if (d.flags != kZskFlags && d.flags != kKskFlags) fail(prev(), "DNSKEY flags must be 256 or 257");
                d.protocol = static_cast<std::uint8_t>(number("protocol", 255));
                if (d.protocol != 3) fail(prev(), "DNSKEY protocol must be 3");
                d.algorithm = algorithm_code();
                d.public_key = base64_rest("public key");
                out = d;
                break;
            }
            case RRType::RRSIG: {
                RrsigRdata d;
                const auto &t = take("type covered");
                auto covered = type_from_string(t.text);
                if (!covered) fail(t, "unknown type '" + t.text + "'");
                d.type_covered = *covered;
                d.algorithm = algorithm_code();
                d.labels = static_cast<std::uint8_t>(number("labels", 127));
                d.original_ttl = ttl("original TTL");
                d.expiration = timestamp("expiration");
                d.inception = timestamp("inception");
                d.key_tag = static_cast<std::uint16_t>(number("key tag", 0xFFFF));
                d.signer_name = name("signer name");
                d.signature = base64_rest("signature");
                out = d;
                break;
            }
            case RRType::NSEC: {
                NsecRdata d;
                d.next_name = name("next name");
                while (idx_ < tokens_.size()) {
                    const auto &t = tokens_[idx_++];
                    auto ty = type_from_string(t.text);
                    if (!ty) fail(t, "unknown type '" + t.text + "' in NSEC bitmap");
                    d.type_bitmap.insert(*ty);
                }
                out = d;
                break;
            }
            case RRType::DS: {
                DsRdata d;
                d.key_tag = static_cast<std::uint16_t>(number("key tag", 0xFFFF));
                d.algorithm = algorithm_code();
                d.digest_type = static_cast<std::uint8_t>(number("digest type", 255));
                const auto &first = peek("digest");
                std::string hex;
                while (idx_ < tokens_.size()) hex += tokens_[idx_++].text;
                try {
                    d.digest = hex_decode(hex);
                } catch (const Error &) {
                    fail(first, "invalid hex digest");
                }
                if (auto want = digest_length(d.digest_type); want != 0 && d.digest.size() != want) {
                    fail(first, "digest length does not match digest type");
                }
                out = d;
                break;
            }
            default: fail(anchor_, "unsupported record type " + type_to_string(type));
        }
        if (idx_ < tokens_.size()) fail(tokens_[idx_], "unexpected trailing data '" + tokens_[idx_].text + "'");
        return out;
    }

private:
    [[noreturn]] void fail(const Token &t, const std::string &reason) const {
        throw SyntaxError(t.line, t.column, reason);
    }

    const Token &peek(const char *what) const {
        if (idx_ >= tokens_.size()) fail(tokens_.empty() ? anchor_ : tokens_.back(), std::string("missing ") + what);
        return tokens_[idx_];
    }
    const Token &take(const char *what) {
        const auto &t = peek(what);
        ++idx_;
        return t;
    }
    const Token &prev() const { return tokens_[idx_ - 1]; }

    DnsName name(const char *what) {
        const auto &t = take(what);
        try {
            return DnsName::from_text(t.text, origin_);
        } catch (const Error &e) {
            fail(t, e.what());
        }
    }

    std::uint32_t number(const char *what, std::uint64_t max) {
        const auto &t = take(what);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || v > max) {
            fail(t, std::string("invalid ") + what + " '" + t.text + "'");
        }
        return static_cast<std::uint32_t>(v);
    }

    std::uint32_t u32(const char *what) { return number(what, 0xFFFFFFFFULL); }

    std::uint32_t ttl(const char *what) {
        const auto &t = take(what);
        auto v = parse_ttl(t.text);
        if (!v) fail(t, std::string("invalid ") + what + " '" + t.text + "'");
        return *v;
    }

    std::uint32_t timestamp(const char *what) {
        const auto &t = take(what);
        try {
            return parse_dnssec_time(t.text);
        } catch (const Error &) {
            fail(t, std::string("invalid ") + what + " '" + t.text + "'");
        }
    }

    std::uint8_t algorithm_code() {
        const auto &t = take("algorithm");
        auto code = algorithm_from_text(t.text);
        if (!code) fail(t, "unknown algorithm '" + t.text + "'");
        return *code;
    }

    Bytes base64_rest(const char *what) {
        const auto &first = peek(what);
        std::string joined;
        while (idx_ < tokens_.size()) joined += tokens_[idx_++].text;
        try {
            return base64_decode(joined);
        } catch (const Error &) {
            fail(first, std::string("invalid base64 in ") + what);
        }
    }

    const std::vector<Token> &tokens_;
    std::size_t idx_;
    const DnsName &origin_;
    const Token &anchor_;
};

// ---------------------------------------------------------------------------
// Parser

struct ParseState {
    DnsName origin;
    std::optional<std::uint32_t> default_ttl;
    std::optional<std::uint32_t> last_ttl;
    std::optional<DnsName> last_owner;
    std::filesystem::path base_dir;
    int include_depth = 0;
};

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void parse_into(std::string_view text, ParseState &state, std::vector<ResourceRecord> &out) {
    Lexer lexer(text);
    Entry entry;
    while (lexer.next(entry)) {
        const auto &toks = entry.tokens;
        const auto &head = toks.front();

        if (!entry.leading_blank && !head.quoted && head.text.starts_with('$')) {
            if (iequals(head.text, "$ORIGIN")) {
                if (toks.size() != 2) throw SyntaxError(head.line, head.column, "$ORIGIN takes one name");
                try {
                    state.origin = DnsName::from_text(toks[1].text, state.origin);
                } catch (const Error &e) {
                    throw SyntaxError(toks[1].line, toks[1].column, e.what());
                }
            } else if (iequals(head.text, "$TTL")) {
                if (toks.size() != 2) throw SyntaxError(head.line, head.column, "$TTL takes one value");
                auto v = parse_ttl(toks[1].text);
                if (!v) throw SyntaxError(toks[1].line, toks[1].column, "invalid $TTL value");
                state.default_ttl = *v;
            } else if (iequals(head.text, "$INCLUDE")) {
                if (toks.size() < 2 || toks.size() > 3) {
                    throw SyntaxError(head.line, head.column, "$INCLUDE takes a file and an optional origin");
                }
                if (state.include_depth >= 8) throw SyntaxError(head.line, head.column, "$INCLUDE nested too deeply");
                std::filesystem::path file = toks[1].text;
                if (file.is_relative()) file = state.base_dir / file;
                std::string included;
                try {
                    included = read_file(file);
                } catch (const Error &e) {
                    throw SyntaxError(toks[1].line, toks[1].column, e.what());
                }
                ParseState child = state;
                ++child.include_depth;
                if (toks.size() == 3) child.origin = DnsName::from_text(toks[2].text, state.origin);
                parse_into(included, child, out);
                state.last_owner = child.last_owner;
                state.last_ttl = child.last_ttl;
            } else {
                throw SyntaxError(head.line, head.column, "unknown directive " + head.text);
            }
            continue;
        }

        std::size_t idx = 0;
        DnsName owner;
        if (entry.leading_blank) {
            if (!state.last_owner) throw SyntaxError(head.line, head.column, "record without owner name");
            owner = *state.last_owner;
        } else {
            try {
                owner = DnsName::from_text(head.text, state.origin);
            } catch (const Error &e) {
                throw SyntaxError(head.line, head.column, e.what());
            }
            idx = 1;
        }

        std::optional<std::uint32_t> ttl;
        RRClass rclass = RRClass::IN;
        bool have_class = false;
        for (int k = 0; k < 2 && idx < toks.size(); ++k) {
            if (!ttl) {
                if (auto v = parse_ttl(toks[idx].text)) {
                    ttl = v;
                    ++idx;
                    continue;
                }
            }
            if (!have_class) {
                if (auto c = class_from_string(toks[idx].text)) {
                    rclass = *c;
                    have_class = true;
                    ++idx;
                    continue;
                }
            }
            break;
        }
        if (idx >= toks.size()) throw SyntaxError(head.line, head.column, "missing record type");
        const auto &type_tok = toks[idx++];
        auto type = type_from_string(type_tok.text);
        if (!type) throw SyntaxError(type_tok.line, type_tok.column, "unknown record type '" + type_tok.text + "'");
        if (!is_supported_zone_type(*type)) {
            throw SyntaxError(type_tok.line, type_tok.column, "unsupported record type " + type_to_string(*type));
        }

        if (!ttl) ttl = state.default_ttl ? state.default_ttl : state.last_ttl;
        if (!ttl) throw SyntaxError(head.line, head.column, "no TTL given and no $TTL in effect");

        RdataParser rp(toks, idx, state.origin, type_tok);
        ResourceRecord rr{owner, *type, rclass, *ttl, rp.parse(*type)};
        state.last_owner = owner;
        state.last_ttl = *ttl;
        out.push_back(std::move(rr));
    }
}

}  // namespace

std::vector<ResourceRecord> parse_records(std::string_view text, const DnsName &origin, const ZoneParseOptions &options) {
    ParseState state;
    state.origin = origin;
    state.base_dir = options.base_dir;
    state.default_ttl = options.default_ttl;
    std::vector<ResourceRecord> out;
    parse_into(text, state, out);
    return out;
}

Zone parse_zone_file(std::string_view text, const DnsName &origin, const ZoneParseOptions &options) {
    auto records = parse_records(text, origin, options);
    return Zone(origin, std::move(records));
}

Zone load_zone_file(const std::filesystem::path &path, const DnsName &origin) {
    ZoneParseOptions options;
    options.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_zone_file(read_file(path), origin, options);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

int type_rank(RRType t) { return t == RRType::SOA ? 0 : static_cast<int>(t) + 1; }

std::string wrap_base64(const std::string &b64, const std::string &indent) {
    std::string out;
    for (std::size_t i = 0; i < b64.size(); i += 56) {
        out += "\n" + indent + b64.substr(i, 56);
    }
    return out;
}

std::string record_text_multiline(const ResourceRecord &rr) {
    const std::string prefix = rr.owner.to_string() + "\t" + std::to_string(rr.ttl) + "\t" +
                               class_to_string(rr.rclass) + "\t" + type_to_string(rr.type) + "\t";
    const std::string indent = "\t\t\t\t";
    if (const auto *key = std::get_if<DnskeyRdata>(&rr.rdata)) {
        std::string role = key->is_sep() ? "KSK" : "ZSK";
        return prefix + std::to_string(key->flags) + " " + std::to_string(key->protocol) + " " +
               std::to_string(key->algorithm) + " (" + wrap_base64(base64_encode(key->public_key), indent) +
               " ) ; " + role + "; alg = " + algorithm_mnemonic(key->algorithm) +
               " ; key id = " + std::to_string(compute_key_tag(*key));
    }
    if (const auto *sig = std::get_if<RrsigRdata>(&rr.rdata)) {
        return prefix + type_to_string(sig->type_covered) + " " + std::to_string(sig->algorithm) + " " +
               std::to_string(sig->labels) + " " + std::to_string(sig->original_ttl) + " (\n" + indent +
               format_dnssec_time(sig->expiration) + " " + format_dnssec_time(sig->inception) + " " +
               std::to_string(sig->key_tag) + " " + sig->signer_name.to_string() +
               wrap_base64(base64_encode(sig->signature), indent) + " )";
    }
    return prefix + rdata_to_text(rr.rdata);
}

}  // namespace

void sort_records_canonically(std::vector<ResourceRecord> &records) {
    struct Keyed {
        ResourceRecord rr;
        int rank;
        bool is_sig;
        Bytes wire;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(records.size());
    for (auto &rr : records) {
        auto rank = type_rank(covered_type(rr));
        bool is_sig = rr.type == RRType::RRSIG;
        auto wire = rdata_to_wire(rr.rdata, true);
        keyed.push_back(Keyed{std::move(rr), rank, is_sig, std::move(wire)});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed &a, const Keyed &b) {
        if (auto c = canonical_compare(a.rr.owner, b.rr.owner); c != 0) return c < 0;
        if (a.rank != b.rank) return a.rank < b.rank;
        if (a.is_sig != b.is_sig) return !a.is_sig;
        if (a.rr.type != b.rr.type) return a.rr.type < b.rr.type;
        return a.wire < b.wire;
    });
    records.clear();
    for (auto &k : keyed) records.push_back(std::move(k.rr));
}

std::string serialize_zone(const Zone &zone) {
    auto records = zone.records();
    sort_records_canonically(records);
    std::string out = "; zone " + zone.apex().to_string() + "\n";
    for (const auto &rr : records) {
        out += record_text_multiline(rr);
        out.push_back('\n');
    }
    return out;
}

std::vector<RRset> group_rrsets(std::span<const ResourceRecord> records, std::vector<std::string> *warnings) {
    struct Key {
        DnsName owner;
        RRType type;
        RRClass rclass;
        bool operator<(const Key &o) const {
            if (auto c = canonical_compare(owner, o.owner); c != 0) return c < 0;
            if (type != o.type) return type < o.type;
            return rclass < o.rclass;
        }
    };
    std::map<Key, RRset> groups;
    for (const auto &rr : records) {
        Key key{rr.owner, rr.type, rr.rclass};
        auto [it, inserted] = groups.try_emplace(key, RRset{rr.owner, rr.type, rr.rclass, rr.ttl, {}});
        auto &set = it->second;
        if (!inserted && set.ttl != rr.ttl) {
            if (warnings) {
                warnings->push_back("TTL mismatch in RRset " + rr.owner.to_string() + " " + type_to_string(rr.type) +
                                    ": using " + std::to_string(std::min(set.ttl, rr.ttl)));
            }
            set.ttl = std::min(set.ttl, rr.ttl);
        }
        if (std::find(set.rdatas.begin(), set.rdatas.end(), rr.rdata) == set.rdatas.end()) {
            set.rdatas.push_back(rr.rdata);
        }
    }
    std::vector<RRset> out;
    out.reserve(groups.size());
    for (auto &[key, set] : groups) out.push_back(std::move(set));
    return out;
}

std::vector<RRset> group_rrsets(const Zone &zone, std::vector<std::string> *warnings) {
    return group_rrsets(std::span(zone.records()), warnings);
}

Bytes canonical_name_wire(const DnsName &name) {
    WireWriter w;
    w.name(name, false, true);
    return std::move(w).take();
}

Bytes canonical_rrset_bytes(const RRset &rrset, std::uint32_t original_ttl) {
    std::vector<Bytes> rdatas;
    rdatas.reserve(rrset.rdatas.size());
    for (const auto &rd : rrset.rdatas) rdatas.push_back(rdata_to_wire(rd, true));
    std::sort(rdatas.begin(), rdatas.end());
    rdatas.erase(std::unique(rdatas.begin(), rdatas.end()), rdatas.end());

    const auto owner = canonical_name_wire(rrset.owner);
    WireWriter w;
    for (const auto &rd : rdatas) {
        w.bytes(owner);
        w.u16(static_cast<std::uint16_t>(rrset.type));
        w.u16(static_cast<std::uint16_t>(rrset.rclass));
        w.u32(original_ttl);
        w.u16(static_cast<std::uint16_t>(rd.size()));
        w.bytes(rd);
    }
    return std::move(w).take();
}

}  // namespace dnsseckit
