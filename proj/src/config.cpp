#include "dnsseckit/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "dnsseckit/error.hpp"

namespace dnsseckit {

namespace {

struct Tok {
    std::string text;
    bool quoted = false;
    std::size_t line = 0;
    std::size_t column = 0;
};

std::vector<Tok> tokenize(std::string_view text) {
    std::vector<Tok> out;
    std::size_t line = 1, col = 1, i = 0;
    auto bump = [&](std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            bump();
        } else if (c == '#' || (c == '/' && i + 1 < text.size() && text[i + 1] == '/')) {
            while (i < text.size() && text[i] != '\n') bump();
        } else if (c == '{' || c == '}' || c == ';') {
            out.push_back(Tok{std::string(1, c), false, line, col});
            bump();
        } else if (c == '"') {
            Tok t{{}, true, line, col};
            bump();
            while (i < text.size() && text[i] != '"') {
                if (text[i] == '\n') throw SyntaxError(t.line, t.column, "unterminated string");
                t.text.push_back(text[i]);
                bump();
            }
            if (i >= text.size()) throw SyntaxError(t.line, t.column, "unterminated string");
            bump();
            out.push_back(std::move(t));
        } else {
            Tok t{{}, false, line, col};
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '{' &&
                   text[i] != '}' && text[i] != ';' && text[i] != '"') {
                t.text.push_back(text[i]);
                bump();
            }
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<ConfigStatement> parse_block(const std::vector<Tok> &toks, std::size_t &pos, bool nested) {
    std::vector<ConfigStatement> out;
    while (pos < toks.size()) {
        const auto &t = toks[pos];
        if (!t.quoted && t.text == "}") {
            if (!nested) throw SyntaxError(t.line, t.column, "unexpected '}'");
            ++pos;
            return out;
        }
        if (!t.quoted && (t.text == "{" || t.text == ";")) {
            throw SyntaxError(t.line, t.column, "expected a keyword, found '" + t.text + "'");
        }
        ConfigStatement s;
        s.keyword = t.text;
        s.line = t.line;
        ++pos;
        bool done = false;
        while (pos < toks.size() && !done) {
            const auto &a = toks[pos];
            if (!a.quoted && a.text == ";") {
                ++pos;
                done = true;
            } else if (!a.quoted && a.text == "{") {
                ++pos;
                s.block = parse_block(toks, pos, true);
                if (pos < toks.size() && !toks[pos].quoted && toks[pos].text == ";") ++pos;
                done = true;
            } else if (!a.quoted && a.text == "}") {
                throw SyntaxError(a.line, a.column, "missing ';' before '}'");
            } else {
                s.args.push_back(a.text);
                ++pos;
            }
        }
        if (!done) throw SyntaxError(s.line, 1, "statement '" + s.keyword + "' lacks a terminating ';'");
        out.push_back(std::move(s));
    }
    if (nested) throw SyntaxError(toks.empty() ? 1 : toks.back().line, 1, "unterminated '{' block");
    return out;
}

std::string read_all(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path resolve(const std::filesystem::path &base, const std::string &p) {
    std::filesystem::path path(p);
    return path.is_relative() ? base / path : path;
}

[[noreturn]] void config_error(const ConfigStatement &s, const std::string &msg) {
    throw Error(Errc::ConfigError, "line " + std::to_string(s.line) + ": " + msg);
}

}  // namespace

std::vector<ConfigStatement> parse_config_statements(std::string_view text) {
    auto toks = tokenize(text);
    std::size_t pos = 0;
    return parse_block(toks, pos, false);
}

const std::string &config_single(const ConfigStatement &s) {
    if (s.args.size() != 1) config_error(s, "'" + s.keyword + "' takes exactly one value");
    return s.args.front();
}

bool config_bool(const ConfigStatement &s) {
    const auto &v = config_single(s);
    if (v == "yes" || v == "true" || v == "on") return true;
    if (v == "no" || v == "false" || v == "off") return false;
    config_error(s, "'" + s.keyword + "' expects yes or no, got '" + v + "'");
}

std::uint64_t config_number(const ConfigStatement &s, std::uint64_t max) {
    const auto &v = config_single(s);
    std::uint64_t out = 0;
    if (v.empty()) config_error(s, "empty number");
    for (char c : v) {
        if (c < '0' || c > '9') config_error(s, "'" + s.keyword + "' expects a number, got '" + v + "'");
        out = out * 10 + static_cast<std::uint64_t>(c - '0');
        if (out > max) config_error(s, "'" + s.keyword + "' value " + v + " is out of range");
    }
    return out;
}

ServerConfig parse_server_config(std::string_view text, const std::filesystem::path &base_dir) {
    ServerConfig cfg;
    std::set<std::string> apexes;
    for (const auto &s : parse_config_statements(text)) {
        if (s.keyword == "listen") {
            cfg.listen = config_single(s);
        } else if (s.keyword == "port") {
            cfg.port = static_cast<std::uint16_t>(config_number(s, 65535));
        } else if (s.keyword == "recursion") {
            cfg.recursion = config_bool(s);
        } else if (s.keyword == "dnssec-enable") {
            cfg.dnssec_enabled = config_bool(s);
        } else if (s.keyword == "trust-anchors") {
            cfg.trust_anchors = resolve(base_dir, config_single(s));
        } else if (s.keyword == "root-hints") {
            cfg.root_hints = resolve(base_dir, config_single(s));
        } else if (s.keyword == "source-port") {
            const auto &v = config_single(s);
            if (v == "fixed") {
                cfg.source_port = SourcePortMode::Fixed;
            } else if (v == "random") {
                cfg.source_port = SourcePortMode::Random;
            } else {
                config_error(s, "source-port must be fixed or random");
            }
        } else if (s.keyword == "zone") {
            ZoneConfig z;
            try {
                z.name = DnsName::from_text(config_single(s), DnsName{});
            } catch (const Error &e) {
                if (e.code() == Errc::ConfigError) throw;
                config_error(s, e.what());
            }
            bool have_file = false;
            for (const auto &inner : s.block) {
                if (inner.keyword == "type") {
                    const auto &v = config_single(inner);
                    if (v == "primary" || v == "master") {
                        z.role = ZoneRole::Primary;
                    } else if (v == "secondary" || v == "slave") {
                        z.role = ZoneRole::Secondary;
                    } else {
                        config_error(inner, "zone type must be primary or secondary");
                    }
                } else if (inner.keyword == "file") {
                    z.file = resolve(base_dir, config_single(inner));
                    have_file = true;
                } else {
                    config_error(inner, "unknown zone option '" + inner.keyword + "'");
                }
            }
            if (!have_file) config_error(s, "zone " + z.name.to_string() + " has no file");
            if (!apexes.insert(z.name.lowercased().to_string()).second) {
                config_error(s, "zone " + z.name.to_string() + " is configured twice");
            }
            cfg.zones.push_back(std::move(z));
        } else {
            config_error(s, "unknown option '" + s.keyword + "'");
        }
    }
    return cfg;
}

ServerConfig load_server_config(const std::filesystem::path &path) {
    auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return parse_server_config(read_all(path), base);
}

ZoneSet load_zones(const ServerConfig &config) {
    ZoneSet set;
    for (const auto &z : config.zones) set.add(load_zone_file(z.file, z.name), z.role);
    return set;
}

}  // namespace dnsseckit
