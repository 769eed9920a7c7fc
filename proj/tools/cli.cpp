#include "cli.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/attack.hpp"
#include "dnsseckit/config.hpp"
#include "dnsseckit/dig.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/keystore.hpp"
#include "dnsseckit/net.hpp"
#include "dnsseckit/signer.hpp"

namespace dnsseckit::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool transport_failure(Errc code) {
    return code == Errc::Timeout || code == Errc::SocketError;
}

// ---------------------------------------------------------------------------
// keygen

struct KeygenArgs {
    std::string algorithm;
    unsigned bits = kDefaultRsaBits;
    std::string name_type = "ZONE";
    std::string flag;
    std::string directory = ".";
    std::optional<std::uint64_t> seed;
    std::string zone;
};

int cmd_keygen(const KeygenArgs &a, std::ostream &out) {
    if (!iequals(a.name_type, "ZONE")) throw UsageError("-n: only ZONE keys are supported, got '" + a.name_type + "'");
    KeyRole role = KeyRole::Zsk;
    if (!a.flag.empty()) {
        if (!iequals(a.flag, "KSK")) throw UsageError("-f: only KSK is supported, got '" + a.flag + "'");
        role = KeyRole::Ksk;
    }
    auto alg = algorithm_from_text(a.algorithm);
    if (!alg) throw UsageError("-a: unknown algorithm '" + a.algorithm + "'");
    const auto zone = DnsName::from_text(a.zone);

    std::unique_ptr<RandomSource> rng;
    if (a.seed) {
        rng = std::make_unique<SeededRandom>(*a.seed);
    } else {
        rng = std::make_unique<SystemRandom>();
    }
    const auto key = generate_key(zone, role, *alg, a.bits, *rng, std::time(nullptr));
    write_key_files(key, a.directory);
    out << key.base_name() << "\n";
    return kSuccess;
}

// ---------------------------------------------------------------------------
// signzone

struct SignzoneArgs {
    bool stats = false;
    std::string ksk;
    std::string origin;
    bool force = false;
    std::string zone_file;
    std::string zsk;
};

int cmd_signzone(const SignzoneArgs &a, std::ostream &out) {
    const auto zsk = load_key(a.zsk);
    const auto ksk = load_key(a.ksk);
    const auto origin = a.origin.empty() ? zsk.zone : DnsName::from_text(a.origin);

    const fs::path input(a.zone_file);
    const auto zone = load_zone_file(input, origin);
    const bool signed_already = std::any_of(zone.records().begin(), zone.records().end(),
                                            [](const ResourceRecord &rr) { return rr.type == RRType::RRSIG; });
    if (signed_already && !a.force) {
        throw Error(Errc::AlreadySigned, a.zone_file + " already holds signatures; pass --force to re-sign it");
    }

    const auto signed_zone = sign_zone(zone, zsk, ksk, SigningPolicy{}, std::time(nullptr));
    const fs::path output = input.string() + ".signed";
    const auto text = serialize_zone(signed_zone.zone);
    {
        std::ofstream f(output, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(Errc::IoError, "cannot write " + output.string());
        f << text;
        if (!f) throw Error(Errc::IoError, "write failed for " + output.string());
    }

    auto report = format_signing_report(signed_zone, output.string());
    if (!a.stats) report.resize(report.size() - format_signing_stats(signed_zone.stats).size());
    out << report;
    if (a.stats) {
        const auto unsigned_size = fs::file_size(input);
        std::ostringstream ratio;
        ratio << std::fixed << std::setprecision(2)
              << (unsigned_size ? static_cast<double>(text.size()) / static_cast<double>(unsigned_size) : 0.0);
        out << "Size ratio (signed/unsigned): " << ratio.str() << " (" << text.size() << " / " << unsigned_size
            << " octets)\n";
    }
    return kSuccess;
}

// ---------------------------------------------------------------------------
// serve

std::atomic<int> g_signal{0};

extern "C" void on_signal(int sig) { g_signal = sig; }

int cmd_serve(const std::string &config_path, std::ostream &out, std::ostream &err) {
    const auto config = load_server_config(config_path);
    DnsServer server(config);

    struct sigaction sa {};
    sa.sa_handler = on_signal;
    sigemptyset(&sa.sa_mask);
    struct sigaction old_int {}, old_term {}, old_hup {};
    sigaction(SIGINT, &sa, &old_int);
    sigaction(SIGTERM, &sa, &old_term);
    sigaction(SIGHUP, &sa, &old_hup);
    g_signal = 0;

    server.start();
    out << "listening on " << config.listen << "#" << server.port() << "\n" << std::flush;
    for (;;) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        const int sig = g_signal.exchange(0);
        if (sig == SIGHUP) {
            try {
                server.reload();
                out << "zones reloaded\n" << std::flush;
            } catch (const std::exception &e) {
                err << "reload failed, keeping the old zones: " << e.what() << "\n";
            }
        } else if (sig != 0) {
            break;
        }
    }
    server.stop();
    sigaction(SIGINT, &old_int, nullptr);
    sigaction(SIGTERM, &old_term, nullptr);
    sigaction(SIGHUP, &old_hup, nullptr);
    out << "served " << server.queries_served() << " queries\n";
    return kSuccess;
}

// ---------------------------------------------------------------------------
// dig

struct DigArgs {
    std::vector<std::string> words;
    std::uint16_t port = 53;
    std::uint32_t timeout_s = 3;
};

int cmd_dig(const DigArgs &a, std::ostream &out, std::ostream &err) {
    std::string server = "127.0.0.1";
    bool dnssec = false, recurse = true, tcp = false;
    std::vector<std::string> positional;
    for (const auto &w : a.words) {
        if (w.size() > 1 && w[0] == '@') {
            server = w.substr(1);
        } else if (w == "+dnssec") {
            dnssec = true;
        } else if (w == "+nodnssec") {
            dnssec = false;
        } else if (w == "+norecurse") {
            recurse = false;
        } else if (w == "+recurse") {
            recurse = true;
        } else if (w == "+tcp") {
            tcp = true;
        } else if (!w.empty() && w[0] == '+') {
            throw UsageError("unknown query option " + w);
        } else {
            positional.push_back(w);
        }
    }
    if (positional.empty() || positional.size() > 2) throw UsageError("dig takes a name and an optional type");
    const auto name = DnsName::from_text(positional[0]);
    RRType type = RRType::A;
    if (positional.size() == 2) {
        auto t = type_from_string(positional[1]);
        if (!t) throw UsageError("unknown record type " + positional[1]);
        type = *t;
    }

    SystemRandom rng;
    auto query = make_query(name, type, static_cast<std::uint16_t>(rng.uniform(65536)), recurse, dnssec);
    if (!dnssec) query.edns.reset();

    std::ostringstream banner;
    banner << "; <<>> dnsseckit dig <<>>";
    for (const auto &w : a.words) banner << " " << w;
    out << banner.str() << "\n;; global options: +cmd\n";

    SocketTransport transport;
    const Endpoint endpoint{server, a.port};
    const auto timeout = std::chrono::milliseconds(a.timeout_s * 1000);
    const auto accept = [&](const DnsMessage &m) { return matches_query(query, m); };
    const auto started = std::chrono::steady_clock::now();
    DnsMessage resp;
    try {
        resp = transport.exchange(ExchangeRequest{query, endpoint, 0, tcp ? Protocol::Tcp : Protocol::Udp, timeout},
                                  accept);
        if (resp.flags.tc && !tcp) {
            out << ";; Truncated, retrying in TCP mode.\n";
            resp = transport.exchange(ExchangeRequest{query, endpoint, 0, Protocol::Tcp, timeout}, accept);
        }
    } catch (const Error &e) {
        if (!transport_failure(e.code())) throw;
        out << ";; connection timed out; no servers could be reached\n";
        err << "dig: " << e.what() << "\n";
        return kTransportError;
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);

    out << ";; Got answer:\n" << render_dig(resp) << "\n";
    out << ";; Query time: " << elapsed.count() << " msec\n";
    out << ";; SERVER: " << to_string(endpoint) << "(" << server << ")\n";
    out << ";; MSG SIZE  rcvd: " << encode_message(resp).size() << "\n";
    if (resp.rcode == Rcode::NOERROR || resp.rcode == Rcode::NXDOMAIN) return kSuccess;
    return kDomainError;
}

// ---------------------------------------------------------------------------
// attack

int cmd_attack(const std::string &config_path, std::optional<std::uint64_t> seed, std::ostream &out) {
    auto cfg = load_attack_config(config_path);
    if (seed) cfg.seed = *seed;
    const auto report = run_attack(cfg);
    out << format_attack_report(report) << "\n" << attack_report_kv(report);
    return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"DNSSEC toolkit: key generation, zone signing, serving, querying and attack simulation",
                 "dnsseckit"};
    app.require_subcommand(1);

    KeygenArgs kg;
    auto *keygen = app.add_subcommand("keygen", "Generate a zone key pair and write K<zone>.+NNN+TTTTT.{key,private}");
    keygen->add_option("-a", kg.algorithm, "Algorithm: RSASHA1, RSASHA256 or a number")->required();
    keygen->add_option("-b", kg.bits, "Modulus size in bits (512..4096)")->capture_default_str();
    keygen->add_option("-n", kg.name_type, "Name type; only ZONE")->capture_default_str();
    keygen->add_option("-f", kg.flag, "Key flag; KSK sets the secure entry point bit");
    keygen->add_option("-K", kg.directory, "Directory for the key files")->capture_default_str();
    keygen->add_option("--seed", kg.seed, "Deterministic key material from this seed (testing only)");
    keygen->add_option("zone", kg.zone, "Zone name")->required();

    SignzoneArgs sz;
    auto *signzone = app.add_subcommand("signzone", "Sign a zone file, writing <zonefile>.signed");
    signzone->add_flag("-t", sz.stats, "Print signing statistics and the size ratio");
    signzone->add_option("-k", sz.ksk, "Key-signing key base name")->required();
    signzone->add_option("-o", sz.origin, "Zone origin (default: the ZSK's zone)");
    signzone->add_flag("--force", sz.force, "Re-sign input that already carries RRSIGs");
    signzone->add_option("zonefile", sz.zone_file, "Unsigned zone file")->required()->check(CLI::ExistingFile);
    signzone->add_option("zsk", sz.zsk, "Zone-signing key base name")->required();

    std::string serve_config;
    auto *serve = app.add_subcommand("serve", "Run the name server; SIGHUP reloads zones, SIGINT/SIGTERM stop");
    serve->add_option("-c", serve_config, "Server configuration file")->required()->check(CLI::ExistingFile);

    DigArgs dg;
    auto *dig = app.add_subcommand(
        "dig", "Query a server: name [type] [@server] [+dnssec] [+norecurse] [+tcp]. Exit 0 on NOERROR or "
               "NXDOMAIN, 1 on other status codes, 3 when no answer arrives");
    dig->add_option("-p", dg.port, "Server port")->capture_default_str();
    dig->add_option("--timeout", dg.timeout_s, "Seconds to wait for an answer")->capture_default_str();
    dig->add_option("query", dg.words, "name, type, @server and +options in any order")->required();
    dig->allow_extras(false);

    std::string attack_config;
    std::optional<std::uint64_t> attack_seed;
    auto *attack = app.add_subcommand("attack", "Run a cache-poisoning simulation and print the report");
    attack->add_option("-c", attack_config, "Attack configuration file")->required()->check(CLI::ExistingFile);
    attack->add_option("--seed", attack_seed, "Override the configured seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (keygen->parsed()) return cmd_keygen(kg, out);
        if (signzone->parsed()) return cmd_signzone(sz, out);
        if (serve->parsed()) return cmd_serve(serve_config, out, err);
        if (dig->parsed()) return cmd_dig(dg, out, err);
        if (attack->parsed()) return cmd_attack(attack_config, attack_seed, out);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const SyntaxError &e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return transport_failure(e.code()) ? kTransportError : kDomainError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

}  // namespace dnsseckit::cli
