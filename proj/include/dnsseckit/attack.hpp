#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnsseckit/resolver.hpp"
#include "dnsseckit/transport.hpp"

namespace dnsseckit {

enum class AttackMode { RaceSpoof, Kaminsky };
enum class AttackerPlacement { OnPath, OffPath };

std::string_view mode_name(AttackMode m) noexcept;
std::string_view placement_name(AttackerPlacement p) noexcept;

/// The record the attacker wants in the victim's cache.
struct TargetRecord {
    DnsName name;
    RRType type = RRType::NS;
    Rdata rdata;
};

struct AttackConfig {
    AttackMode mode = AttackMode::Kaminsky;
    AttackerPlacement attacker = AttackerPlacement::OffPath;
    std::size_t forged_per_query = 100;
    std::size_t query_rounds = 50;
    /// Independent campaigns of query_rounds each. The empirical rate is the
    /// share of campaigns that ended with a poisoned cache.
    std::size_t trials = 1;
    std::uint32_t txid_space = 65536;
    SourcePortMode port_mode = SourcePortMode::Fixed;
    std::uint32_t port_space = 4096;
    bool validation = false;
    std::optional<TargetRecord> target;  // default depends on mode
    std::uint64_t seed = 1;
    unsigned key_bits = 1024;
};

struct AttackReport {
    AttackMode mode = AttackMode::Kaminsky;
    AttackerPlacement attacker = AttackerPlacement::OffPath;
    SourcePortMode port_mode = SourcePortMode::Fixed;
    std::uint32_t port_space = 0;
    std::size_t forged_per_query = 0;
    std::size_t rounds = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string target;
    std::size_t successes = 0;
    std::size_t rounds_run = 0;
    std::size_t forged_packets = 0;
    std::size_t victim_servfails = 0;
    double empirical_rate = 0;
    double analytic_rate = 0;
    bool validation_enabled = false;
    std::size_t forged_accepted_post_validation = 0;
};

/// Probability that at least one of q rounds is poisoned when each round
/// draws n distinct guesses from the TXID (times port) space.
double analytic_success_probability(std::size_t n, std::size_t q, SourcePortMode port_mode,
                                    std::uint32_t port_space, std::uint32_t txid_space = 65536);

/// Three-level signed tree (root, ma, domaine.ma) with one server per zone.
struct DemoHierarchy {
    UnixTime now = 0;
    RootHints hints;
    std::vector<TrustAnchor> anchors;
    DnsName target_zone;
    std::vector<std::string> target_servers;
    std::vector<std::pair<std::string, std::shared_ptr<const ZoneSet>>> servers;

    void attach(SimulatedNetwork &network) const;
};

/// The leaf zone of the demo tree, in master format.
std::string demo_zone_text();

DemoHierarchy build_demo_hierarchy(unsigned key_bits, std::uint64_t key_seed = 2011);

/// Built once per key size and shared afterwards.
const DemoHierarchy &demo_hierarchy(unsigned key_bits);

/// Where the victim sits and what the attacker knows about it.
struct AttackScene {
    const DemoHierarchy &hierarchy;
    std::string victim_address;
    IterativeOptions victim_options;
};

/// Runs the campaigns against `victim`, which must use a transport on
/// `network` from scene.victim_address. Throws Error(ConfigError).
AttackReport run_attack(const AttackConfig &cfg, RecursiveResolver &victim, SimulatedNetwork &network,
                        const AttackScene &scene);

/// Builds the network, hierarchy and victim from the config and runs it.
AttackReport run_attack(const AttackConfig &cfg);

/// Throws SyntaxError or Error(ConfigError).
AttackConfig parse_attack_config(std::string_view text);
AttackConfig load_attack_config(const std::filesystem::path &path);

std::string format_attack_report(const AttackReport &report);
/// key=value lines; no timing data, so equal runs give equal text.
std::string attack_report_kv(const AttackReport &report);

}  // namespace dnsseckit
