#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>

#include "dnsseckit/attack.hpp"
#include "dnsseckit/authority.hpp"
#include "dnsseckit/keystore.hpp"
#include "dnsseckit/message.hpp"
#include "dnsseckit/signer.hpp"
#include "dnsseckit/validator.hpp"
#include "dnsseckit/zone.hpp"

namespace fixtures {

using namespace dnsseckit;

/// Signing clock for every fixture; signatures stay valid for 30 days after it.
inline constexpr UnixTime kNow = 1310380000;  // 2011-07-11

inline DnsName name(std::string_view text) { return DnsName::from_text(text); }
DnsName apex();

/// The 12-record domaine.ma zone.
Zone zone();

/// Deterministic 1024-bit keys for domaine.ma, built once.
const KeyPair &zsk();
const KeyPair &ksk();

/// Deterministic keys of any size for any zone, cached by their arguments.
const KeyPair &key_for(const DnsName &zone, KeyRole role, unsigned bits, std::uint64_t seed);

/// The fixture zone signed with zsk()/ksk() at kNow.
const SignedZone &signed_zone();

/// Zone with the fixture SOA and `extra` additional owners, each carrying one A record.
Zone zone_with_owners(std::size_t extra);

/// Random but structurally valid messages for codec properties.
DnsMessage random_message(std::mt19937_64 &rng);
DnsName random_name(std::mt19937_64 &rng, std::size_t max_labels = 4);

/// Root, ma. and domaine.ma. signed and served from one zone set, with the
/// root KSK as the only anchor. Lookups go straight to answer_authoritative.
struct ChainWorld {
    ZoneSet zones;
    std::vector<TrustAnchor> anchors;
    UnixTime now = 0;

    DnsMessage ask(const DnsName &qname, RRType qtype) const;
    FetchFn fetcher() const;
};
const ChainWorld &chain_world();

enum class TamperTarget { AnswerRdata, AnswerRrsig, Dnskey, Ds };
std::string_view tamper_target_name(TamperTarget t);

struct TamperTally {
    std::size_t mutations = 0;
    std::size_t secure = 0;
    std::size_t redrawn = 0;
    std::map<TamperTarget, std::size_t> per_target;
    std::map<std::string, std::size_t> outcomes;  // security/reason
};

/// Flips one RDATA octet per trial, rotating over the four targets, and
/// validates www.domaine.ma A against the mutated material. Mutations that
/// do not parse, or that parse to an equal record (a case change inside a
/// name), are redrawn.
TamperTally run_tamper(std::size_t mutations, std::uint64_t seed);

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    const std::filesystem::path &path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string &leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path &path, std::string_view text);
std::string read_file(const std::filesystem::path &path);

}  // namespace fixtures
