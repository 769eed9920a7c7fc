#include "dnsseckit/authority.hpp"

#include <algorithm>

#include "dnsseckit/error.hpp"
#include "dnsseckit/types.hpp"

namespace dnsseckit {

namespace {

const std::vector<ResourceRecord> kNoRecords;

}  // namespace

HostedZone::HostedZone(Zone zone, ZoneRole role) : zone_(std::move(zone)), role_(role) {
    for (const auto &rr : zone_.records()) {
        by_owner_[rr.owner].push_back(rr);
        if (rr.type == RRType::NSEC) nsecs_.push_back(rr);
        if (rr.type == RRType::RRSIG || rr.type == RRType::DNSKEY) signed_ = true;
    }
    cuts_ = zone_.delegations();
    std::sort(nsecs_.begin(), nsecs_.end(),
              [](const ResourceRecord &a, const ResourceRecord &b) { return a.owner < b.owner; });
}

const std::vector<ResourceRecord> &HostedZone::at(const DnsName &owner) const {
    auto it = by_owner_.find(owner);
    return it == by_owner_.end() ? kNoRecords : it->second;
}

bool HostedZone::name_exists(const DnsName &name) const {
    auto it = by_owner_.lower_bound(name);
    if (it == by_owner_.end()) return false;
    // Canonical order puts descendants right after their ancestor.
    return it->first == name || it->first.is_subdomain_of(name);
}

std::optional<DnsName> HostedZone::cut_for(const DnsName &name) const {
    std::optional<DnsName> best;
    for (const auto &cut : cuts_) {
        if (name.is_subdomain_of(cut) && (!best || cut.label_count() < best->label_count())) best = cut;
    }
    return best;
}

const ResourceRecord *HostedZone::covering_nsec(const DnsName &name) const {
    if (nsecs_.empty()) return nullptr;
    // Last NSEC whose owner sorts at or before `name`; before the first
    // owner nothing covers it except the wrap-around record.
    auto it = std::upper_bound(nsecs_.begin(), nsecs_.end(), name,
                               [](const DnsName &n, const ResourceRecord &rr) { return n < rr.owner; });
    if (it == nsecs_.begin()) return &nsecs_.back();
    return &*std::prev(it);
}

void ZoneSet::add(Zone zone, ZoneRole role) {
    for (const auto &z : zones_) {
        if (z->apex() == zone.apex()) {
            throw Error(Errc::ConfigError, "zone " + zone.apex().to_string() + " is configured twice");
        }
    }
    zones_.push_back(std::make_shared<const HostedZone>(std::move(zone), role));
}

const HostedZone *ZoneSet::find(const DnsName &qname, RRType qtype) const {
    const HostedZone *best = nullptr;
    const HostedZone *parent = nullptr;
    for (const auto &z : zones_) {
        if (!qname.is_subdomain_of(z->apex())) continue;
        if (!best || z->apex().label_count() > best->apex().label_count()) best = z.get();
    }
    if (best && qtype == RRType::DS && qname == best->apex() && !qname.is_root()) {
        for (const auto &z : zones_) {
            if (z.get() == best || !qname.is_subdomain_of(z->apex())) continue;
            if (!parent || z->apex().label_count() > parent->apex().label_count()) parent = z.get();
        }
        if (parent) return parent;
    }
    return best;
}

namespace {

struct Builder {
    const HostedZone &zone;
    bool dnssec;
    DnsMessage &resp;

    void add_set(std::vector<ResourceRecord> &section, const DnsName &owner, RRType type) const {
        for (const auto &rr : zone.at(owner)) {
            if (rr.type == type) section.push_back(rr);
        }
        if (dnssec) add_sigs(section, owner, type);
    }

    void add_sigs(std::vector<ResourceRecord> &section, const DnsName &owner, RRType type) const {
        for (const auto &rr : zone.at(owner)) {
            if (rr.type == RRType::RRSIG && std::get<RrsigRdata>(rr.rdata).type_covered == type) {
                section.push_back(rr);
            }
        }
    }

    void add_nsec(const ResourceRecord *nsec) const {
        if (!dnssec || !nsec) return;
        for (const auto &rr : resp.authority) {
            if (rr == *nsec) return;
        }
        resp.authority.push_back(*nsec);
        add_sigs(resp.authority, nsec->owner, RRType::NSEC);
    }

    void add_soa() const { add_set(resp.authority, zone.apex(), RRType::SOA); }

    void add_glue(const DnsName &host) const {
        if (!host.is_subdomain_of(zone.apex())) return;
        for (const auto &rr : zone.at(host)) {
            if ((rr.type == RRType::A || rr.type == RRType::AAAA) &&
                std::find(resp.additional.begin(), resp.additional.end(), rr) == resp.additional.end()) {
                resp.additional.push_back(rr);
            }
        }
    }

    void add_apex_ns_authority() const {
        add_set(resp.authority, zone.apex(), RRType::NS);
        for (const auto &rr : zone.at(zone.apex())) {
            if (rr.type == RRType::NS) add_glue(std::get<NsRdata>(rr.rdata).host);
        }
    }
};

bool has_type(const std::vector<ResourceRecord> &records, RRType type) {
    return std::any_of(records.begin(), records.end(), [&](const auto &rr) { return rr.type == type; });
}

}  // namespace

DnsMessage answer_authoritative(const DnsMessage &query, const ZoneSet &zones, bool dnssec_enabled) {
    DnsMessage resp = make_response(query);
    if (query.questions.size() != 1 || query.opcode != 0) {
        resp.rcode = query.opcode != 0 ? Rcode::NOTIMP : Rcode::FORMERR;
        return resp;
    }
    const auto &q = query.questions.front();
    const HostedZone *zone = zones.find(q.name, q.type);
    if (!zone) {
        resp.rcode = Rcode::REFUSED;
        return resp;
    }
    const bool do_bit = dnssec_enabled && query.dnssec_ok() && zone->is_signed();
    Builder b{*zone, do_bit, resp};

    // Referral: the name is at or below a cut (DS at the cut is ours).
    if (auto cut = zone->cut_for(q.name); cut && !(q.type == RRType::DS && q.name == *cut)) {
        resp.flags.aa = false;
        for (const auto &rr : zone->at(*cut)) {
            if (rr.type == RRType::NS) resp.authority.push_back(rr);
        }
        if (do_bit) {
            if (has_type(zone->at(*cut), RRType::DS)) {
                b.add_set(resp.authority, *cut, RRType::DS);
            } else {
                b.add_nsec(zone->covering_nsec(*cut));
            }
        }
        for (const auto &rr : zone->at(*cut)) {
            if (rr.type == RRType::NS) b.add_glue(std::get<NsRdata>(rr.rdata).host);
        }
        return resp;
    }

    resp.flags.aa = true;
    DnsName name = q.name;
    for (int hops = 0; hops < 8; ++hops) {
        const auto &records = zone->at(name);
        if (records.empty()) {
            if (hops > 0) return resp;  // CNAME target without data here
            const bool ent = zone->name_exists(name);
            resp.rcode = ent ? Rcode::NOERROR : Rcode::NXDOMAIN;
            b.add_soa();
            b.add_nsec(zone->covering_nsec(name));
            return resp;
        }
        std::vector<ResourceRecord> matched;
        for (const auto &rr : records) {
            if (q.type == RRType::ANY ? rr.type != RRType::RRSIG || do_bit : rr.type == q.type) matched.push_back(rr);
        }
        if (!matched.empty()) {
            // Explicit DNSSEC-type queries get their records even without DO.
            resp.answers.insert(resp.answers.end(), matched.begin(), matched.end());
            if (do_bit && q.type != RRType::ANY && q.type != RRType::RRSIG) b.add_sigs(resp.answers, name, q.type);
            if (q.type != RRType::DNSKEY && q.type != RRType::DS && !(q.type == RRType::NS && name == zone->apex())) {
                b.add_apex_ns_authority();
            }
            for (const auto &rr : matched) {
                if (const auto *ns = std::get_if<NsRdata>(&rr.rdata)) b.add_glue(ns->host);
                if (const auto *mx = std::get_if<MxRdata>(&rr.rdata)) b.add_glue(mx->exchange);
            }
            return resp;
        }
        if (q.type != RRType::CNAME && has_type(records, RRType::CNAME)) {
            b.add_set(resp.answers, name, RRType::CNAME);
            for (const auto &rr : records) {
                if (rr.type == RRType::CNAME) name = std::get<CnameRdata>(rr.rdata).target;
            }
            if (!name.is_subdomain_of(zone->apex()) || zone->cut_for(name)) return resp;
            continue;
        }
        // NODATA
        if (hops > 0) return resp;
        b.add_soa();
        b.add_nsec(zone->covering_nsec(name));
        return resp;
    }
    return resp;
}

std::optional<Bytes> serve_wire(std::span<const std::uint8_t> query, Protocol protocol, const ZoneSet &zones,
                                bool dnssec_enabled) {
    DnsMessage q;
    try {
        q = decode_message(query);
    } catch (const Error &) {
        if (query.size() < 12) return std::nullopt;
        DnsMessage err;
        err.id = static_cast<std::uint16_t>((query[0] << 8) | query[1]);
        err.flags.qr = true;
        err.rcode = Rcode::FORMERR;
        return encode_message(err);
    }
    if (q.flags.qr) return std::nullopt;  // never answer responses
    auto resp = answer_authoritative(q, zones, dnssec_enabled);
    if (protocol == Protocol::Tcp) return encode_message(resp);
    return encode_with_limit(resp, udp_limit_for(q));
}

}  // namespace dnsseckit
