#include "dnsseckit/message.hpp"

#include "dnsseckit/error.hpp"
#include "dnsseckit/wire_io.hpp"

namespace dnsseckit {

namespace {

void write_record(WireWriter &w, const ResourceRecord &rr) {
    w.name(rr.owner, true);
    w.u16(static_cast<std::uint16_t>(rr.type));
    w.u16(static_cast<std::uint16_t>(rr.rclass));
    w.u32(rr.ttl);
    auto length_at = w.size();
    w.u16(0);
    write_rdata(w, rr.rdata);
    auto length = w.size() - length_at - 2;
    if (length > 0xFFFF) throw Error(Errc::Malformed, "RDATA exceeds 65535 octets");
    w.patch_u16(length_at, static_cast<std::uint16_t>(length));
}

std::uint16_t section_count(std::size_t n) {
    if (n > 0xFFFF) throw Error(Errc::TooManyRecords, "section holds more than 65535 records");
    return static_cast<std::uint16_t>(n);
}

}  // namespace

Bytes encode_message(const DnsMessage &m) {
    WireWriter w;
    w.u16(m.id);
    std::uint16_t flags = 0;
    if (m.flags.qr) flags |= 0x8000;
    flags |= static_cast<std::uint16_t>((m.opcode & 0xF) << 11);
    if (m.flags.aa) flags |= 0x0400;
    if (m.flags.tc) flags |= 0x0200;
    if (m.flags.rd) flags |= 0x0100;
    if (m.flags.ra) flags |= 0x0080;
    if (m.flags.ad) flags |= 0x0020;
    if (m.flags.cd) flags |= 0x0010;
    flags |= static_cast<std::uint16_t>(m.rcode) & 0xF;
    w.u16(flags);
    w.u16(section_count(m.questions.size()));
    w.u16(section_count(m.answers.size()));
    w.u16(section_count(m.authority.size()));
    w.u16(section_count(m.additional.size() + (m.edns ? 1 : 0)));

    for (const auto &q : m.questions) {
        w.name(q.name, true);
        w.u16(static_cast<std::uint16_t>(q.type));
        w.u16(static_cast<std::uint16_t>(q.qclass));
    }
    for (const auto &rr : m.answers) write_record(w, rr);
    for (const auto &rr : m.authority) write_record(w, rr);
    for (const auto &rr : m.additional) write_record(w, rr);
    if (m.edns) {
        w.u8(0);  // root owner
        w.u16(static_cast<std::uint16_t>(RRType::OPT));
        w.u16(m.edns->udp_payload_size);
        std::uint32_t ttl = (static_cast<std::uint32_t>(m.edns->version) << 16) | (m.edns->dnssec_ok ? 0x8000u : 0u);
        w.u32(ttl);
        w.u16(0);
    }
    return std::move(w).take();
}

DnsMessage decode_message(std::span<const std::uint8_t> wire) {
    WireReader r(wire);
    DnsMessage m;
    m.id = r.u16();
    auto flags = r.u16();
    m.flags.qr = flags & 0x8000;
    m.opcode = static_cast<std::uint8_t>((flags >> 11) & 0xF);
    m.flags.aa = flags & 0x0400;
    m.flags.tc = flags & 0x0200;
    m.flags.rd = flags & 0x0100;
    m.flags.ra = flags & 0x0080;
    m.flags.ad = flags & 0x0020;
    m.flags.cd = flags & 0x0010;
    m.rcode = static_cast<Rcode>(flags & 0xF);
    auto qdcount = r.u16();
    auto ancount = r.u16();
    auto nscount = r.u16();
    auto arcount = r.u16();

    for (unsigned i = 0; i < qdcount; ++i) {
        Question q;
        q.name = r.name();
        q.type = static_cast<RRType>(r.u16());
        q.qclass = static_cast<RRClass>(r.u16());
        m.questions.push_back(std::move(q));
    }

    auto read_section = [&](unsigned count, std::vector<ResourceRecord> &out, bool additional) {
        for (unsigned i = 0; i < count; ++i) {
            auto owner = r.name();
            auto type = static_cast<RRType>(r.u16());
            auto rclass = r.u16();
            auto ttl = r.u32();
            auto length = r.u16();
            if (type == RRType::OPT) {
                if (!additional) throw Error(Errc::Malformed, "OPT record outside additional section");
                if (!owner.is_root()) throw Error(Errc::Malformed, "OPT record owner is not the root");
                if (m.edns) throw Error(Errc::Malformed, "more than one OPT record");
                if (r.remaining() < length) throw Error(Errc::Truncated, "OPT RDATA runs past end");
                r.bytes(length);  // EDNS options are not interpreted
                Edns e;
                e.udp_payload_size = rclass;
                e.version = static_cast<std::uint8_t>((ttl >> 16) & 0xFF);
                e.dnssec_ok = ttl & 0x8000;
                m.edns = e;
                continue;
            }
            ResourceRecord rr;
            rr.owner = std::move(owner);
            rr.type = type;
            rr.rclass = static_cast<RRClass>(rclass);
            rr.ttl = ttl;
            rr.rdata = read_rdata(r, type, length);
            out.push_back(std::move(rr));
        }
    };
    read_section(ancount, m.answers, false);
    read_section(nscount, m.authority, false);
    read_section(arcount, m.additional, true);
    return m;
}

DnsMessage make_query(const DnsName &name, RRType type, std::uint16_t id, bool recursion_desired, bool dnssec,
                      std::uint16_t udp_payload) {
    DnsMessage q;
    q.id = id;
    q.flags.rd = recursion_desired;
    q.questions.push_back(Question{name, type, RRClass::IN});
    if (dnssec) q.edns = Edns{0, true, udp_payload};
    return q;
}

DnsMessage make_response(const DnsMessage &query) {
    DnsMessage r;
    r.id = query.id;
    r.opcode = query.opcode;
    r.flags.qr = true;
    r.flags.rd = query.flags.rd;
    r.flags.cd = query.flags.cd;
    r.questions = query.questions;
    if (query.edns) r.edns = Edns{0, query.edns->dnssec_ok, kDefaultEdnsPayload};
    return r;
}

DnsMessage truncated_copy(const DnsMessage &m) {
    DnsMessage t;
    t.id = m.id;
    t.opcode = m.opcode;
    t.flags = m.flags;
    t.flags.tc = true;
    t.rcode = m.rcode;
    t.questions = m.questions;
    t.edns = m.edns;
    return t;
}

Bytes encode_with_limit(const DnsMessage &m, std::size_t limit) {
    auto wire = encode_message(m);
    if (wire.size() <= limit) return wire;
    return encode_message(truncated_copy(m));
}

std::size_t udp_limit_for(const DnsMessage &query) noexcept {
    if (!query.edns) return kClassicUdpLimit;
    return std::max<std::size_t>(kClassicUdpLimit, query.edns->udp_payload_size);
}

}  // namespace dnsseckit
