#include "dnsseckit/dig.hpp"

#include <sstream>

namespace dnsseckit {

namespace {

std::string opcode_name(std::uint8_t op) {
    switch (op) {
    case 0: return "QUERY";
    case 1: return "IQUERY";
    case 2: return "STATUS";
    case 4: return "NOTIFY";
    case 5: return "UPDATE";
    default: return "OPCODE" + std::to_string(op);
    }
}

void section(std::ostringstream &o, const char *title, const std::vector<ResourceRecord> &records) {
    if (records.empty()) return;
    o << "\n;; " << title << " SECTION:\n";
    for (const auto &rr : records) o << record_to_text(rr) << "\n";
}

}  // namespace

std::string render_dig(const DnsMessage &m) {
    std::ostringstream o;
    o << ";; ->>HEADER<<- opcode: " << opcode_name(m.opcode) << ", status: " << rcode_to_string(m.rcode)
      << ", id: " << m.id << "\n";

    o << ";; flags:";
    const std::pair<bool, const char *> flags[] = {{m.flags.qr, "qr"}, {m.flags.aa, "aa"}, {m.flags.tc, "tc"},
                                                   {m.flags.rd, "rd"}, {m.flags.ra, "ra"}, {m.flags.ad, "ad"},
                                                   {m.flags.cd, "cd"}};
    for (const auto &[set, name] : flags) {
        if (set) o << " " << name;
    }
    const auto additional = m.additional.size() + (m.edns ? 1 : 0);
    o << "; QUERY: " << m.questions.size() << ", ANSWER: " << m.answers.size() << ", AUTHORITY: " << m.authority.size()
      << ", ADDITIONAL: " << additional << "\n";

    if (m.edns) {
        o << "\n;; OPT PSEUDOSECTION:\n";
        o << "; EDNS: version: " << static_cast<int>(m.edns->version) << ", flags:" << (m.edns->dnssec_ok ? " do" : "")
          << "; udp: " << m.edns->udp_payload_size << "\n";
    }

    if (!m.questions.empty()) {
        o << "\n;; QUESTION SECTION:\n";
        for (const auto &q : m.questions) {
            o << ";" << q.name.to_string() << "\t\t" << class_to_string(q.qclass) << "\t" << type_to_string(q.type)
              << "\n";
        }
    }
    section(o, "ANSWER", m.answers);
    section(o, "AUTHORITY", m.authority);
    section(o, "ADDITIONAL", m.additional);
    return o.str();
}

}  // namespace dnsseckit
