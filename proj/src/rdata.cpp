#include "dnsseckit/rdata.hpp"

#include <arpa/inet.h>

#include <map>

#include "dnsseckit/encoding.hpp"
#include "dnsseckit/error.hpp"

namespace dnsseckit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string quote_txt(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (c == '"' || c == '\\') {
            out.push_back('\\');
            out.push_back(c);
        } else if (u < 0x20 || u >= 0x7f) {
            out.push_back('\\');
            out.push_back(static_cast<char>('0' + u / 100));
            out.push_back(static_cast<char>('0' + (u / 10) % 10));
            out.push_back(static_cast<char>('0' + u % 10));
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

}  // namespace

void write_type_bitmap(WireWriter &w, const std::set<RRType> &types) {
    std::map<std::uint8_t, std::array<std::uint8_t, 32>> windows;
    for (auto t : types) {
        auto code = static_cast<std::uint16_t>(t);
        auto &bits = windows.try_emplace(static_cast<std::uint8_t>(code >> 8)).first->second;
        std::uint8_t low = code & 0xFF;
        bits[low / 8] |= static_cast<std::uint8_t>(0x80 >> (low % 8));
    }
    for (const auto &[window, bits] : windows) {
        std::size_t length = 32;
        while (length > 0 && bits[length - 1] == 0) --length;
        w.u8(window);
        w.u8(static_cast<std::uint8_t>(length));
        w.bytes(std::span(bits.data(), length));
    }
}

std::set<RRType> read_type_bitmap(WireReader &r, std::size_t end) {
    std::set<RRType> types;
    int last_window = -1;
    while (r.position() < end) {
        auto window = r.u8();
        auto length = r.u8();
        if (static_cast<int>(window) <= last_window || length == 0 || length > 32 ||
            r.position() + length > end) {
            throw Error(Errc::Malformed, "bad NSEC type bitmap window");
        }
        last_window = window;
        auto bits = r.bytes(length);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            for (int b = 0; b < 8; ++b) {
                if (bits[i] & (0x80 >> b)) {
                    types.insert(static_cast<RRType>((window << 8) | (i * 8 + static_cast<std::size_t>(b))));
                }
            }
        }
    }
    return types;
}

void write_rdata(WireWriter &w, const Rdata &rdata, bool canonical) {
    std::visit(Overloaded{
                   [&](const ARdata &d) { w.bytes(d.address); },
                   [&](const AaaaRdata &d) { w.bytes(d.address); },
                   [&](const NsRdata &d) { w.name(d.host, false, canonical); },
                   [&](const CnameRdata &d) { w.name(d.target, false, canonical); },
                   [&](const SoaRdata &d) {
                       w.name(d.mname, false, canonical);
                       w.name(d.rname, false, canonical);
                       w.u32(d.serial);
                       w.u32(d.refresh);
                       w.u32(d.retry);
                       w.u32(d.expire);
                       w.u32(d.minimum);
                   },
                   [&](const MxRdata &d) {
                       w.u16(d.preference);
                       w.name(d.exchange, false, canonical);
                   },
                   [&](const TxtRdata &d) {
                       for (const auto &s : d.strings) {
                           if (s.size() > 255) throw Error(Errc::Malformed, "TXT string exceeds 255 octets");
                           w.u8(static_cast<std::uint8_t>(s.size()));
                           w.bytes(std::span(reinterpret_cast<const std::uint8_t *>(s.data()), s.size()));
                       }
                   },
                   [&](const DnskeyRdata &d) {
                       w.u16(d.flags);
                       w.u8(d.protocol);
                       w.u8(d.algorithm);
                       w.bytes(d.public_key);
                   },
                   [&](const RrsigRdata &d) {
                       w.u16(static_cast<std::uint16_t>(d.type_covered));
                       w.u8(d.algorithm);
                       w.u8(d.labels);
                       w.u32(d.original_ttl);
                       w.u32(d.expiration);
                       w.u32(d.inception);
                       w.u16(d.key_tag);
                       w.name(d.signer_name, false, canonical);
                       w.bytes(d.signature);
                   },
                   [&](const NsecRdata &d) {
                       w.name(d.next_name, false, canonical);
                       write_type_bitmap(w, d.type_bitmap);
                   },
                   [&](const DsRdata &d) {
                       w.u16(d.key_tag);
                       w.u8(d.algorithm);
                       w.u8(d.digest_type);
                       w.bytes(d.digest);
                   },
                   [&](const OpaqueRdata &d) { w.bytes(d.data); },
               },
               rdata);
}

Bytes rdata_to_wire(const Rdata &rdata, bool canonical) {
    WireWriter w;
    write_rdata(w, rdata, canonical);
    return std::move(w).take();
}

Rdata read_rdata(WireReader &r, RRType type, std::uint16_t length) {
    const auto start = r.position();
    const auto end = start + length;
    if (r.remaining() < length) throw Error(Errc::Truncated, "RDATA runs past end of message");
    auto fixed = [&](std::size_t n) {
        if (length != n) throw Error(Errc::Malformed, type_to_string(type) + " RDATA has wrong length");
    };

    Rdata out;
    switch (type) {
        case RRType::A: {
            fixed(4);
            ARdata d;
            auto b = r.bytes(4);
            std::copy(b.begin(), b.end(), d.address.begin());
            out = d;
            break;
        }
        case RRType::AAAA: {
            fixed(16);
            AaaaRdata d;
            auto b = r.bytes(16);
            std::copy(b.begin(), b.end(), d.address.begin());
            out = d;
            break;
        }
        case RRType::NS:    out = NsRdata{r.name()}; break;
        case RRType::CNAME: out = CnameRdata{r.name()}; break;
        case RRType::SOA: {
            SoaRdata d;
            d.mname = r.name();
            d.rname = r.name();
            d.serial = r.u32();
            d.refresh = r.u32();
            d.retry = r.u32();
            d.expire = r.u32();
            d.minimum = r.u32();
            out = d;
            break;
        }
        case RRType::MX: {
            MxRdata d;
            d.preference = r.u16();
            d.exchange = r.name();
            out = d;
            break;
        }
        case RRType::TXT: {
            TxtRdata d;
            while (r.position() < end) {
                auto n = r.u8();
                if (r.position() + n > end) throw Error(Errc::Malformed, "TXT string overruns RDATA");
                auto b = r.bytes(n);
                d.strings.emplace_back(b.begin(), b.end());
            }
            out = d;
            break;
        }
        case RRType::DNSKEY: {
            if (length < 4) throw Error(Errc::Malformed, "DNSKEY RDATA too short");
            DnskeyRdata d;
            d.flags = r.u16();
            d.protocol = r.u8();
            d.algorithm = r.u8();
            d.public_key = r.bytes(end - r.position());
            out = d;
            break;
        }
        case RRType::RRSIG: {
            if (length < 18) throw Error(Errc::Malformed, "RRSIG RDATA too short");
            RrsigRdata d;
            d.type_covered = static_cast<RRType>(r.u16());
            d.algorithm = r.u8();
            d.labels = r.u8();
            d.original_ttl = r.u32();
            d.expiration = r.u32();
            d.inception = r.u32();
            d.key_tag = r.u16();
            d.signer_name = r.name();
            if (r.position() > end) throw Error(Errc::Malformed, "RRSIG signer overruns RDATA");
            d.signature = r.bytes(end - r.position());
            out = d;
            break;
        }
        case RRType::NSEC: {
            NsecRdata d;
            d.next_name = r.name();
            if (r.position() > end) throw Error(Errc::Malformed, "NSEC next name overruns RDATA");
            d.type_bitmap = read_type_bitmap(r, end);
            out = d;
            break;
        }
        case RRType::DS: {
            if (length < 4) throw Error(Errc::Malformed, "DS RDATA too short");
            DsRdata d;
            d.key_tag = r.u16();
            d.algorithm = r.u8();
            d.digest_type = r.u8();
            d.digest = r.bytes(end - r.position());
            out = d;
            break;
        }
        default: out = OpaqueRdata{r.bytes(length)}; break;
    }
    if (r.position() != end) throw Error(Errc::Malformed, type_to_string(type) + " RDATA length mismatch");
    return out;
}

Rdata rdata_from_wire(RRType type, std::span<const std::uint8_t> data) {
    if (data.size() > 0xFFFF) throw Error(Errc::Malformed, "RDATA exceeds 65535 octets");
    WireReader r(data);
    return read_rdata(r, type, static_cast<std::uint16_t>(data.size()));
}

std::string rdata_to_text(const Rdata &rdata) {
    return std::visit(
        Overloaded{
            [](const ARdata &d) {
                char buf[INET_ADDRSTRLEN];
                inet_ntop(AF_INET, d.address.data(), buf, sizeof buf);
                return std::string(buf);
            },
            [](const AaaaRdata &d) {
                char buf[INET6_ADDRSTRLEN];
                inet_ntop(AF_INET6, d.address.data(), buf, sizeof buf);
                return std::string(buf);
            },
            [](const NsRdata &d) { return d.host.to_string(); },
            [](const CnameRdata &d) { return d.target.to_string(); },
            [](const SoaRdata &d) {
                return d.mname.to_string() + " " + d.rname.to_string() + " " + std::to_string(d.serial) + " " +
                       std::to_string(d.refresh) + " " + std::to_string(d.retry) + " " +
                       std::to_string(d.expire) + " " + std::to_string(d.minimum);
            },
            [](const MxRdata &d) { return std::to_string(d.preference) + " " + d.exchange.to_string(); },
            [](const TxtRdata &d) {
                std::string out;
                for (const auto &s : d.strings) {
                    if (!out.empty()) out.push_back(' ');
                    out += quote_txt(s);
                }
                return out;
            },
            [](const DnskeyRdata &d) {
                return std::to_string(d.flags) + " " + std::to_string(d.protocol) + " " +
                       std::to_string(d.algorithm) + " " + base64_encode(d.public_key);
            },
            [](const RrsigRdata &d) {
                return type_to_string(d.type_covered) + " " + std::to_string(d.algorithm) + " " +
                       std::to_string(d.labels) + " " + std::to_string(d.original_ttl) + " " +
                       format_dnssec_time(d.expiration) + " " + format_dnssec_time(d.inception) + " " +
                       std::to_string(d.key_tag) + " " + d.signer_name.to_string() + " " +
                       base64_encode(d.signature);
            },
            [](const NsecRdata &d) {
                std::string out = d.next_name.to_string();
                for (auto t : d.type_bitmap) out += " " + type_to_string(t);
                return out;
            },
            [](const DsRdata &d) {
                return std::to_string(d.key_tag) + " " + std::to_string(d.algorithm) + " " +
                       std::to_string(d.digest_type) + " " + hex_encode(d.digest);
            },
            [](const OpaqueRdata &d) {
                return "\\# " + std::to_string(d.data.size()) + (d.data.empty() ? "" : " " + hex_encode(d.data));
            },
        },
        rdata);
}

bool rdata_matches_type(const Rdata &rdata, RRType type) noexcept {
    switch (type) {
        case RRType::A:      return std::holds_alternative<ARdata>(rdata);
        case RRType::AAAA:   return std::holds_alternative<AaaaRdata>(rdata);
        case RRType::NS:     return std::holds_alternative<NsRdata>(rdata);
        case RRType::CNAME:  return std::holds_alternative<CnameRdata>(rdata);
        case RRType::SOA:    return std::holds_alternative<SoaRdata>(rdata);
        case RRType::MX:     return std::holds_alternative<MxRdata>(rdata);
        case RRType::TXT:    return std::holds_alternative<TxtRdata>(rdata);
        case RRType::DNSKEY: return std::holds_alternative<DnskeyRdata>(rdata);
        case RRType::RRSIG:  return std::holds_alternative<RrsigRdata>(rdata);
        case RRType::NSEC:   return std::holds_alternative<NsecRdata>(rdata);
        case RRType::DS:     return std::holds_alternative<DsRdata>(rdata);
        default:             return std::holds_alternative<OpaqueRdata>(rdata);
    }
}

}  // namespace dnsseckit
