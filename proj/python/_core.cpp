// Python bindings: keys, zone signing, the wire codec and the attack model.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <ctime>
#include <sstream>

#include "dnsseckit/algorithms.hpp"
#include "dnsseckit/attack.hpp"
#include "dnsseckit/authority.hpp"
#include "dnsseckit/dig.hpp"
#include "dnsseckit/error.hpp"
#include "dnsseckit/keystore.hpp"
#include "dnsseckit/signer.hpp"
#include "dnsseckit/zone.hpp"

namespace py = pybind11;
using namespace dnsseckit;

namespace {

UnixTime clock_or(std::optional<UnixTime> now) { return now ? *now : static_cast<UnixTime>(std::time(nullptr)); }

std::uint8_t algorithm_arg(const std::string &text) {
    const auto code = algorithm_from_text(text);
    if (!code) throw Error(Errc::UnsupportedAlgorithm, "unknown algorithm '" + text + "'");
    return *code;
}

RRType type_arg(const std::string &text) {
    const auto t = type_from_string(text);
    if (!t) throw Error(Errc::ParseError, "unknown type '" + text + "'");
    return *t;
}

KeyRole role_arg(const std::string &text) {
    if (text == "ZSK") return KeyRole::Zsk;
    if (text == "KSK") return KeyRole::Ksk;
    throw Error(Errc::ParseError, "role must be ZSK or KSK, got '" + text + "'");
}

py::bytes to_py(const Bytes &b) { return py::bytes(reinterpret_cast<const char *>(b.data()), b.size()); }

Bytes from_py(const py::bytes &b) {
    const std::string s = b;
    return Bytes(s.begin(), s.end());
}

py::dict stats_dict(const SigningStats &s) {
    py::dict d;
    d["signatures_generated"] = s.signatures_generated;
    d["signatures_retained"] = s.signatures_retained;
    d["signatures_dropped"] = s.signatures_dropped;
    d["signatures_verified"] = s.signatures_verified;
    d["signatures_failed"] = s.signatures_failed;
    d["runtime_seconds"] = s.runtime_seconds;
    d["signatures_per_second"] = s.signatures_per_second;
    return d;
}

// key=value lines into a dict, numbers converted.
py::dict kv_dict(const std::string &text) {
    py::dict d;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const auto key = line.substr(0, eq);
        const auto value = line.substr(eq + 1);
        char *end = nullptr;
        const double num = std::strtod(value.c_str(), &end);
        if (!value.empty() && end && *end == '\0') {
            if (value.find('.') == std::string::npos) {
                d[key.c_str()] = static_cast<long long>(num);
            } else {
                d[key.c_str()] = num;
            }
        } else {
            d[key.c_str()] = value;
        }
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "DNSSEC signing, validation and cache-poisoning experiments";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error &e) {
            error((std::string(errc_name(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<KeyPair>(m, "Key")
        .def_static(
            "generate",
            [](const std::string &zone, const std::string &role, const std::string &algorithm, unsigned bits,
               std::optional<std::uint64_t> seed, std::optional<UnixTime> now) {
                const auto origin = DnsName::from_text(zone, DnsName{});
                if (seed) {
                    SeededRandom rng(*seed);
                    return generate_key(origin, role_arg(role), algorithm_arg(algorithm), bits, rng, clock_or(now));
                }
                SystemRandom rng;
                return generate_key(origin, role_arg(role), algorithm_arg(algorithm), bits, rng, clock_or(now));
            },
            py::arg("zone"), py::arg("role") = "ZSK", py::arg("algorithm") = "RSASHA256", py::arg("bits") = 2048,
            py::arg("seed") = py::none(), py::arg("now") = py::none())
        .def_static("load", [](const std::string &base) { return load_key(base); })
        .def_static("from_files", [](const std::string &public_text, const std::string &private_text) {
            return parse_key_files(public_text, private_text);
        })
        .def_property_readonly("zone", [](const KeyPair &k) { return k.zone.to_string(); })
        .def_property_readonly("role", [](const KeyPair &k) { return std::string(role_name(k.role)); })
        .def_property_readonly("algorithm", [](const KeyPair &k) { return k.algorithm; })
        .def_property_readonly("bits", [](const KeyPair &k) { return k.bits; })
        .def_property_readonly("flags", [](const KeyPair &k) { return k.public_key.flags; })
        .def_property_readonly("key_tag", [](const KeyPair &k) { return k.key_tag; })
        .def_property_readonly("base_name", &KeyPair::base_name)
        .def_property_readonly("dnskey", [](const KeyPair &k) { return dnskey_line(k.zone, k.public_key); })
        .def("public_file_text", &public_key_file_text)
        .def("private_file_text", &private_key_file_text)
        .def("trust_anchor", &export_trust_anchor)
        .def("write", [](const KeyPair &k, const std::string &dir) {
            const auto paths = write_key_files(k, dir);
            return py::make_tuple(paths.public_file.string(), paths.private_file.string());
        })
        .def("__repr__", [](const KeyPair &k) {
            return "<Key " + k.base_name() + " " + std::string(role_name(k.role)) + ">";
        });

    m.def(
        "parse_zone",
        [](const std::string &text, const std::string &origin) {
            std::vector<std::string> out;
            const auto zone = parse_zone_file(text, DnsName::from_text(origin, DnsName{}));
            for (const auto &rr : zone.records()) {
                out.push_back(record_to_text(rr));
            }
            return out;
        },
        py::arg("text"), py::arg("origin"), "Records of a master file in presentation format.");

    m.def(
        "sign_zone",
        [](const std::string &text, const std::string &origin, const KeyPair &zsk, const KeyPair &ksk,
           std::optional<UnixTime> now) {
            const auto zone = parse_zone_file(text, DnsName::from_text(origin, DnsName{}));
            const auto sz = sign_zone(zone, zsk, ksk, SigningPolicy{}, clock_or(now));
            return py::make_tuple(serialize_zone(sz.zone), stats_dict(sz.stats));
        },
        py::arg("text"), py::arg("origin"), py::arg("zsk"), py::arg("ksk"), py::arg("now") = py::none(),
        "Returns the signed master file and the signing counters.");

    m.def("ds_record", [](const KeyPair &ksk, int digest_type) {
        return record_to_text(make_ds(ksk.zone, ksk.public_key, static_cast<std::uint8_t>(digest_type)));
    }, py::arg("ksk"), py::arg("digest_type") = 2);

    m.def("key_tag", [](const py::bytes &dnskey_rdata) { return key_tag_checksum(from_py(dnskey_rdata)); },
          "Checksum tag over raw DNSKEY RDATA.");

    m.def("canonical_compare", [](const std::string &a, const std::string &b) {
        const auto c = canonical_compare(DnsName::from_text(a, DnsName{}), DnsName::from_text(b, DnsName{}));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    });

    m.def(
        "make_query",
        [](const std::string &name, const std::string &type, std::uint16_t id, bool dnssec) {
            return to_py(encode_message(make_query(DnsName::from_text(name, DnsName{}), type_arg(type), id, false, dnssec)));
        },
        py::arg("name"), py::arg("type") = "A", py::arg("id") = 0, py::arg("dnssec") = false);

    m.def("render", [](const py::bytes &wire) { return render_dig(decode_message(from_py(wire))); },
          "dig-style text of a wire-format message.");

    m.def(
        "answer",
        [](const py::bytes &query, const std::string &zone_text, const std::string &origin, bool tcp) -> py::object {
            ZoneSet zones;
            zones.add(parse_zone_file(zone_text, DnsName::from_text(origin, DnsName{})));
            const auto reply = serve_wire(from_py(query), tcp ? Protocol::Tcp : Protocol::Udp, zones);
            if (!reply) return py::none();
            return to_py(*reply);
        },
        py::arg("query"), py::arg("zone_text"), py::arg("origin"), py::arg("tcp") = false,
        "Authoritative reply for one zone, or None when the query is dropped.");

    m.def(
        "analytic_success_probability",
        [](std::size_t n, std::size_t q, bool random_ports, std::uint32_t port_space) {
            return analytic_success_probability(n, q, random_ports ? SourcePortMode::Random : SourcePortMode::Fixed,
                                                port_space);
        },
        py::arg("n"), py::arg("q"), py::arg("random_ports") = false, py::arg("port_space") = 4096);

    m.def(
        "run_attack",
        [](const std::string &config_text, std::optional<std::uint64_t> seed) {
            auto cfg = parse_attack_config(config_text);
            if (seed) cfg.seed = *seed;
            AttackReport rep;
            {
                py::gil_scoped_release release;
                rep = run_attack(cfg);
            }
            return kv_dict(attack_report_kv(rep));
        },
        py::arg("config"), py::arg("seed") = py::none(), "Runs an attack config; returns the report fields.");

    m.def("demo_zone_text", &demo_zone_text);
}
