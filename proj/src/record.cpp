#include "dnsseckit/record.hpp"

#include <algorithm>

namespace dnsseckit {

std::vector<ResourceRecord> RRset::records() const {
    std::vector<ResourceRecord> out;
    out.reserve(rdatas.size());
    for (const auto &rd : rdatas) out.push_back(ResourceRecord{owner, type, rclass, ttl, rd});
    return out;
}

std::string record_to_text(const ResourceRecord &rr) {
    return rr.owner.to_string() + "\t" + std::to_string(rr.ttl) + "\t" + class_to_string(rr.rclass) + "\t" +
           type_to_string(rr.type) + "\t" + rdata_to_text(rr.rdata);
}

RRType covered_type(const ResourceRecord &rr) noexcept {
    if (const auto *sig = std::get_if<RrsigRdata>(&rr.rdata)) return sig->type_covered;
    return rr.type;
}

std::vector<RRset> rrsets_from_records(const std::vector<ResourceRecord> &records) {
    std::vector<RRset> out;
    for (const auto &rr : records) {
        auto it = std::find_if(out.begin(), out.end(), [&](const RRset &s) {
            return s.owner == rr.owner && s.type == rr.type && s.rclass == rr.rclass;
        });
        if (it == out.end()) {
            out.push_back(RRset{rr.owner, rr.type, rr.rclass, rr.ttl, {rr.rdata}});
        } else {
            it->ttl = std::min(it->ttl, rr.ttl);
            if (std::find(it->rdatas.begin(), it->rdatas.end(), rr.rdata) == it->rdatas.end()) {
                it->rdatas.push_back(rr.rdata);
            }
        }
    }
    return out;
}

}  // namespace dnsseckit
