#include "dnsseckit/wire_io.hpp"

#include <set>

#include "dnsseckit/error.hpp"

namespace dnsseckit {

void WireWriter::u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
}

void WireWriter::u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
}

void WireWriter::patch_u16(std::size_t offset, std::uint16_t v) {
    buf_.at(offset) = static_cast<std::uint8_t>(v >> 8);
    buf_.at(offset + 1) = static_cast<std::uint8_t>(v);
}

void WireWriter::name(const DnsName &n, bool compress, bool lowercase) {
    const auto &labels = n.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (compress) {
            std::string key;
            for (std::size_t k = i; k < labels.size(); ++k) {
                key += ascii_lower(labels[k]);
                key.push_back('\0');
            }
            if (auto it = suffixes_.find(key); it != suffixes_.end()) {
                u16(static_cast<std::uint16_t>(0xC000 | it->second));
                return;
            }
            if (buf_.size() < 0x4000) suffixes_.emplace(std::move(key), static_cast<std::uint16_t>(buf_.size()));
        }
        const auto &label = labels[i];
        u8(static_cast<std::uint8_t>(label.size()));
        for (char c : label) buf_.push_back(static_cast<std::uint8_t>(lowercase ? ascii_lower(c) : c));
    }
    u8(0);
}

void WireReader::need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error(Errc::Truncated, "message ends inside a field");
}

std::uint8_t WireReader::u8() {
    need(1);
    return data_[pos_++];
}

std::uint16_t WireReader::u16() {
    need(2);
    auto v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint32_t WireReader::u32() {
    auto hi = u16();
    auto lo = u16();
    return (static_cast<std::uint32_t>(hi) << 16) | lo;
}

Bytes WireReader::bytes(std::size_t n) {
    need(n);
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
              data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return out;
}

DnsName WireReader::name() {
    std::vector<std::string> labels;
    std::set<std::size_t> visited;
    std::size_t pos = pos_;
    std::size_t total = 1;
    bool jumped = false;
    for (;;) {
        if (pos >= data_.size()) throw Error(Errc::Truncated, "name runs past end of message");
        std::uint8_t len = data_[pos];
        if ((len & 0xC0) == 0xC0) {
            if (pos + 1 >= data_.size()) throw Error(Errc::Truncated, "truncated compression pointer");
            std::size_t target = ((len & 0x3Fu) << 8) | data_[pos + 1];
            if (target >= pos) throw Error(Errc::BadPointer, "compression pointer does not point backward");
            if (!visited.insert(pos).second) throw Error(Errc::BadPointer, "compression pointer loop");
            if (!jumped) {
                pos_ = pos + 2;
                jumped = true;
            }
            pos = target;
            continue;
        }
        if (len & 0xC0) throw Error(Errc::LabelTooLong, "label length field exceeds 63");
        if (len == 0) {
            if (!jumped) pos_ = pos + 1;
            break;
        }
        if (pos + 1 + len > data_.size()) throw Error(Errc::Truncated, "label runs past end of message");
        total += len + 1u;
        if (total > kMaxNameLength) throw Error(Errc::OversizeName, "decoded name exceeds 255 octets");
        labels.emplace_back(reinterpret_cast<const char *>(&data_[pos + 1]), len);
        pos += 1u + len;
    }
    return DnsName(std::move(labels));
}

}  // namespace dnsseckit
