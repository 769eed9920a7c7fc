#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>

#include "dnsseckit/name.hpp"
#include "dnsseckit/types.hpp"

namespace dnsseckit {

/// Append-only big-endian writer with optional owner-name compression.
class WireWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void bytes(std::span<const std::uint8_t> data) { buf_.insert(buf_.end(), data.begin(), data.end()); }

    /// Writes a name. With `compress`, reuses an earlier exact suffix via a
    /// pointer and registers the new suffixes. `lowercase` emits canonical form.
    void name(const DnsName &n, bool compress = false, bool lowercase = false);

    void patch_u16(std::size_t offset, std::uint16_t v);

    std::size_t size() const noexcept { return buf_.size(); }
    const Bytes &data() const noexcept { return buf_; }
    Bytes take() && { return std::move(buf_); }

private:
    Bytes buf_;
    std::unordered_map<std::string, std::uint16_t> suffixes_;
};

/// Bounds-checked reader over a complete DNS message.
class WireReader {
public:
    explicit WireReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    Bytes bytes(std::size_t n);

    /// Reads a possibly compressed name. Pointers must target an earlier
    /// offset than the pointer itself and may not revisit a pointer.
    DnsName name();

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return data_.size() - pos_; }
    void seek(std::size_t pos) { pos_ = pos; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

private:
    void need(std::size_t n) const;

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace dnsseckit
