#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dnsseckit {

enum class Errc {
    // wire codec
    OversizeName,
    LabelTooLong,
    EmptyLabel,
    TooManyRecords,
    Truncated,
    BadPointer,
    Malformed,
    // zone data
    SyntaxError,
    MissingSoa,
    DuplicateSoa,
    OutOfZone,
    // keys
    UnsupportedAlgorithm,
    BadKeySize,
    IoError,
    ParseError,
    KeyMismatch,
    NotAKsk,
    // signing
    LegacyAlgorithm,
    OutOfZoneOwner,
    KeyZoneMismatch,
    MissingDnskeyRecords,
    UnsupportedDigest,
    AlreadySigned,
    // resolution and transport
    FetchFailure,
    Refused,
    HopLimitExceeded,
    Timeout,
    ServFail,
    SocketError,
    // configuration
    ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Master-file or config-file syntax error with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string &reason);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string &reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string reason_;
};

}  // namespace dnsseckit
