#include "dnsseckit/error.hpp"

namespace dnsseckit {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::OversizeName:         return "OversizeName";
        case Errc::LabelTooLong:         return "LabelTooLong";
        case Errc::EmptyLabel:           return "EmptyLabel";
        case Errc::TooManyRecords:       return "TooManyRecords";
        case Errc::Truncated:            return "Truncated";
        case Errc::BadPointer:           return "BadPointer";
        case Errc::Malformed:            return "Malformed";
        case Errc::SyntaxError:          return "SyntaxError";
        case Errc::MissingSoa:           return "MissingSoa";
        case Errc::DuplicateSoa:         return "DuplicateSoa";
        case Errc::OutOfZone:            return "OutOfZone";
        case Errc::UnsupportedAlgorithm: return "UnsupportedAlgorithm";
        case Errc::BadKeySize:           return "BadKeySize";
        case Errc::IoError:              return "IoError";
        case Errc::ParseError:           return "ParseError";
        case Errc::KeyMismatch:          return "KeyMismatch";
        case Errc::NotAKsk:              return "NotAKsk";
        case Errc::LegacyAlgorithm:      return "LegacyAlgorithm";
        case Errc::OutOfZoneOwner:       return "OutOfZoneOwner";
        case Errc::KeyZoneMismatch:      return "KeyZoneMismatch";
        case Errc::MissingDnskeyRecords: return "MissingDnskeyRecords";
        case Errc::UnsupportedDigest:    return "UnsupportedDigest";
        case Errc::AlreadySigned:        return "AlreadySigned";
        case Errc::FetchFailure:         return "FetchFailure";
        case Errc::Refused:              return "Refused";
        case Errc::HopLimitExceeded:     return "HopLimitExceeded";
        case Errc::Timeout:              return "Timeout";
        case Errc::ServFail:             return "ServFail";
        case Errc::SocketError:          return "SocketError";
        case Errc::ConfigError:          return "ConfigError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string &message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string &reason)
    : Error(Errc::SyntaxError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason),
      line_(line),
      column_(column),
      reason_(reason) {}

}  // namespace dnsseckit
