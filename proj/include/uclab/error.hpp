#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uclab {

enum class ErrorKind {
    ZeroSignal,
    AngularVarianceUndefined,
    TailNotCaptured,
    InsufficientLevels,
    CentreOutOfBand,
    ProductNotConverged,
    BandExceeded,
    IndexTooLarge,
    AtPole,
    InvalidInput,
    ConfigInvalid,
    UnknownName,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroSignal: return "ZeroSignal";
        case ErrorKind::AngularVarianceUndefined: return "AngularVarianceUndefined";
        case ErrorKind::TailNotCaptured: return "TailNotCaptured";
        case ErrorKind::InsufficientLevels: return "InsufficientLevels";
        case ErrorKind::CentreOutOfBand: return "CentreOutOfBand";
        case ErrorKind::ProductNotConverged: return "ProductNotConverged";
        case ErrorKind::BandExceeded: return "BandExceeded";
        case ErrorKind::IndexTooLarge: return "IndexTooLarge";
        case ErrorKind::AtPole: return "AtPole";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::UnknownName: return "UnknownName";
    }
    return "Unknown";
}

/// Exception carrying a machine-checkable kind and a module-qualified message
/// ("periodic: ...", "bridge: ...").
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string_view module, std::string_view what)
        : std::runtime_error(std::string(module) + ": " + std::string(to_string(kind)) +
                             ": " + std::string(what)),
          kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace uclab
