#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace relchron {

enum class ErrorCode {
    NotHermitian,
    NoConvergence,
    KernelLeak,
    VanishingOverlap,
    DegenerateLevel,
    DegeneracyNotLifted,
    GridMismatch,
    ConfigInvalid,
    VanishingAmplitude,
    DimensionMismatch,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` tells callers which
/// precondition or numerical guard tripped.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace relchron
