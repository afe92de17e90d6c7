#include "relchron/error.hpp"

namespace relchron {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::KernelLeak: return "KernelLeak";
        case ErrorCode::VanishingOverlap: return "VanishingOverlap";
        case ErrorCode::DegenerateLevel: return "DegenerateLevel";
        case ErrorCode::DegeneracyNotLifted: return "DegeneracyNotLifted";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::VanishingAmplitude: return "VanishingAmplitude";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace relchron
