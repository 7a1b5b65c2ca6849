#pragma once

#include <stdexcept>
#include <string>

namespace treeten {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// topology
struct DisconnectedTree : Error { using Error::Error; };
struct CycleDetected : Error { using Error::Error; };
struct DuplicateDigit : Error { using Error::Error; };
struct MissingDigit : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };

// tensor kernel
struct DimensionMismatch : Error { using Error::Error; };
struct EmptyIndexSet : Error { using Error::Error; };
struct SvdFailure : Error { using Error::Error; };

// networks
struct IncompleteGridPoint : Error { using Error::Error; };
struct TreeMismatch : Error { using Error::Error; };
struct OffGridPoint : Error { using Error::Error; };
struct LabelCollision : Error { using Error::Error; };

// tci
struct DegenerateInit : Error { using Error::Error; };

// analysis
struct InsufficientSamples : Error { using Error::Error; };

} // namespace treeten
