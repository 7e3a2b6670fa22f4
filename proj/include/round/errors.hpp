#pragma once

#include <stdexcept>
#include <string>

namespace roundsim {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A numeric or structural argument is outside its documented domain.
struct InvalidParameter : Error {
    using Error::Error;
};

/// Lookup of a vehicle id that is not part of the world.
struct NotFound : Error {
    using Error::Error;
};

/// Fewer than two participants; detection cannot compare anything.
struct NoQuorum : Error {
    using Error::Error;
};

/// Every vehicle in the world is rogue; no guard candidate exists.
struct NoEligibleGuard : Error {
    using Error::Error;
};

/// Malformed frame on decode, or a message that cannot fit the fixed frame.
struct CodecError : Error {
    using Error::Error;
};

/// An operation was invoked outside its timing contract.
struct ContractViolation : Error {
    using Error::Error;
};

/// Scenario file could not be parsed or validated.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace roundsim
