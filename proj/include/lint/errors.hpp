#pragma once

#include <stdexcept>
#include <string>

namespace lint {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wire-format violations.
struct InvariantViolation : Error {
    using Error::Error;
};
struct TruncatedHeader : Error {
    using Error::Error;
};
struct MalformedSlot : Error {
    using Error::Error;
};

// State-store violations.
struct InvalidSize : Error {
    using Error::Error;
};

// Switch pipeline violations.
struct TtlInversion : Error {
    using Error::Error;
};
struct UnexpectedHeaderAtSource : Error {
    using Error::Error;
};

// Collector violations.
struct InconsistentHop : Error {
    using Error::Error;
};

// Routing.
struct Unreachable : Error {
    using Error::Error;
};

// Analytic oracles.
struct DivisionByZero : Error {
    using Error::Error;
};

// Scenario / CLI configuration. `field` is the dotted path of the offending
// config entry, e.g. "flows[3].src_node".
struct ConfigError : Error {
    ConfigError(std::string field_path, const std::string& what)
        : Error(field_path + ": " + what), field(std::move(field_path)) {}
    std::string field;
};

}  // namespace lint
