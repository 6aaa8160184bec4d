#ifndef MOLLIFEM_ERRORS_HPP
#define MOLLIFEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mollifem {

/// Base class of every exception thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments or configuration was violated.
struct ValidationError : Error {
    using Error::Error;
};

/// A quadratic (P2) design was requested with an even node count.
struct EvenNodeCount : ValidationError {
    using ValidationError::ValidationError;
};

/// A kernel whose zeroth moment is not 1 cannot act as a smoothing weight.
struct NotAProbabilityWeight : ValidationError {
    using ValidationError::ValidationError;
};

/// All kernel moments up to the search cap vanish; the order is undefined.
struct OrderCapExceeded : ValidationError {
    using ValidationError::ValidationError;
};

/// Problems locating or reading a configuration file.
struct ConfigError : Error {
    using Error::Error;
};

struct MissingFile : ConfigError {
    using ConfigError::ConfigError;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

/// Failure writing results to disk or standard output.
struct IoError : Error {
    using Error::Error;
};

} // namespace mollifem

#endif
