#ifndef RDTK_ERRORS_HPP
#define RDTK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rdtk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid cache geometry or unsupported parameter combination.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or unreadable input data (trace files, JSON documents).
class IoError : public Error {
public:
    using Error::Error;
};

// A loaded structure violates one of its cross-field invariants.
class IntegrityError : public Error {
public:
    using Error::Error;
};

// Persisted schema version is newer than this build understands.
class VersionError : public Error {
public:
    using Error::Error;
};

} // namespace rdtk

#endif // RDTK_ERRORS_HPP
