#pragma once

#include <stdexcept>
#include <string>

namespace scnperf {

/// Argument outside the mathematical domain of an operation (negative distance, r = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed or physically invalid configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not reach its accuracy target.
///
/// Carries whatever partial value was available together with the error
/// actually achieved, so callers can report or accept a degraded answer.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double partial_result, double achieved_error)
        : std::runtime_error(what), partial_(partial_result), achieved_(achieved_error) {}

    double partial_result() const noexcept { return partial_; }
    double achieved_error() const noexcept { return achieved_; }

private:
    double partial_;
    double achieved_;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_domain(bool ok, const char* message) {
    if (!ok) throw DomainError(message);
}

inline void require_config(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace detail
}  // namespace scnperf
