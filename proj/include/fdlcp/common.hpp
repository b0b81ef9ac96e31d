#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdlcp {

using cd = std::complex<double>;

// Invalid parameters or inconsistent dimensions supplied by the caller.
// CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// File-format or filesystem failure. CLI maps this to exit code 4.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace fdlcp
