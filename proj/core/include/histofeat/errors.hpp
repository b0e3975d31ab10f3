#pragma once

#include <stdexcept>
#include <string>

namespace histofeat {

// Error taxonomy used by the CLI to map failures onto exit categories.
// ConfigError: bad configuration or arguments.
// IoError:     filesystem / file-format problems, message names the file and line/offset.
// DataError:   values that violate a domain precondition (degenerate signal, empty bin, ...).

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace histofeat
