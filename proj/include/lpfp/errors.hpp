#pragma once

#include <stdexcept>
#include <string>

namespace lpfp {

// Raised for malformed run configurations. `line` is 0 when the problem is not
// tied to a specific line of the input file.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class CflError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lpfp
