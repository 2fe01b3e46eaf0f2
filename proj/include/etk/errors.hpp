#pragma once

#include <stdexcept>
#include <string>

namespace etk {

// Common base so the CLI can catch toolkit failures in one place and turn
// them into exit codes instead of stack traces.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace etk
