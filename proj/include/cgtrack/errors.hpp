#pragma once

#include <stdexcept>
#include <string>

namespace cgtrack {

// Invalid input: malformed files, bad configuration, contract misuse.
// The CLI maps this to exit code 1; any other exception exits 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cgtrack
