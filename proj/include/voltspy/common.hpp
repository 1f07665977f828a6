#pragma once

#include <stdexcept>
#include <string>

namespace voltspy {

// Malformed or inconsistent input data (CSV rows, labels, invariant
// violations). Maps to exit code 1 in the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Bad invocation: unknown objective, invalid flag combination. Exit code 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace voltspy
