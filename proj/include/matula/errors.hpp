#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matula {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation needs a prime (or a 64-bit value) beyond the configured cap.
class overflow_error : public error {
public:
    using error::error;
};

/// An argument is outside the operation's domain (non-prime, empty range, ...).
class domain_error : public error {
public:
    using error::error;
};

/// Malformed bracket string; offset is the byte position of the fault.
class syntax_error : public domain_error {
public:
    syntax_error(const std::string& what, std::size_t offset)
        : domain_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

} // namespace matula
