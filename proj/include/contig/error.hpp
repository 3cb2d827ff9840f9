#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contig {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// A precondition on an argument was violated (empty facet, bad id, k < 3, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_argument"; }
};

/// A combinatorial search or construction exceeded its configured cap.
class CapExceeded : public Error {
public:
    CapExceeded(const std::string& what, std::size_t cap)
        : Error(what + " exceeded cap of " + std::to_string(cap)), cap_(cap) {}
    std::size_t cap() const noexcept { return cap_; }
    const char* kind() const noexcept override { return "cap_exceeded"; }

private:
    std::size_t cap_;
};

/// A vertex assignment is not a simplicial map.
class NotSimplicial : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "not_simplicial"; }
};

/// Input to a persistence computation is not a nested sequence.
class NotNested : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "not_nested"; }
};

/// Malformed input file or JSON document.
class ParseError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "parse_error"; }
};

}  // namespace contig
