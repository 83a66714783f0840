#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rosd {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number of the offending row.
struct ParseError : Error {
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

/// A dataset invariant was violated (dangling reference, duplicate or gapped
/// seq, duplicate id, out-of-range score).
struct IntegrityError : Error {
    using Error::Error;
};

/// Bad scenario config, bad flag combination, or missing ground-truth labels.
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem failure (unreadable input, unwritable output).
struct IoError : Error {
    using Error::Error;
};

}  // namespace rosd
