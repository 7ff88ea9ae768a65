#pragma once

#include <stdexcept>
#include <string>

namespace emofuse {

// Error categories map 1:1 onto CLI exit codes (see FORMATS.md).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (bad header, wrong arity, non-numeric cell, ...). Exit code 2.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates an operation's contract. Exit code 3.
struct ValidationError : Error {
    using Error::Error;
};

// Geometry that leaves an operation undefined (coincident landmarks, zero spans). Exit code 4.
struct GeometryError : Error {
    using Error::Error;
};

inline ParseError parse_error_at(const std::string& file, std::size_t line, const std::string& what) {
    return ParseError(file + ":" + std::to_string(line) + ": " + what);
}

}  // namespace emofuse
