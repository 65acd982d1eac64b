#pragma once

#include <stdexcept>
#include <string>

namespace lanet {

// Base class for all engine errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input file could not be read or violates its documented format.
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally well-formed input that breaks a domain invariant.
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Lookup of a location/activity that does not exist in the graph.
struct NotFoundError : Error {
    explicit NotFoundError(const std::string& what) : Error(what) {}
};

}  // namespace lanet
