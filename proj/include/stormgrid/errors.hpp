#pragma once

#include <stdexcept>
#include <string>

namespace stormgrid {

// Input file unreadable or syntactically malformed (bad CSV row, bad JSON).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input parsed but violates a documented invariant (dangling branch, bad range).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Run configuration is incomplete or inconsistent.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A lookup had no match (e.g. no MEOW grid for a basin/category/tide).
class NotFoundError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A linear solve or other numeric routine failed; message carries diagnostics.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operation called on an object in the wrong state (e.g. radii not imputed).
class StateError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace stormgrid
