#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace relunif {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// Malformed user input other than formula syntax: models, derivations, substitutions.
class InputError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class UnsupportedInput : public Error {
public:
    using Error::Error;
};

}  // namespace relunif
