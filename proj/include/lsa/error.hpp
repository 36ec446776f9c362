#pragma once

#include <stdexcept>
#include <string>

namespace lsa {

/// Base error for every contract violation raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " at line " + std::to_string(line)), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace lsa
