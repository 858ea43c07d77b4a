#pragma once
// Error types shared by every module.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace classweave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed classmark text. `offset` is the byte position in the input.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset), reason_(what) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t offset_;
    std::string reason_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

// An operation was handed a notation variant it does not support.
class UnsupportedVariantError : public Error {
public:
    using Error::Error;
};

// Caller broke an operation's precondition (arity, duplicate facet, ...).
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

// Source outside an add-instruction's span.
class OutOfSpanError : public Error {
public:
    using Error::Error;
};

// Cycles or other damage in a parent graph.
class StructuralError : public Error {
public:
    using Error::Error;
};

}  // namespace classweave
