#pragma once

#include <stdexcept>
#include <string>

namespace cyclo {

enum class ErrorKind {
    InvalidModulus,
    InvalidScale,
    InvalidDirection,
    InvalidInput,
    ModulusMismatch,
    Overflow,
    CapExceeded,
    NotDivisible,
    UndefinedDivisors,
    UseRemainderMethod,
    Inapplicable,
    Internal,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace cyclo
