#pragma once

#include <stdexcept>
#include <string>

namespace ifslab {

enum class ErrorKind {
    InvalidParameter,
    InvalidWord,
    HypothesisViolation,  // a named precondition of the renormalization step failed
    Unsupported,
    Parse,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ifslab
