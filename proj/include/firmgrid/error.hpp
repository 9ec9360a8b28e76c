#pragma once

#include <stdexcept>
#include <string>

namespace firmgrid {

enum class ErrorKind {
    MalformedCsv,
    EmptyInput,
    NonFinite,
    NegativeDemand,
    CapacityFactorRange,
    LengthMismatch,
    StepMismatch,
    KindMismatch,
    WindowOutOfRange,
    InvalidArgument,
    Config,
    Io,
    Infeasible,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace firmgrid
