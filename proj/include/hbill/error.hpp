#pragma once

#include <stdexcept>
#include <string>

namespace hbill {

enum class ErrorCode {
    NonPositiveNorm,
    UnsupportedParameters,
    PoleParameter,
    AtInfinity,
    NotTangent,
    DegenerateTangency,
    SingularPoint,
    DegenerateReflection,
    DegenerateChord,
    UnsupportedTable,
    ZeroConstantTerm,
    NoTangentDirection,
    InvalidArgument,
    ParseError,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every library failure is one of these.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hbill
