#pragma once

#include <stdexcept>
#include <string>

namespace arps {

enum class ErrorCode {
    InvalidArgument,
    SingularMatrix,
    DeadzoneHit,
    TimeHorizonExceeded,
    BarrierBreached,
    NonFiniteState,
    DomainError,
    ConfigError,
    IoError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API folds them into its status values.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace arps
