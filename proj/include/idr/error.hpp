#pragma once

#include <stdexcept>
#include <string>

namespace idr {

enum class ErrorCode {
    MalformedRow,
    Duplicate,
    DanglingReference,
    UndefinedInput,
    SampleTooSmall,
    DegenerateSample,
    NotInScope,
    InvalidConfig,
    Io,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. The code lets callers (the CLI in particular)
/// map failures to exit statuses without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace idr
