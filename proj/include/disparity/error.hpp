#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace disparity {

enum class ErrorKind {
    MissingColumn,
    UnknownColumn,
    NonBinaryGroup,
    EmptyFile,
    Parse,
    MissingValue,
    ZeroVariance,
    TooFewColumns,
    RankDeficient,
    Separation,
    NotConverged,
    NearZeroDenominator,
    EmptyStratum,
    TooManyLevels,
    EmptyGroup,
    TooManyFailures,
    InvalidB,
    DegenerateInitial,
    UnsupportedMode,
    InvalidSpec,
    Config,
    Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace disparity
