#include "disparity/error.hpp"

namespace disparity {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::MissingColumn: return "MissingColumn";
    case ErrorKind::UnknownColumn: return "UnknownColumn";
    case ErrorKind::NonBinaryGroup: return "NonBinaryGroup";
    case ErrorKind::EmptyFile: return "EmptyFile";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::MissingValue: return "MissingValue";
    case ErrorKind::ZeroVariance: return "ZeroVariance";
    case ErrorKind::TooFewColumns: return "TooFewColumns";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::Separation: return "Separation";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NearZeroDenominator: return "NearZeroDenominator";
    case ErrorKind::EmptyStratum: return "EmptyStratum";
    case ErrorKind::TooManyLevels: return "TooManyLevels";
    case ErrorKind::EmptyGroup: return "EmptyGroup";
    case ErrorKind::TooManyFailures: return "TooManyFailures";
    case ErrorKind::InvalidB: return "InvalidB";
    case ErrorKind::DegenerateInitial: return "DegenerateInitial";
    case ErrorKind::UnsupportedMode: return "UnsupportedMode";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

}  // namespace disparity
