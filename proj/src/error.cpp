#include "logmeasure/error.hpp"

namespace logmeasure {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInterval: return "MalformedInterval";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::OverlapError: return "OverlapError";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonpositiveDistance: return "NonpositiveDistance";
    case ErrorCode::DiscontinuousInput: return "DiscontinuousInput";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::DegenerateModulus: return "DegenerateModulus";
    case ErrorCode::BadBeta: return "BadBeta";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::EmptyMeasure: return "EmptyMeasure";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::AtomOnGrid: return "AtomOnGrid";
    case ErrorCode::RegionOutsideGrid: return "RegionOutsideGrid";
    case ErrorCode::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace logmeasure
