#include "calib/error.hpp"

namespace calib {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::AtomOutOfRange: return "AtomOutOfRange";
    case ErrorCode::NegativeMass: return "NegativeMass";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::TauMismatch: return "TauMismatch";
    case ErrorCode::NotCalibratedWitness: return "NotCalibratedWitness";
    case ErrorCode::NotCalibratedBenchmark: return "NotCalibratedBenchmark";
    case ErrorCode::ParameterOrder: return "ParameterOrder";
    case ErrorCode::ParameterConstraint: return "ParameterConstraint";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
  }
  return "Unknown";
}

}  // namespace calib
