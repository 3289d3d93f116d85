#include "inkscreen/error.hpp"

namespace inkscreen {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::EmptySession: return "EmptySession";
    case ErrorCode::EvenWindow: return "EvenWindow";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NoRows: return "NoRows";
    case ErrorCode::EmptyLabels: return "EmptyLabels";
    case ErrorCode::BadAlpha: return "BadAlpha";
    case ErrorCode::BadC: return "BadC";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadDepth: return "BadDepth";
    case ErrorCode::BadMaxFeatures: return "BadMaxFeatures";
    case ErrorCode::BadKernel: return "BadKernel";
    case ErrorCode::BadGamma: return "BadGamma";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::TooFewPerClass: return "TooFewPerClass";
    case ErrorCode::DegenerateAUC: return "DegenerateAUC";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::TooFew: return "TooFew";
    case ErrorCode::BadPermCount: return "BadPermCount";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::BundleVersionMismatch: return "BundleVersionMismatch";
    case ErrorCode::RegistryHashMismatch: return "RegistryHashMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace inkscreen
