#include "kaehler/error.hpp"

namespace kaehler {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NoNullVector: return "NoNullVector";
    case ErrorCode::NotFlat: return "NotFlat";
    case ErrorCode::ShapeIdViolation: return "ShapeIdViolation";
    case ErrorCode::NotDegenerate: return "NotDegenerate";
    case ErrorCode::PlaneNotLorentzian: return "PlaneNotLorentzian";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::RecursionFailed: return "RecursionFailed";
    case ErrorCode::BadCorank: return "BadCorank";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::KernelNonzero: return "KernelNonzero";
    case ErrorCode::CurvatureConstraintViolated: return "CurvatureConstraintViolated";
    case ErrorCode::ChartDomainError: return "ChartDomainError";
    case ErrorCode::NotFlatNormalBundle: return "NotFlatNormalBundle";
    case ErrorCode::ReferencePointCoincides: return "ReferencePointCoincides";
    case ErrorCode::NoUmbilicalNormal: return "NoUmbilicalNormal";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace kaehler
