#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kaehler {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  IllConditioned,
  NoNullVector,
  NotFlat,
  ShapeIdViolation,
  NotDegenerate,
  PlaneNotLorentzian,
  HypothesisViolated,
  SearchFailed,
  RecursionFailed,
  BadCorank,
  DegenerateSpan,
  KernelNonzero,
  CurvatureConstraintViolated,
  ChartDomainError,
  NotFlatNormalBundle,
  ReferencePointCoincides,
  NoUmbilicalNormal,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace kaehler
