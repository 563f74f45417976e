#pragma once

#include <stdexcept>
#include <string>

namespace knapp {

enum class ErrorCode {
  NotOrthogonal,
  ClosureNotReached,
  NotFreeAction,
  SingularBasis,
  LatticeNotPreserved,
  StabilizerNotCyclicRotations,
  NoBasePoint,
  SearchExhausted,
  NoPeriodFound,
  NotOnSphere,
  KNotMultipleOfM,
  CertificationFailed,
  DegenerateLattice,
  WindowViolated,
  NotCertified,
  DeltaOutOfRange,
  SeparationNotReached,
  NotConverged,
  ResolutionTooCoarse,
  TubeNotEmbedded,
  FrequencyCollisionUnresolved,
  QOutOfRange,
  TooFewPoints,
  NonPositiveValue,
  IoFailure,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::ClosureNotReached: return "ClosureNotReached";
    case ErrorCode::NotFreeAction: return "NotFreeAction";
    case ErrorCode::SingularBasis: return "SingularBasis";
    case ErrorCode::LatticeNotPreserved: return "LatticeNotPreserved";
    case ErrorCode::StabilizerNotCyclicRotations: return "StabilizerNotCyclicRotations";
    case ErrorCode::NoBasePoint: return "NoBasePoint";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::NoPeriodFound: return "NoPeriodFound";
    case ErrorCode::NotOnSphere: return "NotOnSphere";
    case ErrorCode::KNotMultipleOfM: return "KNotMultipleOfM";
    case ErrorCode::CertificationFailed: return "CertificationFailed";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::WindowViolated: return "WindowViolated";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::SeparationNotReached: return "SeparationNotReached";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::TubeNotEmbedded: return "TubeNotEmbedded";
    case ErrorCode::FrequencyCollisionUnresolved: return "FrequencyCollisionUnresolved";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace knapp
