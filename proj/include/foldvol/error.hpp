#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace foldvol {

enum class ErrorKind {
  kMalformedField,
  kMalformedInput,
  kNotFolded,
  kTransversality,
  kIllPosedContraction,
  kOrientation,
  kPathDegeneracy,
  kCollarTooWide,
  kSingularPoint,
  kIncomparable,
  kObstruction,
  kInternalConsistency,
  kIntegration,
  kReduceAmplitude,
  kMonotonicity,
  kParityMismatch,
  kProfileTooWide,
  kWrongParity,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind()` is what callers branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when two folded forms have different regional volumes; carries the
// per-region defects so callers can report them.
class ObstructionError : public Error {
 public:
  ObstructionError(std::vector<double> defects, const std::string& what)
      : Error(ErrorKind::kObstruction, what), defects_(std::move(defects)) {}

  const std::vector<double>& defects() const noexcept { return defects_; }

 private:
  std::vector<double> defects_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kMalformedField: return "malformed-field";
    case ErrorKind::kMalformedInput: return "malformed-input";
    case ErrorKind::kNotFolded: return "not-folded";
    case ErrorKind::kTransversality: return "transversality";
    case ErrorKind::kIllPosedContraction: return "ill-posed-contraction";
    case ErrorKind::kOrientation: return "orientation";
    case ErrorKind::kPathDegeneracy: return "path-degeneracy";
    case ErrorKind::kCollarTooWide: return "collar-too-wide";
    case ErrorKind::kSingularPoint: return "singular-point";
    case ErrorKind::kIncomparable: return "incomparable";
    case ErrorKind::kObstruction: return "obstruction";
    case ErrorKind::kInternalConsistency: return "internal-consistency";
    case ErrorKind::kIntegration: return "integration";
    case ErrorKind::kReduceAmplitude: return "reduce-amplitude";
    case ErrorKind::kMonotonicity: return "monotonicity";
    case ErrorKind::kParityMismatch: return "parity-mismatch";
    case ErrorKind::kProfileTooWide: return "profile-too-wide";
    case ErrorKind::kWrongParity: return "wrong-parity";
  }
  return "unknown";
}

}  // namespace foldvol
