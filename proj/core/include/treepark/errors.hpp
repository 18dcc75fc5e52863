#pragma once

#include <stdexcept>
#include <string>

namespace treepark {

enum class Errc {
  NegativeProbability,
  NonCriticalOffspring,
  DegenerateModel,
  InvalidT,
  LengthMismatch,
  InvalidExcursion,
  UnreachableSize,
  NoConvergence,
  NotSubcritical,
  NotSupercritical,
  DegenerateStep,
  InsufficientSupport,
  NewtonDiverged,
  ConfigError,
};

const char* errc_name(Errc code);

/// Domain error carrying one of the Errc codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NegativeProbability: return "NegativeProbability";
    case Errc::NonCriticalOffspring: return "NonCriticalOffspring";
    case Errc::DegenerateModel: return "DegenerateModel";
    case Errc::InvalidT: return "InvalidT";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidExcursion: return "InvalidExcursion";
    case Errc::UnreachableSize: return "UnreachableSize";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotSubcritical: return "NotSubcritical";
    case Errc::NotSupercritical: return "NotSupercritical";
    case Errc::DegenerateStep: return "DegenerateStep";
    case Errc::InsufficientSupport: return "InsufficientSupport";
    case Errc::NewtonDiverged: return "NewtonDiverged";
    case Errc::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace treepark
