#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mpk {

enum class ErrorCode {
  InvalidArgument,
  NotSymplectic,
  NonSymmetricInput,
  SingularInput,
  DimensionCollapse,
  DegenerateGeometry,
  IllConditionedSplit,
  GridMismatch,
  ConditionsViolated,
  FreeBlock,
  InsufficientSupport,
  DegenerateTime,
  ConditioningGuard,
  NonIsotropic,
  Io,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

// Non-fatal numerical warnings (alias risk and friends). Callers that care
// pass a sink; everyone else passes nullptr.
struct Warning {
  std::string kind;
  std::string message;
};

class WarningSink {
public:
  void emit(std::string kind, std::string message) {
    items_.push_back({std::move(kind), std::move(message)});
  }
  const std::vector<Warning>& items() const { return items_; }
  bool empty() const { return items_.empty(); }
  void clear() { items_.clear(); }

private:
  std::vector<Warning> items_;
};

inline void warn(WarningSink* sink, const char* kind, const std::string& msg) {
  if (sink) sink->emit(kind, msg);
}

}  // namespace mpk
