#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace devil {

enum class ErrorKind {
  Format,
  TooFewFrames,
  Inconsistency,
  Validation,
  MissingInput,
  UndefinedSimilarity,
  UndefinedMetric,
  Underdetermined,
  Tool,
  Io,
  Parse,
  Transport,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format";
    case ErrorKind::TooFewFrames: return "too-few-frames";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::MissingInput: return "missing-input";
    case ErrorKind::UndefinedSimilarity: return "undefined-similarity";
    case ErrorKind::UndefinedMetric: return "undefined-metric";
    case ErrorKind::Underdetermined: return "underdetermined";
    case ErrorKind::Tool: return "tool";
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Transport: return "transport";
  }
  return "unknown";
}

/// Every failure raised by the library. The kind is stable and is what
/// callers (and the batch pipeline's failure records) switch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace devil
