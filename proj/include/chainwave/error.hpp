#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chainwave {

enum class ErrorKind {
  InvalidArgument,
  GridMismatch,
  DomainTooSmall,
  NotEven,
  NearSingular,
  NoConvergence,
  EmptyWindow,
  WindowOverflow,
  ConfigError,
  IoError,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::NotEven: return "NotEven";
    case ErrorKind::NearSingular: return "NearSingular";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::WindowOverflow: return "WindowOverflow";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace chainwave
