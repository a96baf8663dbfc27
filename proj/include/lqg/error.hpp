#pragma once

#include <stdexcept>
#include <string>

namespace lqg {

enum class ErrorKind {
  InvalidSpec,
  Domain,
  Precondition,
  InsufficientProbes,
  EmptyRegion,
  Convergence,
  Resolution,
  Io,
  Config,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that the CLI can map
/// it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace lqg
