#pragma once

#include <stdexcept>
#include <string>

namespace plimit {

enum class ErrorKind {
  invalid_argument,
  degenerate_domain,
  no_positive_region,
  no_negative_region,
  infeasible_packing,
  ball_outside_domain,
  seed_failure,
  grid_mismatch,
  config,
  io,
};

/// Exception carrying a category so the CLI can map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) fail(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace plimit
