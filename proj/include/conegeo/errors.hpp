#pragma once

#include <stdexcept>
#include <string>

namespace conegeo {

enum class ErrorCode {
  InvalidArgument,
  SpaceMismatch,
  Degenerate,
  InfinitePoint,
  UnsupportedGauge,
  NonConserved,
  Schema,
  Io,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; `code()` carries the category and
/// `object_id()` the scene object that triggered it, when known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::string object_id = {})
      : std::runtime_error(what), code_(code), object_id_(std::move(object_id)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& object_id() const noexcept { return object_id_; }

 private:
  ErrorCode code_;
  std::string object_id_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace conegeo
