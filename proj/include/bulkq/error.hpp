#pragma once

#include <stdexcept>
#include <string>

namespace bulkq {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,
  Unstable = 3,
  NoConvergence = 4,
  IllConditioned = 5,
  Parse = 6,
  Unsupported = 7,
};

// Single exception type for the library; the code is what the C API reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace bulkq
