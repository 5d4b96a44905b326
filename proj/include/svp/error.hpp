#pragma once

#include <stdexcept>
#include <string>

namespace svp {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateGeometry,
  kDegenerateScale,
  kDegenerateAlignment,
  kOrientationFlip,
  kFormat,
  kCorruptTable,
  kIo,
  kConsistency,
};

const char* ToString(ErrorCode code);

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto svp_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define SVP_CHECK_ARG(cond, msg)                                  \
  do {                                                            \
    if (!(cond)) {                                                \
      throw ::svp::Error(::svp::ErrorCode::kInvalidArgument, msg); \
    }                                                             \
  } while (0)

}  // namespace svp
