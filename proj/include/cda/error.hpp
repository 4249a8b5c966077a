#pragma once

#include <stdexcept>
#include <string>

namespace cda {

// Error codes below 200 are validation failures (CLI exit 1); codes from 200
// on are numerical failures (CLI exit 2).
class Error : public std::runtime_error {
 public:
  Error(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  [[nodiscard]] int code() const noexcept { return code_; }

 private:
  int code_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, int code = 100) : Error(code, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, int code = 200) : Error(code, what) {}
};

namespace errc {
inline constexpr int kInvalidArgument = 100;
inline constexpr int kFileNotFound = 101;
inline constexpr int kConfigSyntax = 102;
inline constexpr int kUnknownKey = 103;
inline constexpr int kConstraint = 104;
inline constexpr int kUsage = 105;
inline constexpr int kGridMismatch = 106;
inline constexpr int kIo = 107;
inline constexpr int kNonConvergence = 201;
inline constexpr int kCfl = 202;
inline constexpr int kStability = 203;
inline constexpr int kNonFinite = 204;
inline constexpr int kThermoStability = 205;
}  // namespace errc

}  // namespace cda
