#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace btz {

enum class errc {
  invalid_isometry,
  singular_point,
  out_of_range,
  degenerate_measure,
  malformed,
  certification_failure,
  mismatch,
  not_btz_extendable,
  precondition,
  gluing_mismatch,
  io,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_isometry: return "invalid-isometry";
    case errc::singular_point: return "singular-point";
    case errc::out_of_range: return "out-of-range";
    case errc::degenerate_measure: return "degenerate-measure";
    case errc::malformed: return "malformed";
    case errc::certification_failure: return "certification-failure";
    case errc::mismatch: return "mismatch";
    case errc::not_btz_extendable: return "not-btz-extendable";
    case errc::precondition: return "precondition";
    case errc::gluing_mismatch: return "gluing-mismatch";
    case errc::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it without string matching.
class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace btz
