#ifndef IPDX_ERRORS_HPP
#define IPDX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ipdx {

// Failure categories surfaced by the library.  The CLI maps validation-type
// codes to exit code 2 and numerical-type codes to exit code 3.
enum class Errc {
  ordering_violation,
  beta_out_of_range,
  malformed_transition,
  cycle_not_found,
  dimension_mismatch,
  step_explosion,
  degenerate_denominator,
  not_in_region_vi,
  singular_transform,
  on_separatrix,
  degenerate_exponent,
  unknown_signature,
  bad_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  // Numerical failures (as opposed to input validation ones).
  bool numerical() const noexcept {
    return code_ == Errc::step_explosion || code_ == Errc::cycle_not_found;
  }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ipdx

#endif  // IPDX_ERRORS_HPP
