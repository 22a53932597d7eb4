#pragma once

#include <stdexcept>
#include <string>

namespace softfem {

enum class ErrorCode {
  invalid_argument,
  unsupported_degree,
  too_few_elements,
  invalid_index,
  not_positive_definite,
  numerical_failure,
  indefinite_system,
  config_error,
  missing_reference,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

#define SOFTFEM_THROW_IF(cond, code, msg)                      \
  do {                                                         \
    if (cond) throw ::softfem::Error(::softfem::ErrorCode::code, msg); \
  } while (false)

} // namespace softfem
