#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wtower {

// Stable, machine-readable failure categories. The CLI prints the tag of
// each and maps parse-type errors to exit code 2, everything else to 1.
enum class ErrorCode {
  syntax,
  label_out_of_range,
  malformed_twisted,
  invalid_argument,
  mismatched_index_count,
  order_mismatch,
  odd_coefficient,
  not_primitive,
  bracket_nonzero,
  generator_not_found,
  order_zero_collapse,
  no_such_vertex,
  hypothesis_violation,
  io,
};

constexpr std::string_view error_tag(ErrorCode code) {
  switch (code) {
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::label_out_of_range: return "label-out-of-range";
    case ErrorCode::malformed_twisted: return "malformed-twisted";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::mismatched_index_count: return "mismatched-index-count";
    case ErrorCode::order_mismatch: return "order-mismatch";
    case ErrorCode::odd_coefficient: return "odd-coefficient";
    case ErrorCode::not_primitive: return "not-primitive";
    case ErrorCode::bracket_nonzero: return "bracket-nonzero";
    case ErrorCode::generator_not_found: return "generator-not-found";
    case ErrorCode::order_zero_collapse: return "order-zero-collapse";
    case ErrorCode::no_such_vertex: return "no-such-vertex";
    case ErrorCode::hypothesis_violation: return "hypothesis-violation";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

constexpr bool is_parse_error(ErrorCode code) {
  return code == ErrorCode::syntax || code == ErrorCode::label_out_of_range ||
         code == ErrorCode::malformed_twisted || code == ErrorCode::invalid_argument;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view tag() const noexcept { return error_tag(code_); }

 private:
  ErrorCode code_;
};

// Parse failure carrying the byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& what, std::size_t position)
      : Error(code, what + " at position " + std::to_string(position)), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace wtower
