#pragma once

#include <stdexcept>
#include <string>

namespace xg {

/// Error categories surfaced by the library. The CLI maps them to exit codes:
/// validation-type errors -> 2, cap errors -> 3, I/O errors -> 4.
enum class errc {
  dimension_mismatch,
  not_a_sign,
  not_a_distribution,
  index_out_of_range,
  empty_subset,
  exact_cap_exceeded,
  dp_cap_exceeded,
  oracle_cap_exceeded,
  bad_stability_index,
  bad_dimensions,
  degenerate_delta,
  block_too_large,
  not_a_partition,
  inconsistent_inputs,
  bad_argument,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline bool is_cap_error(errc c) {
  return c == errc::exact_cap_exceeded || c == errc::dp_cap_exceeded ||
         c == errc::oracle_cap_exceeded;
}

inline int exit_code_for(errc c) {
  if (is_cap_error(c)) return 3;
  if (c == errc::io_error) return 4;
  return 2;
}

}  // namespace xg
