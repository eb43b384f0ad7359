#pragma once

#include <stdexcept>
#include <string>

namespace crossfeat {

enum class Errc {
  bad_argument,
  bad_config,
  bad_schema,
  schema_mismatch,
  missing_label,
  non_binary_label,
  degenerate_column,
  field_mismatch,
  stale_bsum,
  io,
  bad_magic,
  unsupported_version,
  checksum_mismatch,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace crossfeat
