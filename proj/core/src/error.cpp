#include "crossfeat/error.hpp"

namespace crossfeat {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_argument: return "BadArgument";
    case Errc::bad_config: return "BadConfig";
    case Errc::bad_schema: return "BadSchema";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::missing_label: return "MissingLabel";
    case Errc::non_binary_label: return "NonBinaryLabel";
    case Errc::degenerate_column: return "DegenerateColumn";
    case Errc::field_mismatch: return "FieldMismatch";
    case Errc::stale_bsum: return "StaleBsum";
    case Errc::io: return "IoError";
    case Errc::bad_magic: return "BadMagic";
    case Errc::unsupported_version: return "UnsupportedVersion";
    case Errc::checksum_mismatch: return "ChecksumMismatch";
  }
  return "UnknownError";
}

}  // namespace crossfeat
