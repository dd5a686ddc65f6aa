#pragma once

#include <json.hpp>
#include <string>

#include "secrd/grid_code.hpp"
#include "secrd/secure_code.hpp"

namespace secrd {

inline constexpr int kArtifactVersion = 1;

// Layout: magic line, 8-byte little-endian header length, JSON header, binary tables.
// Table offsets in the header are relative to the first table byte.
std::string single_type_artifact(const SingleTypeCode& code, const nlohmann::json& params);
std::string grid_artifact(const GridCode& code, const nlohmann::json& params);

struct ArtifactView {
  nlohmann::json header;
  std::string tables;
};

// Throws std::runtime_error on a bad magic line, version, or truncated payload.
ArtifactView read_artifact(const std::string& bytes);

nlohmann::json codebook_summary(const PackingCodebook& book);

}  // namespace secrd
