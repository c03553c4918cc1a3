#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ftattn/nn.hpp"
#include "ftattn/types.hpp"

namespace ftattn {

/// Versioned flat container of named float64 arrays.
///
/// Layout: 8-byte magic "FTATTN\x01\n", uint32 little-endian manifest
/// length, a JSON manifest {"version", "meta", "arrays": [{"name",
/// "rows", "cols", "offset"}]}, then the raw column-major float64 blob.
/// Offsets count doubles from the start of the blob.
void save_checkpoint(const std::string& path, const std::vector<ParamRef>& refs,
                     const nlohmann::json& meta);

/// Loads into the given parameter layout. Every manifest entry must match
/// an expected array's name and shape exactly; anything else is an input
/// error. Returns the stored meta block.
nlohmann::json load_checkpoint(const std::string& path, const std::vector<ParamRef>& refs);

/// Reads only the manifest meta block.
nlohmann::json read_checkpoint_meta(const std::string& path);

}  // namespace ftattn
