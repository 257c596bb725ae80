#pragma once

#include "thinlat/volume.hpp"

#include "json.hpp"

#include <string>

namespace thinlat {

using json = nlohmann::json;

inline constexpr const char* kSchema = "thinlat/1";

// Parses a body descriptor; ValidationError names the offending field with
// its path (e.g. "body.inner.A").
BodyDescriptor parse_body(const json& j, const std::string& path = "body");
json body_to_json(const BodyDescriptor& d);

// {"basis": [[...], ...]}: each inner array is one basis vector (column).
// Entries may be numbers or decimal/rational strings such as "1/3".
LatticeBasis parse_lattice(const json& j, const std::string& path = "lattice");
json lattice_to_json(const LatticeBasis& L);

json covering_to_json(const CoveringLattice& c);
CoveringLattice covering_from_json(const json& j);

// Reads a JSON file; ValidationError(field) on I/O or syntax errors.
json read_json_file(const std::string& file, const std::string& field);

}  // namespace thinlat
