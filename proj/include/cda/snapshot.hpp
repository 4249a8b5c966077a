#pragma once
/**
 * Field snapshots: one header line
 *     CDAFLD v1 <name> <nx> <ny> <nz> <lx> <ly>
 * followed by nx·ny·nz little-endian doubles in storage order (x fastest).
 */

#include <filesystem>
#include <string>

#include "cda/grid.hpp"

namespace cda {

struct Snapshot {
  std::string name;
  ScalarField field;
};

void write_snapshot(const std::filesystem::path& path, const std::string& name, const ScalarField& f);
/// The header does not carry the lateral condition; it is supplied by the caller.
Snapshot read_snapshot(const std::filesystem::path& path, HorizontalBC bc = HorizontalBC::Walls);

}  // namespace cda
