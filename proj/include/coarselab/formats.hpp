#pragma once

#include <string>

#include "coarselab/covers.hpp"
#include "coarselab/map_record.hpp"

namespace coarselab {

inline constexpr int kFormatVersion = 1;

/// Cover file: space_ref, the space manifest, pieces with points (and colour,
/// label, parents for decompositions), r, d, partition, provenance.
Json cover_to_json(const Cover& cover, const Json& provenance = Json::object());
Json decomposition_to_json(const ColoredDecomposition& decomp, const Json& provenance = Json::object());

struct LoadedCover {
  ColoredDecomposition decomp;  // colour/r/d meaningful only when `coloured`
  bool coloured = false;
  Json provenance;
};

/// Rebuilds the space from the embedded manifest and checks it against space_ref.
LoadedCover cover_from_json(const Json& j);

/// Map file: source_ref, target_ref, both manifests, assignment pairs, provenance.
Json map_to_json(const MapRecord& f);
/// Measured fields are recomputed, never read from the file.
MapRecord map_from_json(const Json& j, const MeasureOptions& opts = {});

std::string points_csv(const SpaceGraph& space);  // index,point
std::string edges_csv(const SpaceGraph& space);   // u,v with u < v

/// Throws Schema unless j is an object with the expected version and kind.
void expect_kind(const Json& j, const std::string& kind);

}  // namespace coarselab
