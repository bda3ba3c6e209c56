#pragma once

#include <cstdint>
#include <vector>

#include "coarselab/space.hpp"

namespace coarselab {

struct MapRecord {
  SpacePtr source;
  SpacePtr target;
  std::vector<PointId> assignment;  // source point -> target point
  Json provenance;
  double measured_lipschitz = 0;
  std::size_t measured_max_fiber = 0;
};

struct MeasureOptions {
  std::size_t pair_cap = 2'000'000;  // adjacent pairs examined before sampling
  std::uint64_t seed = 1;
};

/// Recomputes the Lipschitz constant (over pairs at distance <= the source
/// edge threshold) and the largest fibre.
void measure_map(MapRecord& f, const MeasureOptions& opts = {});

/// Throws Domain when the assignment is not total or points outside the target.
void check_total(const MapRecord& f);

MapRecord identity_map(const SpacePtr& space);
MapRecord compose(const MapRecord& g, const MapRecord& f);  // g after f
/// f_1 x ... x f_k between the products of sources and targets.
MapRecord product_map(const std::vector<const MapRecord*>& maps, const SpacePtr& source_product,
                      const SpacePtr& target_product);

}  // namespace coarselab
