#pragma once

#include <vector>

#include "coarselab/covers.hpp"
#include "coarselab/map_record.hpp"
#include "coarselab/tiling.hpp"

namespace coarselab {

/// (x_1, ..., x_{d-1}; y) -> ((x_1; y), ..., (x_{d-1}; y)), each coordinate
/// snapped to its nearest factor net point. `product` is the l1 product of
/// the factors; built here when null.
MapRecord brady_farb(const SpacePtr& source, const std::vector<SpacePtr>& factors, SpacePtr product = nullptr,
                     const MeasureOptions& measure = {});

/// Pullback under f of the product of the factor decompositions, computed
/// per source point without enumerating the product window. Pieces are the
/// non-empty preimages of P_1 x ... x P_k per shared colour.
ColoredDecomposition pullback_product(const MapRecord& f, const std::vector<const ColoredDecomposition*>& factors);

struct HdCoverOptions {
  int dim = 3;
  double window_radius = 8;  // of the H^d net; factor nets get one more
  double r = 1;              // tiling parameter
  double sep = 1;
  MeasureOptions measure{};
};

struct HdCover {
  Tiling tiling;
  SpacePtr factor_net;
  ColoredDecomposition factor_decomposition;  // after amplification
  MapRecord alpha;
  ColoredDecomposition decomposition;
};

HdCover hd_cover(const HdCoverOptions& opts);

}  // namespace coarselab
