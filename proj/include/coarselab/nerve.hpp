#pragma once

#include <utility>
#include <vector>

#include "coarselab/covers.hpp"

namespace coarselab {

struct NerveComplex {
  std::size_t vertices = 0;                                          // one per cover piece
  std::vector<std::vector<PieceId>> simplices;                       // distinct supports, sorted
  std::vector<std::vector<std::pair<PieceId, double>>> coordinates;  // per point, by piece id
  int dimension = 0;                                                 // multiplicity - 1
};

/// phi_U(x) = d(x, X \ U) / sum_V d(x, X \ V) with graph distances; a piece
/// with no reachable complement uses `cap` for its distances.
NerveComplex nerve_map(const Cover& cover, double cap = 1e6);

/// Largest l2 distance between the coordinate vectors of adjacent points.
double nerve_lipschitz(const NerveComplex& nerve, const SpaceGraph& space);

Json nerve_to_json(const NerveComplex& nerve);

}  // namespace coarselab
