#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coarselab/map_record.hpp"

namespace coarselab {

/// Length of the depth-first closed walk around the rooted binary tree of depth k.
std::int64_t closed_walk_length(int k);

/// Spine range needed so that segments cover [-n_max, n_max].
int walk_spine_for(std::int64_t n_max);

/// Words W(-n_max), ..., W(n_max) of the walk Z -> T3.
std::vector<std::string> tree_walk_words(std::int64_t n_max);

/// The walk as a map from [-n_max, n_max] onto the tree window it visits.
MapRecord tree_walk(std::int64_t n_max);

}  // namespace coarselab
