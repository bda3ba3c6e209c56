#pragma once

// Hot loops with an OpenMP version and a serial reference. Both versions
// return identical results; ties are broken by the lowest index.

#include <span>
#include <utility>
#include <vector>

#include "coarselab/covers.hpp"
#include "coarselab/map_record.hpp"

namespace coarselab::kernels {

MultiplicityResult multiplicity(const SpaceGraph& space, const Membership& mem, double R, Metric metric);
MultiplicityResult multiplicity_serial(const SpaceGraph& space, const Membership& mem, double R, Metric metric);

std::vector<Violation> disjointness(const SpaceGraph& space, const Membership& mem, const std::vector<int>& colour,
                                    double r);
std::vector<Violation> disjointness_serial(const SpaceGraph& space, const Membership& mem,
                                           const std::vector<int>& colour, double r);

double diameter(const SpaceGraph& space, std::span<const PointId> set);
double diameter_serial(const SpaceGraph& space, std::span<const PointId> set);

/// counts[c][rho] = |{p in set : d(centers[c], p) <= rho}| for rho = 0..r_max.
std::vector<std::vector<std::size_t>> set_growth(const SpaceGraph& space, std::span<const PointId> set,
                                                 std::span<const PointId> centers, int r_max);
std::vector<std::vector<std::size_t>> set_growth_serial(const SpaceGraph& space, std::span<const PointId> set,
                                                        std::span<const PointId> centers, int r_max);

/// Source and target distances of each pair under f.
void pair_distances(const MapRecord& f, std::span<const std::pair<PointId, PointId>> pairs,
                    std::vector<double>& source, std::vector<double>& target);
void pair_distances_serial(const MapRecord& f, std::span<const std::pair<PointId, PointId>> pairs,
                           std::vector<double>& source, std::vector<double>& target);

}  // namespace coarselab::kernels
