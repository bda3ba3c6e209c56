#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "coarselab/error.hpp"

namespace coarselab {

struct HalfPlane {
  std::vector<double> x;  // horizontal coordinates, one for H^2
  double y = 1.0;
};

struct TreeAddress {
  std::string word;  // letters '0', '1', '2', no letter repeated twice in a row
};

struct Integer {
  std::int64_t n = 0;
};

struct CombNode {
  std::int64_t base = 0;
  std::vector<std::int64_t> offsets;  // one per hair level, each >= 1
  int level() const { return static_cast<int>(offsets.size()); }
};

struct ModelPoint;

struct Tuple {
  std::vector<ModelPoint> parts;
};

struct ModelPoint : std::variant<HalfPlane, TreeAddress, Integer, CombNode, Tuple> {
  using variant::variant;
};

bool is_reduced(const std::string& word);

Json to_json(const ModelPoint& p);
/// Flat textual form used in point CSV exports.
std::string to_text(const ModelPoint& p);

}  // namespace coarselab
