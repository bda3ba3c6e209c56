#include "coarselab/formats.hpp"

#include <sstream>

namespace coarselab {

void expect_kind(const Json& j, const std::string& kind) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, "expected a JSON object");
  if (!j.contains("version") || j.at("version") != kFormatVersion)
    throw Error(ErrorKind::Schema, "unsupported or missing version", Json{{"expected", kFormatVersion}});
  if (!j.contains("kind") || j.at("kind") != kind)
    throw Error(ErrorKind::Schema, "expected a " + kind + " file", Json{{"kind", j.value("kind", Json())}});
}

namespace {

Json pieces_json(const Cover& cover, const ColoredDecomposition* decomp) {
  Json pieces = Json::array();
  for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
    Json p;
    p["id"] = j;
    if (decomp) p["colour"] = decomp->colour[j];
    if (!cover.labels.empty()) p["label"] = cover.labels[j];
    if (decomp && j < decomp->parents.size() && !decomp->parents[j].empty()) p["parents"] = decomp->parents[j];
    p["points"] = cover.pieces[j];
    pieces.push_back(std::move(p));
  }
  return pieces;
}

}  // namespace

Json cover_to_json(const Cover& cover, const Json& provenance) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "cover";
  j["space_ref"] = cover.space->ref();
  j["space"] = cover.space->manifest();
  j["pieces"] = pieces_json(cover, nullptr);
  j["provenance"] = provenance;
  return j;
}

Json decomposition_to_json(const ColoredDecomposition& decomp, const Json& provenance) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "decomposition";
  j["space_ref"] = decomp.space->ref();
  j["space"] = decomp.space->manifest();
  j["r"] = decomp.r;
  j["d"] = decomp.d;
  j["partition"] = decomp.partition;
  j["pieces"] = pieces_json(decomp, &decomp);
  j["provenance"] = provenance;
  return j;
}

LoadedCover cover_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Schema, "expected a JSON object");
  const std::string kind = j.value("kind", "");
  if (kind != "cover" && kind != "decomposition") throw Error(ErrorKind::Schema, "not a cover or decomposition file");
  expect_kind(j, kind);
  LoadedCover out;
  try {
    const SpacePtr space = space_from_manifest(j.at("space"));
    if (space->ref() != j.at("space_ref").get<std::string>())
      throw Error(ErrorKind::Schema, "space_ref does not match the embedded manifest");
    out.coloured = kind == "decomposition";
    auto& d = out.decomp;
    d.space = space;
    bool labelled = false;
    for (const auto& p : j.at("pieces")) {
      d.pieces.push_back(p.at("points").get<PointSet>());
      if (p.contains("label")) labelled = true;
      d.labels.push_back(p.value("label", ""));
      d.colour.push_back(out.coloured ? p.at("colour").get<int>() : 0);
      d.parents.push_back(p.value("parents", std::vector<PieceId>{}));
    }
    if (!labelled) d.labels.clear();
    if (out.coloured) {
      d.r = j.at("r").get<double>();
      d.d = j.at("d").get<int>();
      d.partition = j.at("partition").get<bool>();
    } else {
      d.partition = false;
    }
    out.provenance = j.value("provenance", Json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed cover file: ") + e.what());
  }
  for (const auto& piece : out.decomp.pieces)
    for (PointId p : piece)
      if (p >= out.decomp.space->size()) throw Error(ErrorKind::Schema, "piece point out of range");
  return out;
}

Json map_to_json(const MapRecord& f) {
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "map";
  j["source_ref"] = f.source->ref();
  j["target_ref"] = f.target->ref();
  j["source"] = f.source->manifest();
  j["target"] = f.target->manifest();
  Json pairs = Json::array();
  for (std::size_t p = 0; p < f.assignment.size(); ++p) pairs.push_back(Json::array({p, f.assignment[p]}));
  j["pairs"] = std::move(pairs);
  j["provenance"] = f.provenance;
  j["measured_lipschitz"] = f.measured_lipschitz;
  j["measured_max_fiber"] = f.measured_max_fiber;
  return j;
}

MapRecord map_from_json(const Json& j, const MeasureOptions& opts) {
  expect_kind(j, "map");
  MapRecord f;
  try {
    f.source = space_from_manifest(j.at("source"));
    f.target = space_from_manifest(j.at("target"));
    if (f.source->ref() != j.at("source_ref").get<std::string>() ||
        f.target->ref() != j.at("target_ref").get<std::string>())
      throw Error(ErrorKind::Schema, "space refs do not match the embedded manifests");
    f.assignment.assign(f.source->size(), 0);
    std::vector<bool> seen(f.source->size(), false);
    for (const auto& pr : j.at("pairs")) {
      const auto p = pr.at(0).get<std::size_t>();
      const auto q = pr.at(1).get<PointId>();
      if (p >= f.assignment.size()) throw Error(ErrorKind::Domain, "pair source out of range", Json{{"point", p}});
      f.assignment[p] = q;
      seen[p] = true;
    }
    for (std::size_t p = 0; p < seen.size(); ++p)
      if (!seen[p]) throw Error(ErrorKind::Domain, "map undefined on a source point", Json{{"point", p}});
    f.provenance = j.value("provenance", Json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed map file: ") + e.what());
  }
  measure_map(f, opts);
  return f;
}

std::string points_csv(const SpaceGraph& space) {
  std::ostringstream os;
  os << "index,point\n";
  for (std::size_t p = 0; p < space.size(); ++p)
    os << p << ',' << to_text(space.point(static_cast<PointId>(p))) << '\n';
  return os.str();
}

std::string edges_csv(const SpaceGraph& space) {
  std::ostringstream os;
  os << "u,v\n";
  if (!space.has_edges()) return os.str();
  for (std::size_t p = 0; p < space.size(); ++p)
    for (PointId q : space.neighbors(static_cast<PointId>(p)))
      if (q > p) os << p << ',' << q << '\n';
  return os.str();
}

}  // namespace coarselab
