#include "coarselab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "coarselab/analysis.hpp"
#include "coarselab/bradyfarb.hpp"
#include "coarselab/formats.hpp"
#include "coarselab/geometries.hpp"
#include "coarselab/io.hpp"
#include "coarselab/nerve.hpp"
#include "coarselab/tiling.hpp"
#include "coarselab/walk.hpp"

namespace coarselab {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Schema: return 2;
    case ErrorKind::Size: return 3;
    case ErrorKind::Invariant: return 4;
    case ErrorKind::Truncation: return 5;
    default: return 1;
  }
}

// Outputs of one command plus the manifest describing how to redo it.
struct Run {
  fs::path out = ".";
  std::uint64_t seed = 1;
  std::string command;
  std::vector<std::string> argv;
  Json parameters = Json::object();
  Json inputs = Json::array();
  Json outputs = Json::array();

  Json load(const std::string& path) {
    Json j = read_json_file(path);
    inputs.push_back(Json{{"path", path}, {"sha256", sha256_file(path)}});
    return j;
  }

  void emit(const std::string& name, const std::string& text) {
    fs::create_directories(out);
    write_text_file(out / name, text);
    outputs.push_back(Json{{"path", name}, {"sha256", sha256_hex(text)}});
  }
  void emit_json(const std::string& name, const Json& j) { emit(name, dump_json(j)); }

  void finish(int code) const {
    Json m;
    m["version"] = 1;
    m["kind"] = "run";
    m["command"] = command;
    m["argv"] = argv;
    m["cwd"] = fs::current_path().string();
    m["out"] = out.string();
    m["inputs"] = inputs;
    m["parameters"] = parameters;
    m["seed"] = seed;
    m["outputs"] = outputs;
    m["exit_code"] = code;
    m["tool_version"] = kToolVersion;
    fs::create_directories(out);
    write_text_file(out / "run.json", dump_json(m));
  }
};

// ---------------------------------------------------------------------------
// Loading

struct Target {
  std::string kind;  // space, cover, decomposition, map
  SpacePtr space;
  std::optional<LoadedCover> cover;
  std::optional<MapRecord> map;
};

Json space_file(const SpaceGraph& space) {
  std::map<std::size_t, std::size_t> histogram;
  if (space.has_edges())
    for (std::size_t p = 0; p < space.size(); ++p) ++histogram[space.neighbors(static_cast<PointId>(p)).size()];
  Json hist = Json::array();
  for (const auto& [deg, count] : histogram) hist.push_back(Json::array({deg, count}));
  Json j;
  j["version"] = kFormatVersion;
  j["kind"] = "space";
  j["ref"] = space.ref();
  j["manifest"] = space.manifest();
  j["summary"] = Json{{"points", space.size()},
                      {"edges", space.edge_count()},
                      {"degree_bound", space.degree_bound()},
                      {"degree_histogram", hist}};
  return j;
}

SpacePtr space_from_file_json(const Json& j) {
  if (j.is_object() && j.contains("model")) return space_from_manifest(j);
  expect_kind(j, "space");
  return space_from_manifest(j.at("manifest"));
}

Target load_target(Run& run, const std::string& path, const MeasureOptions& measure) {
  const Json j = run.load(path);
  if (!j.is_object()) throw Error(ErrorKind::Schema, "expected a JSON object in " + path);
  Target t;
  if (j.contains("model")) {
    t.kind = "space";
    t.space = space_from_manifest(j);
    return t;
  }
  t.kind = j.value("kind", "");
  if (t.kind == "space") {
    t.space = space_from_file_json(j);
  } else if (t.kind == "cover" || t.kind == "decomposition") {
    t.cover = cover_from_json(j);
    t.space = t.cover->decomp.space;
  } else if (t.kind == "map") {
    t.map = map_from_json(j, measure);
    t.space = t.map->source;
  } else {
    throw Error(ErrorKind::Schema, "unknown file kind '" + t.kind + "' in " + path);
  }
  return t;
}

const LoadedCover& need_cover(const Target& t, const std::string& what) {
  if (!t.cover) throw UsageError(what + " needs a cover or decomposition file");
  return *t.cover;
}

const ColoredDecomposition& need_decomposition(const Target& t, const std::string& what) {
  if (!t.cover || !t.cover->coloured) throw UsageError(what + " needs a decomposition file");
  return t.cover->decomp;
}

const MapRecord& need_map(const Target& t, const std::string& what) {
  if (!t.map) throw UsageError(what + " needs a map file");
  return *t.map;
}

// "origin", or an integer: the value itself on integer windows, the point index elsewhere.
PointId resolve_point(const SpaceGraph& s, const std::string& spec) {
  const Geometry& g = s.geometry();
  const auto* z = dynamic_cast<const IntegerGeometry*>(&g);
  if (spec == "origin") {
    if (z) {
      if (z->lo() > 0 || z->hi() < 0) throw Error(ErrorKind::Domain, "window does not contain 0");
      return z->id_of(0);
    }
    if (const auto* t = dynamic_cast<const TreeGeometry*>(&g)) {
      const auto id = t->find("");
      if (id < 0) throw Error(ErrorKind::Domain, "window does not contain the root");
      return static_cast<PointId>(id);
    }
    if (const auto* c = dynamic_cast<const CombGeometry*>(&g)) return c->origin();
    if (const auto* h = dynamic_cast<const HalfSpaceGeometry*>(&g)) {
      const std::vector<double> x(static_cast<std::size_t>(h->dim() - 1), 0.0);
      return h->nearest(x, 1.0);
    }
    if (const auto* p = dynamic_cast<const ProductGeometry*>(&g)) {
      std::vector<PointId> parts;
      for (std::size_t i = 0; i < p->arity(); ++i) parts.push_back(resolve_point(p->factor(i), "origin"));
      return p->compose(parts);
    }
    return 0;
  }
  std::int64_t v = 0;
  try {
    std::size_t used = 0;
    v = std::stoll(spec, &used);
    if (used != spec.size()) throw std::invalid_argument(spec);
  } catch (const std::exception&) {
    throw UsageError("bad point '" + spec + "': use origin or an integer");
  }
  if (z) {
    if (v < z->lo() || v > z->hi()) throw Error(ErrorKind::Domain, "point outside the window", Json{{"value", v}});
    return z->id_of(v);
  }
  if (v < 0 || static_cast<std::size_t>(v) >= s.size())
    throw Error(ErrorKind::Index, "point index out of range", Json{{"index", v}});
  return static_cast<PointId>(v);
}

// ---------------------------------------------------------------------------
// Checks

struct CheckSpec {
  std::string name;
  std::map<std::string, std::string> params;
};

CheckSpec parse_check(const std::string& text) {
  CheckSpec spec;
  std::stringstream ss(text);
  std::string part;
  bool first = true;
  while (std::getline(ss, part, ':')) {
    if (first) {
      spec.name = part;
      first = false;
      continue;
    }
    const auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("bad check parameter '" + part + "' in " + text);
    spec.params[part.substr(0, eq)] = part.substr(eq + 1);
  }
  if (spec.name.empty()) throw UsageError("empty check name");
  return spec;
}

std::vector<CheckSpec> parse_checks(const std::string& list) {
  std::vector<CheckSpec> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_check(item));
  if (out.empty()) throw UsageError("no checks requested");
  return out;
}

void allow_params(const CheckSpec& spec, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : spec.params)
    if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end())
      throw UsageError("unknown parameter '" + k + "' for check " + spec.name);
}

std::optional<double> number_param(const CheckSpec& spec, const std::string& key) {
  const auto it = spec.params.find(key);
  if (it == spec.params.end()) return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw UsageError("parameter " + key + " of " + spec.name + " is not a number");
  }
}

Json check_result(const std::string& name, bool pass, Json value = nullptr, Json witness = nullptr) {
  Json j{{"name", name}, {"pass", pass}};
  if (!value.is_null()) j["value"] = std::move(value);
  if (!witness.is_null()) j["witness"] = std::move(witness);
  return j;
}

Json violation_json(const Violation& v) {
  return Json{{"pieces", Json::array({v.a, v.b})},
              {"points", Json::array({v.point_a, v.point_b})},
              {"distance", v.distance}};
}

Json check_tracing(const ColoredDecomposition& out, const Cover& input) {
  if (out.space->ref() != input.space->ref()) throw Error(ErrorKind::Domain, "tracing input lives on another space");
  for (std::size_t j = 0; j < out.pieces.size(); ++j) {
    const auto& parents = j < out.parents.size() ? out.parents[j] : std::vector<PieceId>{};
    if (parents.empty()) return check_result("tracing", false, nullptr, Json{{"piece", j}, {"reason", "no parent"}});
    for (PointId p : out.pieces[j]) {
      bool found = false;
      for (PieceId parent : parents) {
        if (parent >= input.pieces.size())
          return check_result("tracing", false, nullptr, Json{{"piece", j}, {"parent", parent}});
        const auto& src = input.pieces[parent];
        found = found || std::binary_search(src.begin(), src.end(), p);
      }
      if (!found) return check_result("tracing", false, nullptr, Json{{"piece", j}, {"point", p}});
    }
  }
  return check_result("tracing", true);
}

Json check_nerve(const Cover& cover) {
  const NerveComplex nerve = nerve_map(cover);
  const Membership mem = membership(cover);
  for (std::size_t p = 0; p < nerve.coordinates.size(); ++p) {
    const auto& coords = nerve.coordinates[p];
    const auto support = mem.of(static_cast<PointId>(p));
    double sum = 0;
    bool ok = coords.size() == support.size();
    for (std::size_t i = 0; ok && i < coords.size(); ++i) {
      ok = coords[i].second > 0 && coords[i].first == support[i];
      sum += coords[i].second;
    }
    if (!ok || std::abs(sum - 1) > 1e-9)
      return check_result("nerve", false, nullptr, Json{{"point", p}, {"sum", sum}});
  }
  return check_result("nerve", true, Json{{"dimension", nerve.dimension},
                                          {"simplices", nerve.simplices.size()},
                                          {"lipschitz", nerve_lipschitz(nerve, *cover.space)}});
}

Json check_adjacent(const MapRecord& f, bool allow_equal) {
  const SpaceGraph& src = *f.source;
  const SpaceGraph& dst = *f.target;
  std::vector<Neighbor> near;
  std::vector<PointId> adj;
  for (std::size_t pi = 0; pi < src.size(); ++pi) {
    const auto p = static_cast<PointId>(pi);
    adj.clear();
    if (src.has_edges()) {
      for (PointId q : src.neighbors(p)) adj.push_back(q);
    } else {
      src.geometry().within(p, src.edge_threshold(), near);
      for (const auto& n : near) adj.push_back(n.id);
    }
    for (PointId q : adj) {
      if (q <= p) continue;
      const double d = dst.model_distance(f.assignment[p], f.assignment[q]);
      if (d > dst.edge_threshold() + kTolerance || (!allow_equal && d == 0))
        return check_result("adjacent", false, nullptr, Json{{"points", Json::array({p, q})}, {"distance", d}});
    }
  }
  return check_result("adjacent", true);
}

Json check_walk_bound(const MapRecord& f) {
  const auto* z = dynamic_cast<const IntegerGeometry*>(&f.source->geometry());
  if (z == nullptr || z->lo() > 0 || z->hi() < 0) throw UsageError("walk_bound needs a map from an integer window around 0");
  const PointId w0 = f.assignment[z->id_of(0)];
  double worst = 0;
  for (std::int64_t b = z->lo(); b <= z->hi(); ++b) {
    const double d = f.target->model_distance(w0, f.assignment[z->id_of(b)]);
    const double bound = 2 * std::log2(1.0 + static_cast<double>(std::llabs(b))) + 6;
    worst = std::max(worst, d / bound);
    if (d > bound + kTolerance)
      return check_result("walk_bound", false, worst, Json{{"b", b}, {"distance", d}, {"bound", bound}});
  }
  return check_result("walk_bound", true, worst);
}

Json run_check(Run& run, const Target& t, const CheckSpec& spec) {
  const std::string& n = spec.name;
  if (n == "coverage") {
    allow_params(spec, {});
    const auto rep = check_coverage(need_cover(t, n).decomp);
    return check_result(n, rep.covered, nullptr, rep.uncovered ? Json{{"point", *rep.uncovered}} : Json());
  }
  if (n == "validate") {
    allow_params(spec, {});
    const auto& c = need_cover(t, n);
    try {
      if (c.coloured) validate(c.decomp);
      else validate(static_cast<const Cover&>(c.decomp));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Invariant) throw;
      return check_result(n, false, e.what(), e.witness());
    }
    return check_result(n, true);
  }
  if (n == "disjointness") {
    allow_params(spec, {});
    const auto v = check_disjointness(need_decomposition(t, n));
    return check_result(n, v.empty(), v.size(), v.empty() ? Json() : violation_json(v.front()));
  }
  if (n == "multiplicity") {
    allow_params(spec, {"R", "max", "metric"});
    const double R = number_param(spec, "R").value_or(0);
    const auto metric_it = spec.params.find("metric");
    Metric metric = Metric::Graph;
    if (metric_it != spec.params.end()) {
      if (metric_it->second == "model") metric = Metric::Model;
      else if (metric_it->second != "graph") throw UsageError("metric must be graph or model");
    }
    const auto res = r_multiplicity(need_cover(t, n).decomp, R, metric);
    const auto max = number_param(spec, "max");
    return check_result(n, !max || res.value <= *max, res.value, Json{{"center", res.center}, {"R", R}});
  }
  if (n == "classes") {
    allow_params(spec, {"min"});
    const auto min = number_param(spec, "min");
    if (!min) throw UsageError("classes needs min=");
    const auto counts = class_counts(need_decomposition(t, n));
    const auto it = std::min_element(counts.begin(), counts.end());
    if (it == counts.end()) return check_result(n, true);
    const auto point = static_cast<std::size_t>(it - counts.begin());
    return check_result(n, *it >= *min, *it, Json{{"point", point}});
  }
  if (n == "colours") {
    allow_params(spec, {"max"});
    const auto& d = need_decomposition(t, n);
    std::vector<int> distinct = d.colour;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const double max = number_param(spec, "max").value_or(d.d + 1);
    return check_result(n, static_cast<double>(distinct.size()) <= max, distinct.size());
  }
  if (n == "separation") {
    allow_params(spec, {"min"});
    const auto& d = need_decomposition(t, n);
    const double min = number_param(spec, "min").value_or(d.r);
    const double sep = same_colour_separation(d, min);
    return check_result(n, sep >= min - kTolerance, sep);
  }
  if (n == "tracing") {
    allow_params(spec, {"input"});
    const auto it = spec.params.find("input");
    if (it == spec.params.end()) throw UsageError("tracing needs input=<cover file>");
    const LoadedCover input = cover_from_json(run.load(it->second));
    return check_tracing(need_decomposition(t, n), input.decomp);
  }
  if (n == "nerve") {
    allow_params(spec, {});
    return check_nerve(need_cover(t, n).decomp);
  }
  if (n == "total") {
    allow_params(spec, {});
    try {
      check_total(need_map(t, n));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      return check_result(n, false, e.what(), e.witness());
    }
    return check_result(n, true);
  }
  if (n == "fibers") {
    allow_params(spec, {"max"});
    const auto& f = need_map(t, n);
    const double max = number_param(spec, "max").value_or(3);
    Json witness;
    if (static_cast<double>(f.measured_max_fiber) > max) {
      std::vector<std::size_t> count(f.target->size(), 0);
      for (PointId q : f.assignment) ++count[q];
      const auto it = std::max_element(count.begin(), count.end());
      witness = Json{{"target_point", static_cast<std::size_t>(it - count.begin())}, {"fiber", *it}};
    }
    return check_result(n, static_cast<double>(f.measured_max_fiber) <= max, f.measured_max_fiber, witness);
  }
  if (n == "adjacent") {
    allow_params(spec, {"allow_equal"});
    return check_adjacent(need_map(t, n), number_param(spec, "allow_equal").value_or(0) != 0);
  }
  if (n == "lipschitz") {
    allow_params(spec, {"max"});
    const auto& f = need_map(t, n);
    const auto max = number_param(spec, "max");
    if (!max) throw UsageError("lipschitz needs max=");
    return check_result(n, f.measured_lipschitz <= *max + kTolerance, f.measured_lipschitz);
  }
  if (n == "walk_bound") {
    allow_params(spec, {});
    return check_walk_bound(need_map(t, n));
  }
  throw UsageError("unknown check '" + n + "'");
}

Json verification(const Json& target_ref, const Json& checks) {
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.at("pass").get<bool>();
  return Json{{"version", 1}, {"kind", "verification"}, {"target", target_ref}, {"checks", checks}, {"pass", pass}};
}

// Writes the report; returns 4 and describes the first failure when a check failed.
int report_checks(Run& run, const Json& target_ref, const Json& checks, std::ostream& out, std::ostream& err) {
  const Json rep = verification(target_ref, checks);
  run.emit_json("report.json", rep);
  for (const auto& c : checks) out << c.at("name").get<std::string>() << ": " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << '\n';
  if (rep.at("pass").get<bool>()) return 0;
  for (const auto& c : checks)
    if (!c.at("pass").get<bool>()) {
      err << "failed invariant: " << c.at("name").get<std::string>();
      if (c.contains("witness")) err << " witness " << c.at("witness").dump();
      err << '\n';
      break;
    }
  return 4;
}

Target wrap(const ColoredDecomposition& d) {
  Target t;
  t.kind = "decomposition";
  t.space = d.space;
  t.cover = LoadedCover{d, true, Json::object()};
  return t;
}

Target wrap_cover(const Cover& c) {
  Target t;
  t.kind = "cover";
  t.space = c.space;
  LoadedCover lc;
  static_cast<Cover&>(lc.decomp) = c;
  lc.decomp.partition = false;
  t.cover = std::move(lc);
  return t;
}

Target wrap_map(const MapRecord& f) {
  Target t;
  t.kind = "map";
  t.space = f.source;
  t.map = f;
  return t;
}

Json run_checks(Run& run, const Target& t, const std::vector<std::string>& names) {
  Json checks = Json::array();
  for (const auto& name : names) checks.push_back(run_check(run, t, parse_check(name)));
  return checks;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError("bad integer list '" + text + "'");
    }
  }
  return out;
}

double parse_window(const std::string& text) {
  if (text.rfind("ball:", 0) != 0) throw UsageError("window must be ball:<radius>");
  try {
    return std::stod(text.substr(5));
  } catch (const std::exception&) {
    throw UsageError("bad window radius in '" + text + "'");
  }
}

std::vector<std::string> split_paths(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Working directory override for --rerun.
struct ScopedCwd {
  fs::path saved;
  explicit ScopedCwd(const fs::path& dir) : saved(fs::current_path()) { fs::current_path(dir); }
  ~ScopedCwd() { fs::current_path(saved); }
};

int report_command(const std::string& path, bool rerun, std::ostream& out, std::ostream& err) {
  const Json run = read_json_file(path);
  expect_kind(run, "run");
  out << "command: " << run.at("command").get<std::string>() << '\n';
  out << "tool_version: " << run.at("tool_version").get<std::string>() << '\n';
  out << "seed: " << run.at("seed") << '\n';
  out << "parameters: " << run.at("parameters").dump() << '\n';
  for (const auto& o : run.at("outputs")) out << "output " << o.at("path").get<std::string>() << ' ' << o.at("sha256").get<std::string>() << '\n';
  if (!rerun) return 0;

  const fs::path dir = fs::absolute(cache_dir()) / ("rerun-" + sha256_hex(dump_json(run)).substr(0, 16));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto argv = run.at("argv").get<std::vector<std::string>>();
  bool replaced = false;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out" && i + 1 < argv.size()) {
      argv[i + 1] = dir.string();
      replaced = true;
    } else if (argv[i].rfind("--out=", 0) == 0) {
      argv[i] = "--out=" + dir.string();
      replaced = true;
    }
  }
  if (!replaced) {
    argv.push_back("--out");
    argv.push_back(dir.string());
  }

  bool same = true;
  int code = 0;
  {
    ScopedCwd cwd(run.at("cwd").get<std::string>());
    for (const auto& in : run.at("inputs")) {
      const auto p = in.at("path").get<std::string>();
      if (!fs::exists(p) || sha256_file(p) != in.at("sha256").get<std::string>()) {
        err << "input changed: " << p << '\n';
        return 4;
      }
    }
    std::ostringstream sink_out, sink_err;
    code = run_cli(argv, sink_out, sink_err);
  }
  if (code != run.at("exit_code").get<int>()) {
    out << "exit code differs: " << code << " vs " << run.at("exit_code") << '\n';
    same = false;
  }
  for (const auto& o : run.at("outputs")) {
    const auto name = o.at("path").get<std::string>();
    const fs::path p = dir / name;
    const bool ok = fs::exists(p) && sha256_file(p) == o.at("sha256").get<std::string>();
    out << "rerun " << name << ": " << (ok ? "identical" : "differs") << '\n';
    same = same && ok;
  }
  const Json again = read_json_file(dir / "run.json");
  if (again.at("outputs").size() != run.at("outputs").size()) {
    out << "output set differs\n";
    same = false;
  }
  out << (same ? "reproduced" : "NOT reproduced") << '\n';
  return same ? 0 : 4;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coarse geometry laboratory: spaces, coloured covers, constructions and measurements", "coarselab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  Run run;
  run.argv = args;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  std::size_t pair_cap = 1'000'000;
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "seed for every sampled quantity")->capture_default_str();
  app.add_option("--pair-cap", pair_cap, "pairs examined before sampling")->capture_default_str();

  // space
  auto* space_cmd = app.add_subcommand("space", "generate a space window and export it");
  std::string model, manifest_path;
  std::int64_t range = -1, lo = 0, hi = -1;
  int radius = -1, spine = -1, dim = 3, comb_d = 1, extent = 50;
  double ball_radius = 8, sep = 1;
  bool no_edges = false;
  space_cmd->add_option("--model", model, "z, t3, comb, h2, hd");
  space_cmd->add_option("--manifest", manifest_path, "space manifest or space file");
  space_cmd->add_option("--range", range, "z window [-N, N]");
  space_cmd->add_option("--lo", lo, "z window lower end");
  space_cmd->add_option("--hi", hi, "z window upper end");
  space_cmd->add_option("--radius", radius, "t3 ball radius");
  space_cmd->add_option("--spine", spine, "t3 walk window spine range");
  space_cmd->add_option("--ball", ball_radius, "h2/hd window radius")->capture_default_str();
  space_cmd->add_option("--sep", sep, "net separation")->capture_default_str();
  space_cmd->add_option("--dim", dim, "hd dimension")->capture_default_str();
  space_cmd->add_option("--d", comb_d, "comb step")->capture_default_str();
  space_cmd->add_option("--extent", extent, "comb extent")->capture_default_str();
  space_cmd->add_flag("--no-edges", no_edges, "skip the edge list of nets");

  // build
  auto* build_cmd = app.add_subcommand("build", "build a construction and verify it");
  build_cmd->require_subcommand(1);
  auto* b_walk = build_cmd->add_subcommand("walk", "walk from Z into the 3-regular tree");
  std::int64_t walk_n = 1000;
  b_walk->add_option("--n", walk_n, "window [-n, n]")->capture_default_str();

  auto* b_tiling = build_cmd->add_subcommand("tiling", "two-colour tiling of H^2 and its net decomposition");
  double tiling_r = 1, resolution = 0;
  std::string window = "ball:10";
  b_tiling->add_option("--r", tiling_r, "separation parameter")->capture_default_str();
  b_tiling->add_option("--window", window, "ball:<radius>")->capture_default_str();
  b_tiling->add_option("--resolution", resolution, "smallest semicircle radius kept")->capture_default_str();
  b_tiling->add_option("--sep", sep, "net separation")->capture_default_str();

  auto* b_bf = build_cmd->add_subcommand("bradyfarb", "cover of H^d pulled back from a product of H^2 covers");
  double bf_window = 8;
  b_bf->add_option("--dim", dim, "dimension")->capture_default_str();
  b_bf->add_option("--window", bf_window, "window radius")->capture_default_str();
  b_bf->add_option("--r", tiling_r, "tiling parameter")->capture_default_str();
  b_bf->add_option("--sep", sep, "net separation")->capture_default_str();

  auto* b_comb = build_cmd->add_subcommand("comb", "comb space");
  b_comb->add_option("--d", comb_d, "step")->capture_default_str();
  b_comb->add_option("--extent", extent, "extent")->capture_default_str();

  auto* b_product = build_cmd->add_subcommand("product", "l1 product of spaces or decompositions");
  std::string spaces_list, decomps_list;
  b_product->add_option("--spaces", spaces_list, "comma separated space files");
  b_product->add_option("--decomps", decomps_list, "two comma separated decomposition files");

  auto* b_nerve = build_cmd->add_subcommand("nerve", "nerve map of a cover");
  std::string cover_path;
  b_nerve->add_option("--cover", cover_path, "cover file")->required();

  auto* b_greedy = build_cmd->add_subcommand("greedy", "coloured decomposition from a cover of bounded multiplicity");
  double greedy_R = 1;
  int greedy_n = 1;
  b_greedy->add_option("--cover", cover_path, "cover file")->required();
  b_greedy->add_option("--R", greedy_R, "scale")->capture_default_str();
  b_greedy->add_option("--n", greedy_n, "multiplicity budget")->capture_default_str();

  auto* b_amplify = build_cmd->add_subcommand("amplify", "one amplification step adding a colour");
  std::string decomp_path;
  b_amplify->add_option("--decomp", decomp_path, "decomposition file")->required();
  b_amplify->add_option("--n", greedy_n, "class budget")->capture_default_str();

  auto* b_pullback = build_cmd->add_subcommand("pullback", "pull a cover back along a map");
  std::string map_path;
  b_pullback->add_option("--map", map_path, "map file")->required();
  b_pullback->add_option("--cover", cover_path, "cover or decomposition file")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run named checks on a cover or map file");
  std::string target_path, checks_text;
  verify_cmd->add_option("target", target_path, "file to check")->required();
  verify_cmd->add_option("--checks", checks_text, "comma separated, e.g. multiplicity:R=2:max=3")->required();

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "measurements with JSON and CSV outputs");
  analyze_cmd->require_subcommand(1);
  auto* a_growth = analyze_cmd->add_subcommand("growth", "ball growth about a point");
  std::string space_path, center = "origin";
  int r_max = 20, r_min = 2;
  a_growth->add_option("--space", space_path, "space, cover or map file")->required();
  a_growth->add_option("--center", center, "origin or a point")->capture_default_str();
  a_growth->add_option("--r-max", r_max, "largest radius")->capture_default_str();
  a_growth->add_option("--r-min", r_min, "smallest fitted radius")->capture_default_str();

  auto* a_dist = analyze_cmd->add_subcommand("distortion", "distortion profile of a map");
  std::string anchored;
  a_dist->add_option("--map", map_path, "map file")->required();
  a_dist->add_option("--anchored", anchored, "also profile distances from this source point");

  auto* a_sub = analyze_cmd->add_subcommand("sublinearity", "radial sublinearity of a cover");
  std::string m_grid = "1,2,4,8,16";
  a_sub->add_option("--cover", cover_path, "cover file")->required();
  a_sub->add_option("--basepoint", center, "origin or a point")->capture_default_str();
  a_sub->add_option("--m", m_grid, "radii")->capture_default_str();

  auto* a_defect = analyze_cmd->add_subcommand("defect", "quasi-convexity defect of a piece of an H^d net cover");
  int piece = 0;
  double defect_r = 3;
  a_defect->add_option("--cover", cover_path, "cover file")->required();
  a_defect->add_option("--piece", piece, "piece id")->capture_default_str();
  a_defect->add_option("--r", defect_r, "connectivity scale")->capture_default_str();

  auto* a_esc = analyze_cmd->add_subcommand("escalation", "growth of iterated neighbourhoods of a piece");
  double esc_s = 2;
  int esc_m = 3, esc_base = -1;
  a_esc->add_option("--decomp", decomp_path, "decomposition or cover file")->required();
  a_esc->add_option("--s", esc_s, "neighbourhood radius")->capture_default_str();
  a_esc->add_option("--m", esc_m, "iterations")->capture_default_str();
  a_esc->add_option("--base", esc_base, "base piece (default: B piece at the deepest point)");
  a_esc->add_option("--r-min", r_min, "smallest fitted radius")->capture_default_str();

  // report
  auto* report_cmd = app.add_subcommand("report", "summarise a run manifest");
  std::string run_path;
  bool rerun = false;
  report_cmd->add_option("run", run_path, "run.json")->required();
  report_cmd->add_flag("--rerun", rerun, "re-execute into the cache and compare output hashes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  run.out = out_dir;
  run.seed = seed;
  MeasureOptions measure;
  measure.seed = seed;
  int code = 0;
  bool record = true;
  try {
    if (report_cmd->parsed()) {
      record = false;
      return report_command(run_path, rerun, out, err);
    }
    if (space_cmd->parsed()) {
      run.command = "space";
      SpacePtr s;
      if (!manifest_path.empty()) {
        s = space_from_file_json(run.load(manifest_path));
      } else if (model == "z") {
        if (range >= 0) s = make_integer_window(-range, range);
        else s = make_integer_window(lo, hi);
      } else if (model == "t3") {
        if (radius >= 0) s = make_tree_ball(radius);
        else if (spine >= 0) s = make_tree_walk_window(spine);
        else throw UsageError("t3 needs --radius or --spine");
      } else if (model == "comb") {
        s = make_comb(comb_d, extent);
      } else if (model == "h2" || model == "hd") {
        NetOptions o;
        o.dim = model == "h2" ? 2 : dim;
        o.window_radius = ball_radius;
        o.sep = sep;
        o.build_edges = !no_edges;
        s = generate_net(o);
      } else {
        throw UsageError(model.empty() ? "space needs --model or --manifest" : "unknown model '" + model + "'");
      }
      run.parameters = s->manifest();
      const Json file = space_file(*s);
      run.emit_json("space.json", file);
      run.emit("points.csv", points_csv(*s));
      run.emit("edges.csv", edges_csv(*s));
      out << "points=" << s->size() << " edges=" << s->edge_count() << " degree_bound=" << s->degree_bound() << '\n';
    } else if (build_cmd->parsed()) {
      if (b_walk->parsed()) {
        run.command = "build walk";
        run.parameters = Json{{"n", walk_n}};
        const MapRecord f = tree_walk(walk_n);
        const Json checks = run_checks(run, wrap_map(f), {"total", "fibers:max=3", "adjacent", "walk_bound"});
        code = report_checks(run, f.source->ref(), checks, out, err);
        if (code == 0) run.emit_json("walk.json", map_to_json(f));
      } else if (b_tiling->parsed()) {
        run.command = "build tiling";
        TilingWindow w;
        w.radius = parse_window(window);
        w.resolution = resolution;
        run.parameters = Json{{"r", tiling_r}, {"window", window}, {"resolution", resolution}, {"sep", sep}};
        const Tiling t = build_h2_tiling(tiling_r, w);
        NetOptions o;
        o.dim = 2;
        o.window_radius = w.radius;
        o.sep = sep;
        const auto decomp = tiling_to_decomposition(t, generate_net(o));
        const Json checks = run_checks(run, wrap(decomp), {"validate", "coverage", "disjointness", "colours:max=2"});
        code = report_checks(run, decomp.space->ref(), checks, out, err);
        if (code == 0) {
          run.emit_json("tiling.json", tiling_to_json(t));
          run.emit_json("decomp.json", decomposition_to_json(decomp, Json{{"construction", "h2_tiling"}, {"r", tiling_r}}));
        }
        out << "tiles=" << t.tiles.size() << " pieces=" << decomp.pieces.size() << " dilation=" << t.dilation << '\n';
      } else if (b_bf->parsed()) {
        run.command = "build bradyfarb";
        run.parameters = Json{{"dim", dim}, {"window", bf_window}, {"r", tiling_r}, {"sep", sep}};
        HdCoverOptions o;
        o.dim = dim;
        o.window_radius = bf_window;
        o.r = tiling_r;
        o.sep = sep;
        o.measure = measure;
        const HdCover hd = hd_cover(o);
        Json checks = run_checks(run, wrap(hd.decomposition), {"validate", "coverage", "disjointness", "colours"});
        checks.push_back(check_result("projection", true,
                                      Json{{"lipschitz", hd.alpha.measured_lipschitz},
                                           {"max_fiber", hd.alpha.measured_max_fiber}}));
        code = report_checks(run, hd.decomposition.space->ref(), checks, out, err);
        if (code == 0) {
          run.emit_json("factor.json", decomposition_to_json(hd.factor_decomposition, Json{{"construction", "amplified_tiling"}}));
          run.emit_json("decomp.json", decomposition_to_json(hd.decomposition, Json{{"construction", "bradyfarb_pullback"}}));
        }
        out << "points=" << hd.decomposition.space->size() << " pieces=" << hd.decomposition.pieces.size()
            << " colours=" << hd.decomposition.d + 1 << " r=" << hd.decomposition.r << '\n';
      } else if (b_comb->parsed()) {
        run.command = "build comb";
        run.parameters = Json{{"d", comb_d}, {"extent", extent}};
        const SpacePtr s = make_comb(comb_d, extent);
        run.emit_json("comb.json", space_file(*s));
        out << "points=" << s->size() << '\n';
      } else if (b_product->parsed()) {
        run.command = "build product";
        run.parameters = Json{{"spaces", spaces_list}, {"decomps", decomps_list}};
        if (!decomps_list.empty()) {
          const auto paths = split_paths(decomps_list);
          if (paths.size() != 2) throw UsageError("--decomps takes exactly two files");
          const LoadedCover a = cover_from_json(run.load(paths[0]));
          const LoadedCover b = cover_from_json(run.load(paths[1]));
          if (!a.coloured || !b.coloured) throw UsageError("--decomps needs decomposition files");
          const SpacePtr prod = build_product({a.decomp.space, b.decomp.space});
          const auto d = product_decomposition(a.decomp, b.decomp, prod);
          const Json checks = run_checks(run, wrap(d), {"validate", "coverage", "disjointness"});
          code = report_checks(run, prod->ref(), checks, out, err);
          if (code == 0) {
            run.emit_json("product.json", space_file(*prod));
            run.emit_json("decomp.json", decomposition_to_json(d, Json{{"construction", "product"}}));
          }
        } else {
          std::vector<SpacePtr> factors;
          for (const auto& p : split_paths(spaces_list)) factors.push_back(space_from_file_json(run.load(p)));
          if (factors.size() < 2) throw UsageError("--spaces takes at least two files");
          const SpacePtr prod = build_product(factors);
          run.emit_json("product.json", space_file(*prod));
          out << "points=" << prod->size() << '\n';
        }
      } else if (b_nerve->parsed()) {
        run.command = "build nerve";
        run.parameters = Json{{"cover", cover_path}};
        const LoadedCover c = cover_from_json(run.load(cover_path));
        const Json checks = run_checks(run, wrap_cover(c.decomp), {"validate", "nerve"});
        code = report_checks(run, c.decomp.space->ref(), checks, out, err);
        if (code == 0) run.emit_json("nerve.json", nerve_to_json(nerve_map(c.decomp)));
      } else if (b_greedy->parsed()) {
        run.command = "build greedy";
        run.parameters = Json{{"cover", cover_path}, {"R", greedy_R}, {"n", greedy_n}};
        const LoadedCover c = cover_from_json(run.load(cover_path));
        const auto d = greedy_decomposition(c.decomp, greedy_R, greedy_n);
        Json checks = run_checks(run, wrap(d), {"validate", "coverage", "disjointness"});
        checks.push_back(check_tracing(d, c.decomp));
        code = report_checks(run, d.space->ref(), checks, out, err);
        if (code == 0) run.emit_json("decomp.json", decomposition_to_json(d, Json{{"construction", "greedy"}}));
      } else if (b_amplify->parsed()) {
        run.command = "build amplify";
        run.parameters = Json{{"decomp", decomp_path}, {"n", greedy_n}};
        const LoadedCover c = cover_from_json(run.load(decomp_path));
        if (!c.coloured) throw UsageError("amplify needs a decomposition file");
        const auto d = kolmogorov_amplify(c.decomp, greedy_n);
        const Json checks = run_checks(run, wrap(d), {"validate", "coverage", "disjointness",
                                                      "classes:min=" + std::to_string(d.d + 1 - greedy_n)});
        code = report_checks(run, d.space->ref(), checks, out, err);
        if (code == 0) run.emit_json("decomp.json", decomposition_to_json(d, Json{{"construction", "amplify"}}));
      } else if (b_pullback->parsed()) {
        run.command = "build pullback";
        run.parameters = Json{{"map", map_path}, {"cover", cover_path}};
        const Target f = load_target(run, map_path, measure);
        const LoadedCover c = cover_from_json(run.load(cover_path));
        if (c.coloured) {
          const auto d = pullback_decomposition(need_map(f, "pullback"), c.decomp);
          const Json checks = run_checks(run, wrap(d), {"validate", "coverage", "disjointness"});
          code = report_checks(run, d.space->ref(), checks, out, err);
          if (code == 0) run.emit_json("decomp.json", decomposition_to_json(d, Json{{"construction", "pullback"}}));
        } else {
          const Cover pc = pullback_cover(need_map(f, "pullback"), c.decomp);
          const Json checks = run_checks(run, wrap_cover(pc), {"validate", "coverage"});
          code = report_checks(run, pc.space->ref(), checks, out, err);
          if (code == 0) run.emit_json("cover.json", cover_to_json(pc, Json{{"construction", "pullback"}}));
        }
      }
    } else if (verify_cmd->parsed()) {
      run.command = "verify";
      run.parameters = Json{{"target", target_path}, {"checks", checks_text}};
      const auto specs = parse_checks(checks_text);
      const Target t = load_target(run, target_path, measure);
      Json checks = Json::array();
      for (const auto& spec : specs) checks.push_back(run_check(run, t, spec));
      const Json rep = verification(t.space->ref(), checks);
      run.emit_json("verification.json", rep);
      for (const auto& c : checks) {
        out << c.at("name").get<std::string>() << ": " << (c.at("pass").get<bool>() ? "PASS" : "FAIL");
        if (c.contains("value")) out << " value=" << c.at("value").dump();
        if (c.contains("witness")) out << " witness=" << c.at("witness").dump();
        out << '\n';
      }
      code = rep.at("pass").get<bool>() ? 0 : 4;
    } else if (analyze_cmd->parsed()) {
      if (a_growth->parsed()) {
        run.command = "analyze growth";
        run.parameters = Json{{"space", space_path}, {"center", center}, {"r_max", r_max}, {"r_min", r_min}};
        const Target t = load_target(run, space_path, measure);
        GrowthReport g = growth_report(*t.space, resolve_point(*t.space, center), r_max);
        annotate(g, r_min);
        run.emit_json("growth.json", to_json(g));
        run.emit("growth.csv", growth_csv(g));
        if (!g.fitted) {
          err << "growth: too few untruncated radii to fit; use a larger window\n";
          code = 5;
        } else {
          out << "exponent=" << g.fitted_exponent << " residual=" << g.fit_residual << " subexp=" << g.subexp_stat << '\n';
        }
      } else if (a_dist->parsed()) {
        run.command = "analyze distortion";
        run.parameters = Json{{"map", map_path}, {"anchored", anchored}, {"pair_cap", pair_cap}};
        const Target t = load_target(run, map_path, measure);
        const MapRecord& f = need_map(t, "distortion");
        DistortionOptions o;
        o.pair_cap = pair_cap;
        o.seed = seed;
        if (!anchored.empty()) o.anchor = resolve_point(*f.source, anchored);
        const auto prof = distortion_profile(f, o);
        run.emit_json("distortion.json", to_json(prof));
        run.emit("distortion.csv", distortion_csv(prof));
        out << "log_c=" << prof.all_pairs.log_c_envelope << " affine_l=" << prof.all_pairs.affine_l
            << " log_fit_ok=" << prof.all_pairs.log_fit_ok;
        if (prof.anchor) out << " anchored_log_c=" << prof.anchored.log_c_envelope;
        out << '\n';
      } else if (a_sub->parsed()) {
        run.command = "analyze sublinearity";
        run.parameters = Json{{"cover", cover_path}, {"basepoint", center}, {"m", m_grid}};
        const Target t = load_target(run, cover_path, measure);
        const auto& c = need_cover(t, "sublinearity");
        const auto rep = radial_sublinearity(c.decomp, resolve_point(*t.space, center), parse_int_list(m_grid));
        run.emit_json("sublinearity.json", to_json(rep));
        run.emit("sublinearity.csv", sublinearity_csv(rep));
        const bool all_truncated = std::all_of(rep.truncated.begin(), rep.truncated.end(), [](bool b) { return b; });
        if (all_truncated) {
          err << "sublinearity: every radius is clipped by the window; use a larger window\n";
          code = 5;
        } else {
          out << "trend=" << rep.trend << " consistent=" << rep.consistent << '\n';
        }
      } else if (a_defect->parsed()) {
        run.command = "analyze defect";
        run.parameters = Json{{"cover", cover_path}, {"piece", piece}, {"r", defect_r}, {"pair_cap", pair_cap}};
        const Target t = load_target(run, cover_path, measure);
        const auto& c = need_cover(t, "defect");
        if (piece < 0 || static_cast<std::size_t>(piece) >= c.decomp.pieces.size())
          throw Error(ErrorKind::Index, "piece out of range", Json{{"piece", piece}});
        DefectOptions o;
        o.pair_cap = pair_cap;
        o.seed = seed;
        const auto rep = quasi_convexity_defect(*t.space, c.decomp.pieces[static_cast<std::size_t>(piece)], defect_r, o);
        run.emit_json("defect.json", to_json(rep));
        std::ostringstream csv;
        csv.precision(17);
        csv << "defect,pairs,exhaustive,a,b\n" << rep.defect << ',' << rep.pairs << ',' << rep.exhaustive << ',' << rep.a
            << ',' << rep.b << '\n';
        run.emit("defect.csv", csv.str());
        out << "defect=" << rep.defect << " pairs=" << rep.pairs << '\n';
      } else if (a_esc->parsed()) {
        run.command = "analyze escalation";
        run.parameters = Json{{"decomp", decomp_path}, {"s", esc_s}, {"m", esc_m}, {"base", esc_base}, {"r_min", r_min}};
        const Target t = load_target(run, decomp_path, measure);
        const auto& c = need_cover(t, "escalation");
        std::optional<PieceId> base;
        if (esc_base >= 0) base = static_cast<PieceId>(esc_base);
        const auto rep = escalation(c.decomp, esc_s, esc_m, base, r_min);
        run.emit_json("escalation.json", to_json(rep));
        run.emit("escalation.csv", escalation_csv(rep));
        out << "exponents=";
        for (std::size_t i = 0; i < rep.steps.size(); ++i)
          out << (i ? "," : "") << rep.steps[i].growth.fitted_exponent;
        out << " non_decreasing=" << rep.non_decreasing << '\n';
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    code = 2;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what();
    if (!e.witness().is_null()) err << " witness " << e.witness().dump();
    err << '\n';
    code = exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "error (schema): " << e.what() << '\n';
    code = 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = 1;
  }
  if (record && !run.command.empty()) {
    try {
      run.finish(code);
    } catch (const std::exception& e) {
      err << "error: could not write run.json: " << e.what() << '\n';
      if (code == 0) code = 1;
    }
  }
  return code;
}

}  // namespace coarselab
