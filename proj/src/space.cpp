#include "coarselab/space.hpp"

#include <algorithm>
#include <deque>

#include "coarselab/geometries.hpp"
#include "coarselab/io.hpp"

namespace coarselab {

void Geometry::within(PointId p, double radius, std::vector<Neighbor>& out) const {
  out.clear();
  if (is_graph_model()) {
    // BFS bounded by the radius; hop count is the model distance.
    const int limit = static_cast<int>(std::floor(radius + kTolerance));
    std::unordered_map<PointId, int> seen{{p, 0}};
    std::deque<PointId> queue{p};
    std::vector<PointId> nb;
    while (!queue.empty()) {
      const PointId u = queue.front();
      queue.pop_front();
      const int du = seen[u];
      out.push_back({u, static_cast<double>(du)});
      if (du == limit) continue;
      adjacent(u, nb);
      for (PointId v : nb) {
        if (seen.emplace(v, du + 1).second) queue.push_back(v);
      }
    }
    std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) { return a.id < b.id; });
    return;
  }
  const std::size_t n = size();
  for (std::size_t q = 0; q < n; ++q) {
    const double d = distance(p, static_cast<PointId>(q));
    if (d <= radius + kTolerance) out.push_back({static_cast<PointId>(q), d});
  }
}

void Geometry::adjacent(PointId, std::vector<PointId>& out) const { out.clear(); }

SpaceGraph::SpaceGraph(std::shared_ptr<const Geometry> geometry, Json manifest, double separation,
                       double edge_threshold, bool build_edges)
    : geometry_(std::move(geometry)),
      manifest_(std::move(manifest)),
      separation_(separation),
      edge_threshold_(edge_threshold) {
  ref_ = sha256_hex(manifest_.dump());
  if (!build_edges) return;
  const std::size_t n = geometry_->size();
  offsets_.assign(n + 1, 0);
  std::vector<std::vector<PointId>> lists(n);
  std::vector<Neighbor> nb;
  std::vector<PointId> adj;
  for (std::size_t p = 0; p < n; ++p) {
    auto& list = lists[p];
    if (geometry_->provides_adjacency()) {
      geometry_->adjacent(static_cast<PointId>(p), adj);
      list = adj;
    } else {
      geometry_->within(static_cast<PointId>(p), edge_threshold_, nb);
      for (const auto& e : nb)
        if (e.id != p) list.push_back(e.id);
    }
    std::sort(list.begin(), list.end());
    offsets_[p + 1] = offsets_[p] + list.size();
    degree_bound_ = std::max(degree_bound_, list.size());
  }
  adjacency_.reserve(offsets_[n]);
  for (auto& list : lists) adjacency_.insert(adjacency_.end(), list.begin(), list.end());
  has_edges_ = true;
}

void SpaceGraph::check_index(PointId p) const {
  if (p >= size())
    throw Error(ErrorKind::Index, "point index " + std::to_string(p) + " out of range",
                Json{{"index", p}, {"size", size()}});
}

double SpaceGraph::model_distance(PointId p, PointId q) const {
  check_index(p);
  check_index(q);
  return p == q ? 0.0 : geometry_->distance(p, q);
}

ModelPoint SpaceGraph::point(PointId p) const {
  check_index(p);
  return geometry_->point(p);
}

std::span<const PointId> SpaceGraph::neighbors(PointId p) const {
  check_index(p);
  if (!has_edges_) throw Error(ErrorKind::Precondition, "space was built without edges");
  return {adjacency_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
}

double model_distance(const SpaceGraph& space, PointId p, PointId q) { return space.model_distance(p, q); }

namespace {

template <class F>
void for_each_neighbor(const SpaceGraph& space, PointId u, std::vector<PointId>& scratch, F&& f) {
  if (space.has_edges()) {
    for (PointId v : space.neighbors(u)) f(v);
  } else if (space.geometry().provides_adjacency()) {
    space.geometry().adjacent(u, scratch);
    for (PointId v : scratch) f(v);
  } else {
    throw Error(ErrorKind::Precondition, "graph metric requested on a space without edges");
  }
}

}  // namespace

std::vector<int> bfs_distances(const SpaceGraph& space, std::span<const PointId> sources, int limit) {
  std::vector<int> dist(space.size(), -1);
  std::vector<PointId> frontier;
  for (PointId s : sources) {
    space.check_index(s);
    if (dist[s] < 0) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  std::vector<PointId> next, scratch;
  for (int level = 0; level < limit && !frontier.empty(); ++level) {
    next.clear();
    for (PointId u : frontier) {
      for_each_neighbor(space, u, scratch, [&](PointId v) {
        if (dist[v] < 0) {
          dist[v] = level + 1;
          next.push_back(v);
        }
      });
    }
    frontier.swap(next);
  }
  return dist;
}

Ball ball(const SpaceGraph& space, PointId center, double r, Metric metric) {
  space.check_index(center);
  if (r < 0) throw Error(ErrorKind::Precondition, "negative radius");
  Ball result;
  const Geometry& g = space.geometry();
  if (metric == Metric::Model) {
    std::vector<Neighbor> nb;
    g.within(center, r, nb);
    for (const auto& e : nb) result.points.push_back(e.id);
    result.truncated = r > g.depth(center) + kTolerance;
    return result;
  }
  const int radius = static_cast<int>(std::floor(r + kTolerance));
  std::unordered_map<PointId, int> seen{{center, 0}};
  std::vector<PointId> frontier{center}, next, scratch;
  result.points.push_back(center);
  for (int level = 0; level < radius && !frontier.empty(); ++level) {
    next.clear();
    for (PointId u : frontier) {
      if (g.depth(u) < space.edge_threshold()) result.truncated = true;
      for_each_neighbor(space, u, scratch, [&](PointId v) {
        if (seen.emplace(v, level + 1).second) next.push_back(v);
      });
    }
    result.points.insert(result.points.end(), next.begin(), next.end());
    frontier.swap(next);
  }
  std::sort(result.points.begin(), result.points.end());
  return result;
}

// ---------------------------------------------------------------------------
// Generators

namespace {

Json base_manifest(const std::string& model, Json params, Json window, double sep, double threshold) {
  Json m;
  m["version"] = kSpaceVersion;
  m["model"] = model;
  m["params"] = std::move(params);
  m["window"] = std::move(window);
  m["sep"] = sep;
  m["edge_threshold"] = threshold;
  return m;
}

}  // namespace

SpacePtr make_integer_window(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorKind::EmptySpace, "empty integer window");
  auto g = std::make_shared<IntegerGeometry>(lo, hi);
  return std::make_shared<SpaceGraph>(g, base_manifest("z", Json::object(), Json{{"lo", lo}, {"hi", hi}}, 1.0, 1.0),
                                      1.0, 1.0, true);
}

SpacePtr make_tree_ball(int radius) {
  if (radius < 0) throw Error(ErrorKind::EmptySpace, "negative tree radius");
  std::vector<std::string> words{""};
  std::vector<std::string> layer{""};
  for (int k = 0; k < radius; ++k) {
    std::vector<std::string> next;
    for (const auto& w : layer)
      for (char c : {'0', '1', '2'})
        if (w.empty() || w.back() != c) next.push_back(w + c);
    words.insert(words.end(), next.begin(), next.end());
    layer.swap(next);
  }
  auto g = std::make_shared<TreeGeometry>(std::move(words));
  return std::make_shared<SpaceGraph>(
      g, base_manifest("t3", Json::object(), Json{{"type", "ball"}, {"radius", radius}}, 1.0, 1.0), 1.0, 1.0, true);
}

SpacePtr make_tree_walk_window(int spine) {
  if (spine < 0) throw Error(ErrorKind::EmptySpace, "negative spine range");
  std::vector<std::string> words;
  for (int k = -spine; k <= spine; ++k) {
    std::string s;
    const int len = std::abs(k);
    for (int i = 0; i < len; ++i) s.push_back(((i % 2 == 0) == (k > 0)) ? '0' : '1');
    words.push_back(s);
    // the binary tree of depth |k| hanging off s + "2"
    std::vector<std::string> layer{s + "2"};
    words.push_back(layer.front());
    for (int depth = 0; depth < len; ++depth) {
      std::vector<std::string> next;
      for (const auto& w : layer)
        for (char c : {'0', '1', '2'})
          if (w.back() != c) next.push_back(w + c);
      words.insert(words.end(), next.begin(), next.end());
      layer.swap(next);
    }
  }
  std::sort(words.begin(), words.end(), [](const std::string& a, const std::string& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  auto g = std::make_shared<TreeGeometry>(std::move(words));
  return std::make_shared<SpaceGraph>(
      g, base_manifest("t3", Json::object(), Json{{"type", "walk"}, {"spine", spine}}, 1.0, 1.0), 1.0, 1.0, true);
}

SpacePtr make_comb(int d, int extent) {
  auto g = std::make_shared<CombGeometry>(d, extent);
  return std::make_shared<SpaceGraph>(g, base_manifest("comb", Json{{"d", d}}, Json{{"extent", extent}}, 1.0, 1.0),
                                      1.0, 1.0, true);
}

SpacePtr make_graph(std::size_t n, const std::vector<std::pair<PointId, PointId>>& edges) {
  if (n == 0) throw Error(ErrorKind::EmptySpace, "graph without vertices");
  auto g = std::make_shared<GraphGeometry>(n, edges);
  Json e = Json::array();
  for (const auto& [u, v] : g->edges()) e.push_back(Json::array({u, v}));
  return std::make_shared<SpaceGraph>(g, base_manifest("graph", Json{{"n", n}, {"edges", e}}, Json::object(), 1.0, 1.0),
                                      1.0, 1.0, true);
}

SpacePtr build_product(const std::vector<SpacePtr>& factors, const ProductOptions& opts) {
  if (factors.empty()) throw Error(ErrorKind::Arity, "product of no spaces");
  long double total = 1;
  double sep = kInfinity, threshold = 0;
  Json manifests = Json::array();
  for (const auto& f : factors) {
    if (!f || f->size() == 0) throw Error(ErrorKind::EmptySpace, "empty product factor");
    total *= static_cast<long double>(f->size());
    sep = std::min(sep, f->separation());
    threshold = std::max(threshold, f->edge_threshold());
    manifests.push_back(f->manifest());
  }
  if (total > static_cast<long double>(opts.max_points) || total > 4294967295.0L)
    throw Error(ErrorKind::Size, "product has too many points", Json{{"points", static_cast<double>(total)}});
  auto g = std::make_shared<ProductGeometry>(factors);
  const bool edges = total <= static_cast<long double>(opts.max_edge_points) && g->provides_adjacency();
  return std::make_shared<SpaceGraph>(g, base_manifest("product", Json{{"factors", manifests}}, Json::object(), sep, threshold),
                                      sep, threshold, edges);
}

SpacePtr generate_net(const NetOptions& opts) {
  if (opts.sep <= 0) throw Error(ErrorKind::Precondition, "sep must be positive");
  const double threshold = opts.edge_threshold > 0 ? opts.edge_threshold : 3.0 * opts.sep;
  if (threshold < 2.0 * opts.sep) throw Error(ErrorKind::Precondition, "edge threshold below 2 sep");
  auto g = std::make_shared<HalfSpaceGeometry>(opts.dim, opts.window_radius, opts.sep);
  if (g->size() == 0) throw Error(ErrorKind::EmptySpace, "window contains no net point");
  Json params{{"dim", opts.dim}, {"edges", opts.build_edges}};
  return std::make_shared<SpaceGraph>(
      g,
      base_manifest(opts.dim == 2 ? "h2" : "hd", params, Json{{"type", "ball"}, {"radius", opts.window_radius}},
                    opts.sep, threshold),
      opts.sep, threshold, opts.build_edges);
}

SpacePtr space_from_manifest(const Json& m) {
  try {
    if (!m.is_object() || !m.contains("model")) throw Error(ErrorKind::Schema, "manifest lacks a model");
    if (m.value("version", 0) != kSpaceVersion) throw Error(ErrorKind::Schema, "unsupported manifest version");
    const std::string model = m.at("model").get<std::string>();
    const Json& params = m.at("params");
    const Json& window = m.at("window");
    if (model == "z") return make_integer_window(window.at("lo").get<std::int64_t>(), window.at("hi").get<std::int64_t>());
    if (model == "t3") {
      const std::string type = window.at("type").get<std::string>();
      if (type == "ball") return make_tree_ball(window.at("radius").get<int>());
      if (type == "walk") return make_tree_walk_window(window.at("spine").get<int>());
      throw Error(ErrorKind::Schema, "unknown t3 window type " + type);
    }
    if (model == "comb") return make_comb(params.at("d").get<int>(), window.at("extent").get<int>());
    if (model == "graph") {
      std::vector<std::pair<PointId, PointId>> edges;
      for (const auto& e : params.at("edges")) edges.emplace_back(e.at(0).get<PointId>(), e.at(1).get<PointId>());
      return make_graph(params.at("n").get<std::size_t>(), edges);
    }
    if (model == "h2" || model == "hd") {
      NetOptions o;
      o.dim = params.at("dim").get<int>();
      o.window_radius = window.at("radius").get<double>();
      o.sep = m.at("sep").get<double>();
      o.edge_threshold = m.at("edge_threshold").get<double>();
      o.build_edges = params.value("edges", true);
      if ((model == "h2") != (o.dim == 2)) throw Error(ErrorKind::Schema, "model and dim disagree");
      return generate_net(o);
    }
    if (model == "product") {
      std::vector<SpacePtr> factors;
      for (const auto& f : params.at("factors")) factors.push_back(space_from_manifest(f));
      return build_product(factors);
    }
    throw Error(ErrorKind::Schema, "unknown model " + model);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Schema, std::string("malformed space manifest: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Integer windows

IntegerGeometry::IntegerGeometry(std::int64_t lo, std::int64_t hi) : lo_(lo), hi_(hi) {}

double IntegerGeometry::distance(PointId p, PointId q) const {
  return static_cast<double>(p > q ? p - q : q - p);
}

double IntegerGeometry::depth(PointId p) const {
  const std::int64_t n = value(p);
  return static_cast<double>(std::min(n - lo_, hi_ - n));
}

void IntegerGeometry::within(PointId p, double radius, std::vector<Neighbor>& out) const {
  out.clear();
  const auto r = static_cast<std::int64_t>(std::floor(radius + kTolerance));
  const std::int64_t n = value(p);
  for (std::int64_t m = std::max(lo_, n - r); m <= std::min(hi_, n + r); ++m)
    out.push_back({id_of(m), static_cast<double>(std::abs(m - n))});
}

void IntegerGeometry::adjacent(PointId p, std::vector<PointId>& out) const {
  out.clear();
  const std::int64_t n = value(p);
  if (n > lo_) out.push_back(id_of(n - 1));
  if (n < hi_) out.push_back(id_of(n + 1));
}

// ---------------------------------------------------------------------------
// Trees

int tree_distance(const std::string& a, const std::string& b) {
  std::size_t common = 0;
  const std::size_t m = std::min(a.size(), b.size());
  while (common < m && a[common] == b[common]) ++common;
  return static_cast<int>(a.size() + b.size() - 2 * common);
}

TreeGeometry::TreeGeometry(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size() * 2);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!is_reduced(words_[i])) throw Error(ErrorKind::Data, "tree word not reduced: " + words_[i]);
    if (!index_.emplace(words_[i], static_cast<PointId>(i)).second)
      throw Error(ErrorKind::Data, "duplicate tree word " + words_[i]);
  }
  // depth = hop distance to the nearest vertex missing one of its 3 neighbours
  std::vector<PointId> frontier, adj;
  depth_.assign(words_.size(), kInfinity);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    adjacent(static_cast<PointId>(i), adj);
    if (adj.size() < 3) {
      depth_[i] = 0;
      frontier.push_back(static_cast<PointId>(i));
    }
  }
  for (double level = 1; !frontier.empty(); ++level) {
    std::vector<PointId> next;
    for (PointId u : frontier) {
      adjacent(u, adj);
      for (PointId v : adj)
        if (depth_[v] == kInfinity) {
          depth_[v] = level;
          next.push_back(v);
        }
    }
    frontier.swap(next);
  }
}

double TreeGeometry::distance(PointId p, PointId q) const { return tree_distance(words_[p], words_[q]); }

std::int64_t TreeGeometry::find(const std::string& word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

void TreeGeometry::adjacent(PointId p, std::vector<PointId>& out) const {
  out.clear();
  const std::string& w = words_[p];
  if (!w.empty()) {
    const auto id = find(w.substr(0, w.size() - 1));
    if (id >= 0) out.push_back(static_cast<PointId>(id));
  }
  std::string child = w + ' ';
  for (char c : {'0', '1', '2'}) {
    if (!w.empty() && w.back() == c) continue;
    child.back() = c;
    const auto id = find(child);
    if (id >= 0) out.push_back(static_cast<PointId>(id));
  }
}

// ---------------------------------------------------------------------------
// Combs

CombGeometry::CombGeometry(int d, int extent) : d_(d), extent_(extent) {
  if (d < 1 || d > kMaxStep) throw Error(ErrorKind::Precondition, "comb step must lie in [1, 4]");
  if (extent < 1) throw Error(ErrorKind::Precondition, "comb extent must be positive");
  if (extent >= 30000) throw Error(ErrorKind::Size, "comb extent too large");
  long double count = 2.0L * extent + 1;
  long double per = 1;
  for (int l = 1; l < d; ++l) per = 1 + extent * per;
  count *= per;
  if (count > 5e7L) throw Error(ErrorKind::Size, "comb exceeds the size cap", Json{{"points", static_cast<double>(count)}});
  // lexicographic in (base, h_1, h_2, ...) with shorter prefixes first
  Coords c{};
  std::vector<std::pair<Coords, int>> stack;
  for (int b = -extent; b <= extent; ++b) {
    c.fill(0);
    c[0] = b;
    stack.assign(1, {c, 0});
    while (!stack.empty()) {
      auto [node, level] = stack.back();
      stack.pop_back();
      coords_.push_back(node);
      levels_.push_back(static_cast<std::uint8_t>(level));
      if (level + 1 < d) {
        for (int h = extent; h >= 1; --h) {
          Coords child = node;
          child[level + 1] = h;
          stack.push_back({child, level + 1});
        }
      }
    }
  }
  index_.reserve(coords_.size() * 2);
  for (std::size_t i = 0; i < coords_.size(); ++i) index_.emplace(pack(coords_[i]), static_cast<PointId>(i));
  std::vector<PointId> frontier, adj;
  depth_.assign(coords_.size(), kInfinity);
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    adjacent(static_cast<PointId>(i), adj);
    const int level = levels_[i];
    const std::size_t full = 2 + ((level < d_ - 1) ? 1 : 0);
    if (adj.size() < full) {
      depth_[i] = 0;
      frontier.push_back(static_cast<PointId>(i));
    }
  }
  for (double level = 1; !frontier.empty(); ++level) {
    std::vector<PointId> next;
    for (PointId u : frontier) {
      adjacent(u, adj);
      for (PointId v : adj)
        if (depth_[v] == kInfinity) {
          depth_[v] = level;
          next.push_back(v);
        }
    }
    frontier.swap(next);
  }
}

std::uint64_t CombGeometry::pack(const Coords& c) const {
  std::uint64_t key = static_cast<std::uint64_t>(c[0] + extent_);
  for (int l = 1; l < kMaxStep; ++l) key = (key << 16) | static_cast<std::uint64_t>(c[l]);
  return key;
}

double CombGeometry::distance(PointId p, PointId q) const {
  const Coords& a = coords_[p];
  const Coords& b = coords_[q];
  int l = 0;
  while (l < kMaxStep && a[l] == b[l]) ++l;
  if (l == kMaxStep) return 0.0;
  double d = std::abs(a[l] - b[l]);
  for (int m = l + 1; m < kMaxStep; ++m) d += a[m] + b[m];
  return d;
}

ModelPoint CombGeometry::point(PointId p) const {
  CombNode n;
  n.base = coords_[p][0];
  for (int l = 1; l <= levels_[p]; ++l) n.offsets.push_back(coords_[p][l]);
  return n;
}

std::int64_t CombGeometry::find(std::int64_t base, const std::vector<std::int64_t>& offsets) const {
  if (static_cast<int>(offsets.size()) >= d_ || std::abs(base) > extent_) return -1;
  Coords c{};
  c[0] = static_cast<std::int32_t>(base);
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (offsets[i] < 1 || offsets[i] > extent_) return -1;
    c[i + 1] = static_cast<std::int32_t>(offsets[i]);
  }
  const auto it = index_.find(pack(c));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

PointId CombGeometry::origin() const { return static_cast<PointId>(find(0, {})); }

bool CombGeometry::is_hair_root(PointId p) const { return levels_[p] + 1 < d_; }

void CombGeometry::adjacent(PointId p, std::vector<PointId>& out) const {
  out.clear();
  const Coords& c = coords_[p];
  const int level = levels_[p];
  auto push = [&](const Coords& n) {
    const auto it = index_.find(pack(n));
    if (it != index_.end()) out.push_back(it->second);
  };
  Coords n = c;
  if (level == 0) {
    n[0] = c[0] - 1;
    push(n);
    n[0] = c[0] + 1;
    push(n);
  } else {
    n[level] = c[level] - 1;  // reaches the root (parent) when the offset drops to 0
    push(n);
    n[level] = c[level] + 1;
    push(n);
  }
  if (level + 1 < d_) {
    n = c;
    n[level + 1] = 1;
    push(n);
  }
  std::sort(out.begin(), out.end());
}

// ---------------------------------------------------------------------------
// Explicit graphs

GraphGeometry::GraphGeometry(std::size_t n, const std::vector<std::pair<PointId, PointId>>& edges)
    : n_(n), adj_(n) {
  if (n > 20000) throw Error(ErrorKind::Size, "explicit graph too large for all-pairs distances");
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw Error(ErrorKind::Index, "edge endpoint out of range");
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [u, v] : edges_) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
  dist_.assign(n * n, -1);
  std::vector<PointId> frontier, next;
  for (std::size_t s = 0; s < n; ++s) {
    std::int32_t* row = dist_.data() + s * n;
    row[s] = 0;
    frontier.assign(1, static_cast<PointId>(s));
    for (std::int32_t level = 1; !frontier.empty(); ++level) {
      next.clear();
      for (PointId u : frontier)
        for (PointId v : adj_[u])
          if (row[v] < 0) {
            row[v] = level;
            next.push_back(v);
          }
      frontier.swap(next);
    }
  }
}

double GraphGeometry::distance(PointId p, PointId q) const {
  const std::int32_t d = dist_[static_cast<std::size_t>(p) * n_ + q];
  return d < 0 ? kInfinity : d;
}

void GraphGeometry::adjacent(PointId p, std::vector<PointId>& out) const { out = adj_[p]; }

// ---------------------------------------------------------------------------
// Products

ProductGeometry::ProductGeometry(std::vector<SpacePtr> factors) : factors_(std::move(factors)) {
  stride_.assign(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 0;) {
    stride_[i] = size_;
    size_ *= factors_[i]->size();
    graph_model_ = graph_model_ && factors_[i]->geometry().is_graph_model();
    adjacency_ = adjacency_ && (factors_[i]->has_edges() || factors_[i]->geometry().provides_adjacency());
  }
}

PointId ProductGeometry::component(PointId p, std::size_t i) const {
  return static_cast<PointId>((p / stride_[i]) % factors_[i]->size());
}

PointId ProductGeometry::compose(std::span<const PointId> parts) const {
  std::size_t id = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) id += parts[i] * stride_[i];
  return static_cast<PointId>(id);
}

double ProductGeometry::distance(PointId p, PointId q) const {
  double d = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const PointId a = component(p, i), b = component(q, i);
    if (a != b) d += factors_[i]->geometry().distance(a, b);
  }
  return d;
}

ModelPoint ProductGeometry::point(PointId p) const {
  Tuple t;
  for (std::size_t i = 0; i < factors_.size(); ++i) t.parts.push_back(factors_[i]->geometry().point(component(p, i)));
  return t;
}

double ProductGeometry::depth(PointId p) const {
  double d = kInfinity;
  for (std::size_t i = 0; i < factors_.size(); ++i) d = std::min(d, factors_[i]->depth(component(p, i)));
  return d;
}

void ProductGeometry::adjacent(PointId p, std::vector<PointId>& out) const {
  out.clear();
  std::vector<PointId> scratch;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const PointId a = component(p, i);
    const std::size_t base = p - static_cast<std::size_t>(a) * stride_[i];
    if (factors_[i]->has_edges()) {
      for (PointId b : factors_[i]->neighbors(a)) out.push_back(static_cast<PointId>(base + b * stride_[i]));
    } else {
      factors_[i]->geometry().adjacent(a, scratch);
      for (PointId b : scratch) out.push_back(static_cast<PointId>(base + b * stride_[i]));
    }
  }
  std::sort(out.begin(), out.end());
}

}  // namespace coarselab
