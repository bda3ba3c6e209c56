#include "coarselab/covers.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>

#include "coarselab/geometries.hpp"
#include "coarselab/kernels.hpp"
#include "coarselab/map_record.hpp"

namespace coarselab {

Membership membership(const Cover& cover) {
  const std::size_t n = cover.space->size();
  Membership m;
  m.offsets.assign(n + 1, 0);
  for (const auto& piece : cover.pieces)
    for (PointId p : piece) ++m.offsets[p + 1];
  for (std::size_t i = 0; i < n; ++i) m.offsets[i + 1] += m.offsets[i];
  m.pieces.resize(m.offsets[n]);
  std::vector<std::size_t> fill(m.offsets.begin(), m.offsets.end() - 1);
  for (std::size_t j = 0; j < cover.pieces.size(); ++j)
    for (PointId p : cover.pieces[j]) m.pieces[fill[p]++] = static_cast<PieceId>(j);
  return m;
}

Cover to_cover(const ColoredDecomposition& decomp) {
  Cover c;
  c.space = decomp.space;
  c.pieces = decomp.pieces;
  c.labels = decomp.labels;
  return c;
}

void validate(const Cover& cover) {
  if (!cover.space) throw Error(ErrorKind::Invariant, "cover without a space");
  const std::size_t n = cover.space->size();
  if (!cover.labels.empty() && cover.labels.size() != cover.pieces.size())
    throw Error(ErrorKind::Invariant, "label count differs from piece count");
  std::vector<bool> seen(n, false);
  for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
    const auto& piece = cover.pieces[j];
    if (piece.empty()) throw Error(ErrorKind::Invariant, "empty piece", Json{{"piece", j}});
    for (std::size_t i = 0; i < piece.size(); ++i) {
      if (piece[i] >= n) throw Error(ErrorKind::Index, "piece point out of range", Json{{"piece", j}});
      if (i > 0 && piece[i] <= piece[i - 1])
        throw Error(ErrorKind::Invariant, "piece not sorted and unique", Json{{"piece", j}});
      seen[piece[i]] = true;
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!seen[p]) throw Error(ErrorKind::Invariant, "point not covered", Json{{"point", p}});
}

void validate(const ColoredDecomposition& decomp) {
  validate(static_cast<const Cover&>(decomp));
  if (decomp.colour.size() != decomp.pieces.size())
    throw Error(ErrorKind::Invariant, "colour count differs from piece count");
  for (std::size_t j = 0; j < decomp.colour.size(); ++j)
    if (decomp.colour[j] < 0 || decomp.colour[j] > decomp.d)
      throw Error(ErrorKind::Invariant, "colour out of range", Json{{"piece", j}, {"colour", decomp.colour[j]}});
  if (decomp.partition) {
    const Membership m = membership(decomp);
    for (std::size_t p = 0; p < decomp.space->size(); ++p)
      if (m.of(static_cast<PointId>(p)).size() != 1)
        throw Error(ErrorKind::Invariant, "partition has overlapping pieces", Json{{"point", p}});
  }
}

CoverageReport check_coverage(const Cover& cover) {
  std::vector<bool> seen(cover.space->size(), false);
  for (const auto& piece : cover.pieces)
    for (PointId p : piece) seen[p] = true;
  for (std::size_t p = 0; p < seen.size(); ++p)
    if (!seen[p]) return {false, static_cast<PointId>(p)};
  return {};
}

MultiplicityResult r_multiplicity(const Cover& cover, double R, Metric metric) {
  if (R < 0) throw Error(ErrorKind::Precondition, "negative R");
  const SpaceGraph& space = *cover.space;
  if (metric == Metric::Graph && !space.has_edges() && !space.geometry().provides_adjacency()) metric = Metric::Model;
  return kernels::multiplicity(space, membership(cover), R, metric);
}

std::vector<Violation> check_disjointness(const ColoredDecomposition& decomp) {
  return kernels::disjointness(*decomp.space, membership(decomp), decomp.colour, decomp.r);
}

double same_colour_separation(const ColoredDecomposition& decomp, double cap) {
  const auto v = kernels::disjointness(*decomp.space, membership(decomp), decomp.colour, cap);
  double best = cap;
  for (const auto& x : v) best = std::min(best, x.distance);
  return best;
}

PointSet fatten(const SpaceGraph& space, const PointSet& set, double radius) {
  std::vector<std::uint8_t> mark(space.size(), 0);
  std::vector<Neighbor> nb;
  for (PointId p : set) {
    space.geometry().within(p, radius, nb);
    for (const auto& e : nb) mark[e.id] = 1;
  }
  PointSet out;
  for (std::size_t p = 0; p < mark.size(); ++p)
    if (mark[p]) out.push_back(static_cast<PointId>(p));
  return out;
}

NeighborhoodChain iterated_neighborhood(const Cover& cover, PieceId piece, double s, int m) {
  if (piece >= cover.pieces.size()) throw Error(ErrorKind::Index, "piece index out of range");
  if (m < 0) throw Error(ErrorKind::Precondition, "m must be non-negative");
  if (s < 1) throw Error(ErrorKind::Precondition, "s must be at least 1");
  const SpaceGraph& space = *cover.space;
  const Membership mem = membership(cover);
  const std::size_t n = space.size();
  std::vector<std::uint8_t> in_level(n, 0), in_nbhd(n, 0), piece_taken(cover.pieces.size(), 0);
  NeighborhoodChain chain;
  chain.base = piece;
  chain.s = s;
  PointSet level = cover.pieces[piece];
  PointSet delta = level;
  for (PointId p : level) in_level[p] = 1;
  piece_taken[piece] = 1;
  auto touches = [&](const PointSet& set) {
    return std::any_of(set.begin(), set.end(), [&](PointId p) { return space.depth(p) < s; });
  };
  chain.levels.push_back(level);
  chain.level_truncated.push_back(touches(level));
  std::vector<Neighbor> nb;
  for (int k = 1; k <= m; ++k) {
    std::vector<PointId> fresh_nbhd;
    for (PointId p : delta) {
      space.geometry().within(p, s, nb);
      for (const auto& e : nb)
        if (!in_nbhd[e.id]) {
          in_nbhd[e.id] = 1;
          fresh_nbhd.push_back(e.id);
        }
    }
    std::sort(fresh_nbhd.begin(), fresh_nbhd.end());
    PointSet added;
    for (PointId q : fresh_nbhd)
      for (PieceId j : mem.of(q)) {
        if (piece_taken[j]) continue;
        piece_taken[j] = 1;
        for (PointId p : cover.pieces[j])
          if (!in_level[p]) {
            in_level[p] = 1;
            added.push_back(p);
          }
      }
    std::sort(added.begin(), added.end());
    PointSet merged;
    merged.reserve(level.size() + added.size());
    std::merge(level.begin(), level.end(), added.begin(), added.end(), std::back_inserter(merged));
    level.swap(merged);
    delta.swap(added);
    chain.levels.push_back(level);
    chain.level_truncated.push_back(touches(level));
  }
  chain.truncated = std::any_of(chain.level_truncated.begin(), chain.level_truncated.end(), [](bool b) { return b; });
  return chain;
}

// ---------------------------------------------------------------------------
// Greedy extraction of a coloured decomposition from a cover

namespace {

struct ColourClass {
  std::vector<std::int64_t> owner;  // point -> output piece id, -1 if none
};

}  // namespace

ColoredDecomposition greedy_decomposition(const Cover& cover, double R, int n) {
  if (n < 0) throw Error(ErrorKind::Precondition, "n must be non-negative");
  if (R <= 0) throw Error(ErrorKind::Precondition, "R must be positive");
  validate(cover);
  const SpaceGraph& space = *cover.space;
  const Membership mem = membership(cover);
  const auto mult = kernels::multiplicity(space, mem, 2 * R, Metric::Model);
  if (mult.value > n + 1) {
    const Ball b = ball(space, mult.center, 2 * R, Metric::Model);
    throw Error(ErrorKind::Precondition, "cover has 2R-multiplicity above n + 1",
                Json{{"center", mult.center}, {"radius", 2 * R}, {"multiplicity", mult.value}, {"ball", b.points}});
  }
  const std::size_t N = space.size();
  std::vector<ColourClass> classes(static_cast<std::size_t>(n) + 1);
  for (auto& c : classes) c.owner.assign(N, -1);

  ColoredDecomposition out;
  out.space = cover.space;
  out.r = R;
  out.d = n;
  out.partition = false;
  std::vector<Neighbor> nb;

  auto add_piece = [&](int colour, PointSet pts, PieceId parent) {
    const auto id = static_cast<std::int64_t>(out.pieces.size());
    for (PointId p : pts) classes[colour].owner[p] = id;
    out.pieces.push_back(std::move(pts));
    out.colour.push_back(colour);
    out.parents.push_back({parent});
    if (!cover.labels.empty()) out.labels.push_back(cover.labels[parent]);
  };

  // Maximal R-separated collections, one colour at a time, in piece order.
  std::vector<bool> used(cover.pieces.size(), false);
  for (int i = 0; i <= n; ++i) {
    for (std::size_t v = 0; v < cover.pieces.size(); ++v) {
      if (used[v]) continue;
      bool separated = true;
      for (PointId p : cover.pieces[v]) {
        space.geometry().within(p, R, nb);
        for (const auto& e : nb)
          if (e.dist < R - kTolerance && classes[i].owner[e.id] >= 0) {
            separated = false;
            break;
          }
        if (!separated) break;
      }
      if (!separated) continue;
      used[v] = true;
      add_piece(i, cover.pieces[v], static_cast<PieceId>(v));
    }
  }

  // Uncovered points: clip the first piece containing them to B(x, R).
  std::vector<bool> covered(N, false);
  for (const auto& piece : out.pieces)
    for (PointId p : piece) covered[p] = true;
  std::map<std::pair<PieceId, int>, std::size_t> clip_of;  // (input piece, colour) -> output piece
  for (std::size_t x = 0; x < N; ++x) {
    if (covered[x]) continue;
    const PieceId v = mem.of(static_cast<PointId>(x)).front();
    space.geometry().within(static_cast<PointId>(x), 2 * R, nb);
    auto free_in = [&](int i, std::int64_t ignore) {
      for (const auto& e : nb) {
        const std::int64_t o = classes[i].owner[e.id];
        if (o >= 0 && o != ignore) return false;
      }
      return true;
    };
    int chosen = -1;
    std::int64_t merge_into = -1;
    for (int i = 0; i <= n && chosen < 0; ++i) {
      const auto it = clip_of.find({v, i});
      if (it != clip_of.end() && free_in(i, static_cast<std::int64_t>(it->second))) {
        chosen = i;
        merge_into = static_cast<std::int64_t>(it->second);
      }
    }
    for (int i = 0; i <= n && chosen < 0; ++i)
      if (free_in(i, -1)) chosen = i;
    if (chosen < 0)
      throw Error(ErrorKind::Invariant, "no colour is free around an uncovered point",
                  Json{{"point", x}, {"piece", v}});
    PointSet clip;
    const auto& vp = cover.pieces[v];
    for (const auto& e : nb)
      if (e.dist <= R + kTolerance && std::binary_search(vp.begin(), vp.end(), e.id)) clip.push_back(e.id);
    for (PointId p : clip) covered[p] = true;
    if (merge_into >= 0) {
      auto& target = out.pieces[static_cast<std::size_t>(merge_into)];
      PointSet merged;
      std::set_union(target.begin(), target.end(), clip.begin(), clip.end(), std::back_inserter(merged));
      target.swap(merged);
      for (PointId p : target) classes[chosen].owner[p] = merge_into;
    } else {
      clip_of[{v, chosen}] = out.pieces.size();
      add_piece(chosen, std::move(clip), v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Amplification

std::vector<int> class_counts(const ColoredDecomposition& decomp) {
  const std::size_t N = decomp.space->size();
  std::vector<std::uint32_t> mask(N, 0);
  std::vector<int> counts(N, 0);
  if (decomp.d >= 32) throw Error(ErrorKind::Precondition, "too many colours");
  for (std::size_t j = 0; j < decomp.pieces.size(); ++j)
    for (PointId p : decomp.pieces[j]) mask[p] |= 1u << decomp.colour[j];
  for (std::size_t p = 0; p < N; ++p) counts[p] = std::popcount(mask[p]);
  return counts;
}

ColoredDecomposition kolmogorov_amplify(const ColoredDecomposition& decomp, int n) {
  const int k = decomp.d;
  const int need = k + 1 - n;
  if (n < 0 || need < 1) throw Error(ErrorKind::Precondition, "amplification needs 0 <= n <= k");
  if (k + 2 > 30) throw Error(ErrorKind::Precondition, "too many colours");
  const SpaceGraph& space = *decomp.space;
  const std::size_t N = space.size();
  const auto counts = class_counts(decomp);
  for (std::size_t p = 0; p < N; ++p)
    if (counts[p] < need)
      throw Error(ErrorKind::Precondition, "point lies in too few colour classes",
                  Json{{"point", p}, {"classes", counts[p]}, {"required", need}});
  const double r = decomp.r / 3.0;

  ColoredDecomposition out;
  out.space = decomp.space;
  out.r = r;
  out.d = k + 1;
  out.partition = false;

  // membership masks of the classes X_i and of their fattenings [X_i]_r
  std::vector<std::uint32_t> in_class(N, 0), in_fat(N, 0);
  std::vector<std::int64_t> piece_of_class(N * static_cast<std::size_t>(k + 1), -1);
  for (std::size_t j = 0; j < decomp.pieces.size(); ++j) {
    const int c = decomp.colour[j];
    for (PointId p : decomp.pieces[j]) {
      in_class[p] |= 1u << c;
      piece_of_class[p * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(c)] = static_cast<std::int64_t>(j);
    }
    PointSet fat = fatten(space, decomp.pieces[j], r);
    for (PointId p : fat) in_fat[p] |= 1u << c;
    out.pieces.push_back(std::move(fat));
    out.colour.push_back(c);
    out.parents.push_back({static_cast<PieceId>(j)});
    if (!decomp.labels.empty()) out.labels.push_back(decomp.labels[j]);
  }

  // Y_S for |S| = need, split along the pieces of X_{min S}
  std::map<std::pair<std::uint32_t, std::int64_t>, PointSet> y_pieces;
  const std::uint32_t all = (k + 1 >= 32) ? ~0u : ((1u << (k + 1)) - 1);
  for (std::size_t p = 0; p < N; ++p) {
    const std::uint32_t S = in_class[p];  // candidate S are subsets of the classes containing p
    const std::uint32_t outside_fat = in_fat[p];
    for (std::uint32_t sub = S;; sub = (sub - 1) & S) {
      if (std::popcount(sub) == need && (outside_fat & (all & ~sub)) == 0) {
        const int first = std::countr_zero(sub);
        const std::int64_t j = piece_of_class[p * static_cast<std::size_t>(k + 1) + static_cast<std::size_t>(first)];
        y_pieces[{sub, j}].push_back(static_cast<PointId>(p));
      }
      if (sub == 0) break;
    }
  }
  for (auto& [key, pts] : y_pieces) {
    out.pieces.push_back(std::move(pts));
    out.colour.push_back(k + 1);
    out.parents.push_back({static_cast<PieceId>(key.second)});
    if (!decomp.labels.empty()) out.labels.push_back(decomp.labels[static_cast<std::size_t>(key.second)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products and pullbacks

ColoredDecomposition product_decomposition(const ColoredDecomposition& dx, const ColoredDecomposition& dy,
                                           const SpacePtr& product) {
  if (dx.d != dy.d) throw Error(ErrorKind::Arity, "factor decompositions have different colour counts",
                                Json{{"left", dx.d + 1}, {"right", dy.d + 1}});
  const auto* pg = dynamic_cast<const ProductGeometry*>(&product->geometry());
  if (pg == nullptr || pg->arity() != 2) throw Error(ErrorKind::Arity, "target is not a product of two spaces");
  if (pg->factor(0).ref() != dx.space->ref() || pg->factor(1).ref() != dy.space->ref())
    throw Error(ErrorKind::Arity, "product factors do not match the decompositions");
  ColoredDecomposition out;
  out.space = product;
  out.r = std::min(dx.r, dy.r);
  out.d = dx.d;
  out.partition = false;
  for (int c = 0; c <= dx.d; ++c)
    for (std::size_t a = 0; a < dx.pieces.size(); ++a) {
      if (dx.colour[a] != c) continue;
      for (std::size_t b = 0; b < dy.pieces.size(); ++b) {
        if (dy.colour[b] != c) continue;
        PointSet pts;
        pts.reserve(dx.pieces[a].size() * dy.pieces[b].size());
        std::array<PointId, 2> parts{};
        for (PointId p : dx.pieces[a])
          for (PointId q : dy.pieces[b]) {
            parts = {p, q};
            pts.push_back(pg->compose(parts));
          }
        out.pieces.push_back(std::move(pts));
        out.colour.push_back(c);
        out.parents.push_back({static_cast<PieceId>(a), static_cast<PieceId>(b)});
        if (!dx.labels.empty() && !dy.labels.empty()) out.labels.push_back(dx.labels[a] + "x" + dy.labels[b]);
      }
    }
  return out;
}

namespace {

std::vector<PointSet> preimages(const MapRecord& f, const Cover& cover, std::vector<std::size_t>& kept) {
  check_total(f);
  if (f.target->ref() != cover.space->ref()) throw Error(ErrorKind::Domain, "cover does not live on the map target");
  const Membership mem = membership(cover);
  std::vector<PointSet> pre(cover.pieces.size());
  for (std::size_t p = 0; p < f.assignment.size(); ++p)
    for (PieceId j : mem.of(f.assignment[p])) pre[j].push_back(static_cast<PointId>(p));
  std::vector<PointSet> out;
  kept.clear();
  for (std::size_t j = 0; j < pre.size(); ++j)
    if (!pre[j].empty()) {
      kept.push_back(j);
      out.push_back(std::move(pre[j]));
    }
  return out;
}

}  // namespace

Cover pullback_cover(const MapRecord& f, const Cover& cover) {
  std::vector<std::size_t> kept;
  Cover out;
  out.space = f.source;
  out.pieces = preimages(f, cover, kept);
  if (!cover.labels.empty())
    for (std::size_t j : kept) out.labels.push_back(cover.labels[j]);
  return out;
}

ColoredDecomposition pullback_decomposition(const MapRecord& f, const ColoredDecomposition& decomp) {
  std::vector<std::size_t> kept;
  ColoredDecomposition out;
  out.space = f.source;
  out.pieces = preimages(f, decomp, kept);
  for (std::size_t j : kept) {
    out.colour.push_back(decomp.colour[j]);
    out.parents.push_back({static_cast<PieceId>(j)});
    if (!decomp.labels.empty()) out.labels.push_back(decomp.labels[j]);
  }
  out.d = decomp.d;
  out.partition = decomp.partition;
  out.r = f.measured_lipschitz > 0 ? decomp.r / f.measured_lipschitz : decomp.r;
  return out;
}

Cover refine_connected(const Cover& cover, double R) {
  if (R <= 0) throw Error(ErrorKind::Precondition, "R must be positive");
  const SpaceGraph& space = *cover.space;
  Cover out;
  out.space = cover.space;
  std::vector<std::int64_t> local(space.size(), -1);
  std::vector<Neighbor> nb;
  for (std::size_t j = 0; j < cover.pieces.size(); ++j) {
    const auto& piece = cover.pieces[j];
    for (std::size_t i = 0; i < piece.size(); ++i) local[piece[i]] = static_cast<std::int64_t>(i);
    std::vector<std::size_t> parent(piece.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    for (std::size_t i = 0; i < piece.size(); ++i) {
      space.geometry().within(piece[i], R, nb);
      for (const auto& e : nb) {
        const std::int64_t l = local[e.id];
        if (l < 0) continue;
        const std::size_t a = find(i), b = find(static_cast<std::size_t>(l));
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
    std::map<std::size_t, PointSet> comps;  // keyed by smallest member position
    for (std::size_t i = 0; i < piece.size(); ++i) comps[find(i)].push_back(piece[i]);
    for (auto& [root, pts] : comps) {
      out.pieces.push_back(std::move(pts));
      if (!cover.labels.empty()) out.labels.push_back(cover.labels[j]);
    }
    for (PointId p : piece) local[p] = -1;
  }
  return out;
}

double diameter(const SpaceGraph& space, const PointSet& set) {
  if (dynamic_cast<const IntegerGeometry*>(&space.geometry()) != nullptr)
    return set.empty() ? 0.0 : static_cast<double>(set.back() - set.front());
  return kernels::diameter(space, set);
}

}  // namespace coarselab
