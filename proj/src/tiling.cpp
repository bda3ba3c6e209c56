#include "coarselab/tiling.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <unordered_map>

#include "coarselab/geometries.hpp"

namespace coarselab {

const char* to_string(TileKind kind) {
  switch (kind) {
    case TileKind::A: return "A";
    case TileKind::B: return "B";
    case TileKind::B1: return "B1";
  }
  return "?";
}

double solve_dilation(double r) {
  if (!(r > 0)) throw Error(ErrorKind::Precondition, "r must be positive");
  // The semicircle over [1, x] has centre (1 + x) / 2 and radius (x - 1) / 2; it is
  // tangent to x = sinh(4r) y when centre / cosh(4r) = radius.
  const double k = std::cosh(4 * r);
  auto gap = [k](double x) { return (1 + x) / k - (x - 1); };  // decreasing in x
  double lo = 1.0, hi = 2.0;
  int guard = 0;
  while (gap(hi) > 0) {
    hi *= 2;
    if (++guard > 200) throw Error(ErrorKind::Numeric, "tangency bracket not found");
  }
  for (int i = 0; i < 400 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0 ? lo : hi) = mid;
  }
  if (hi - lo > 1e-12 * hi) throw Error(ErrorKind::Numeric, "tangency bisection did not converge");
  return hi;  // the side that does not cross the line
}

namespace {

struct Frame {
  int side;
  std::vector<int> path;
  hyp::Mobius m;
  double lo, hi;
};

double world_x(int side, double x) { return side < 0 ? -x : x; }

void push_tile(Tiling& t, TileKind kind, const Frame& f) {
  Tile tile;
  tile.kind = kind;
  tile.side = kind == TileKind::B1 ? 0 : f.side;
  tile.path = f.path;
  tile.frame = f.m;
  tile.lo = f.lo;
  tile.hi = f.hi;
  t.tiles.push_back(std::move(tile));
}

}  // namespace

Tiling build_h2_tiling(double r, const TilingWindow& window) {
  if (!(window.radius > 0) || !std::isfinite(window.radius))
    throw Error(ErrorKind::Window, "tiling window must be a bounded ball");
  Tiling t;
  t.r = r;
  for (int k = 0; k <= 4; ++k) t.lambda[static_cast<std::size_t>(k)] = std::sinh(k * r);
  t.dilation = solve_dilation(r);
  t.window = window;
  const double rho = t.dilation, log_rho = std::log(rho);
  const double R = window.radius;
  const double disc_c = std::cosh(R), disc_r = std::sinh(R);

  std::vector<Frame> frames;
  push_tile(t, TileKind::B1, Frame{1, {}, hyp::Mobius::identity(), 0, 0});
  for (int side : {1, -1}) frames.push_back(Frame{side, {}, hyp::Mobius::identity(), 0, 0});

  for (std::size_t f = 0; f < frames.size(); ++f) {
    const Frame frame = frames[f];
    push_tile(t, TileKind::A, frame);
    push_tile(t, TileKind::B, frame);
    // the window ball pulled back into frame coordinates; (0; 1) is fixed by the reflection
    const std::complex<double> c = frame.m.inverse().apply({0.0, 1.0});
    const double Y = c.imag();
    const double x_hi = c.real() + Y * disc_r;
    if (x_hi <= 0) continue;
    const int n_hi = static_cast<int>(std::ceil(std::log(x_hi) / log_rho));
    const int n_lo = static_cast<int>(std::floor(std::log(2 * Y * std::exp(-R) / (rho - 1)) / log_rho)) - 1;
    for (int n = n_lo; n <= n_hi; ++n) {
      double a = frame.m.apply_boundary(std::pow(rho, n));
      double b = frame.m.apply_boundary(std::pow(rho, n + 1));
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      a = world_x(frame.side, a);
      b = world_x(frame.side, b);
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
      if (rad < window.resolution) continue;
      if (std::hypot(mid, disc_c) >= disc_r + rad) continue;
      Frame child{frame.side, frame.path, frame.m * hyp::Mobius::onto_half_disc(std::pow(rho, n), std::pow(rho, n + 1)),
                  lo, hi};
      child.path.push_back(n);
      frames.push_back(std::move(child));
    }
  }
  return t;
}

TileLocation locate_tile(const Tiling& t, double x, double y) {
  if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y))
    throw Error(ErrorKind::Assignment, "point outside the upper half-plane", Json{{"x", x}, {"y", y}});
  const double rho = t.dilation, log_rho = std::log(rho);
  const double l1 = t.lambda[1], l3 = t.lambda[3];
  TileLocation loc;
  loc.side = x < 0 ? -1 : 1;
  x = std::abs(x);
  for (int depth = 0; depth < 400; ++depth) {
    const double ratio = x / y;
    if (ratio < l1 - kTolerance) {
      if (loc.path.empty()) {
        loc.kind = TileKind::B1;
        loc.side = 0;
      } else {
        loc.kind = TileKind::B;
        loc.path.pop_back();
      }
      return loc;
    }
    if (ratio <= l3 + kTolerance) {
      loc.kind = TileKind::A;
      return loc;
    }
    const int guess = static_cast<int>(std::floor(std::log(x) / log_rho));
    bool inside = false;
    for (int n : {guess, guess - 1, guess + 1}) {
      const double a = std::pow(rho, n), b = a * rho;
      const double c = 0.5 * (a + b), rad = 0.5 * (b - a);
      if ((x - c) * (x - c) + y * y < rad * rad * (1 - kTolerance)) {
        const std::complex<double> z = (a - std::complex<double>(x, y)) / (std::complex<double>(x, y) - b);
        loc.path.push_back(n);
        x = z.real();
        y = z.imag();
        inside = true;
        break;
      }
    }
    if (!inside) {
      loc.kind = TileKind::B;
      return loc;
    }
    if (!(y > 0)) throw Error(ErrorKind::Assignment, "tile location lost precision", Json{{"depth", depth}});
  }
  throw Error(ErrorKind::Assignment, "tile recursion too deep");
}

std::string tile_key(const TileLocation& loc) {
  std::string s = to_string(loc.kind);
  s += loc.side > 0 ? "+" : (loc.side < 0 ? "-" : "");
  for (std::size_t i = 0; i < loc.path.size(); ++i) {
    s += i == 0 ? ":" : ",";
    s += std::to_string(loc.path[i]);
  }
  return s;
}

std::string tile_key(const Tile& tile) { return tile_key(TileLocation{tile.kind, tile.side, tile.path}); }

TileKind label_kind(const std::string& label) {
  if (label.rfind("B1", 0) == 0) return TileKind::B1;
  if (label.rfind("B", 0) == 0) return TileKind::B;
  if (label.rfind("A", 0) == 0) return TileKind::A;
  throw Error(ErrorKind::Data, "not a tile label: " + label);
}

ColoredDecomposition tiling_to_decomposition(const Tiling& t, const SpacePtr& net) {
  const auto* g = dynamic_cast<const HalfSpaceGeometry*>(&net->geometry());
  if (g == nullptr || g->dim() != 2) throw Error(ErrorKind::Domain, "tiling needs an H^2 net");
  if (g->window_radius() > t.window.radius + kTolerance)
    throw Error(ErrorKind::Window, "net window exceeds the tiling window");
  ColoredDecomposition out;
  out.space = net;
  out.r = t.r;
  out.d = 1;
  out.partition = true;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t p = 0; p < net->size(); ++p) {
    const auto id = static_cast<PointId>(p);
    TileLocation loc;
    try {
      loc = locate_tile(t, g->x(id, 0), g->y(id));
    } catch (const Error& e) {
      throw Error(ErrorKind::Assignment, e.what(), Json{{"point", p}});
    }
    const std::string key = tile_key(loc);
    auto [it, fresh] = index.emplace(key, out.pieces.size());
    if (fresh) {
      out.pieces.emplace_back();
      out.labels.push_back(key);
      out.colour.push_back(Tiling::colour(loc.kind));
      out.parents.emplace_back();
    }
    out.pieces[it->second].push_back(id);
  }
  return out;
}

Json tiling_to_json(const Tiling& t) {
  Json j;
  j["version"] = 1;
  j["kind"] = "tiling";
  j["r"] = t.r;
  j["lambda"] = t.lambda;
  j["dilation"] = t.dilation;
  j["window"] = Json{{"radius", t.window.radius}, {"resolution", t.window.resolution}};
  j["colouring"] = Json{{"A", 0}, {"B", 1}, {"B1", 1}};
  Json tiles = Json::array();
  for (const auto& tile : t.tiles) {
    tiles.push_back(Json{{"key", tile_key(tile)},
                         {"kind", to_string(tile.kind)},
                         {"side", tile.side},
                         {"depth", tile.depth()},
                         {"matrix", Json::array({tile.frame.a, tile.frame.b, tile.frame.c, tile.frame.d})},
                         {"span", Json::array({tile.lo, tile.hi})}});
  }
  j["tiles"] = std::move(tiles);
  return j;
}

}  // namespace coarselab
