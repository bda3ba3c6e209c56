#include "coarselab/walk.hpp"

#include <cstdlib>

#include "coarselab/geometries.hpp"

namespace coarselab {

namespace {

std::string spine(int k) {
  std::string s;
  for (int i = 0; i < std::abs(k); ++i) s.push_back(((i % 2 == 0) == (k > 0)) ? '0' : '1');
  return s;
}

void tour(std::string& w, int remaining, std::vector<std::string>& out) {
  out.push_back(w);
  if (remaining == 0) return;
  const char last = w.back();
  for (char c : {'0', '1', '2'}) {
    if (c == last) continue;
    w.push_back(c);
    tour(w, remaining - 1, out);
    w.pop_back();
    out.push_back(w);
  }
}

// Segment k: closed walk around the tree at spine(k) + "2", then spine(k), then spine(k + 1).
std::vector<std::string> segment(int k) {
  std::vector<std::string> out;
  std::string root = spine(k) + "2";
  tour(root, std::abs(k), out);
  out.push_back(spine(k));
  out.push_back(spine(k + 1));
  return out;
}

std::int64_t segment_length(int k) { return closed_walk_length(std::abs(k)) + 3; }

}  // namespace

std::int64_t closed_walk_length(int k) { return 4 * ((std::int64_t{1} << k) - 1); }

int walk_spine_for(std::int64_t n_max) {
  if (n_max < 1) throw Error(ErrorKind::Precondition, "n_max must be at least 1");
  // positive side: segments 0..K-1 must reach n_max; negative side: segments -1..-K
  int K = 1;
  for (;;) {
    std::int64_t pos = 0, neg = 0;
    for (int k = 0; k < K; ++k) pos += segment_length(k);
    for (int k = 1; k <= K; ++k) neg += segment_length(-k);
    if (pos > n_max && neg >= n_max) return K;
    ++K;
  }
}

std::vector<std::string> tree_walk_words(std::int64_t n_max) {
  const int K = walk_spine_for(n_max);
  std::vector<std::string> positive, negative;
  for (int k = 0; k < K && static_cast<std::int64_t>(positive.size()) <= n_max; ++k) {
    auto s = segment(k);
    positive.insert(positive.end(), s.begin(), s.end());
  }
  // negative segments are laid out backwards from W(0)
  for (int k = -1; k >= -K && static_cast<std::int64_t>(negative.size()) < n_max; --k) {
    auto s = segment(k);
    negative.insert(negative.end(), s.rbegin(), s.rend());
  }
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(2 * n_max + 1));
  for (std::int64_t b = n_max; b >= 1; --b) out.push_back(negative[static_cast<std::size_t>(b - 1)]);
  for (std::int64_t b = 0; b <= n_max; ++b) out.push_back(positive[static_cast<std::size_t>(b)]);
  return out;
}

MapRecord tree_walk(std::int64_t n_max) {
  const int K = walk_spine_for(n_max);
  MapRecord f;
  f.source = make_integer_window(-n_max, n_max);
  f.target = make_tree_walk_window(K);
  const auto& tree = dynamic_cast<const TreeGeometry&>(f.target->geometry());
  const auto words = tree_walk_words(n_max);
  f.assignment.resize(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto id = tree.find(words[i]);
    if (id < 0) throw Error(ErrorKind::Window, "walk leaves the tree window", Json{{"word", words[i]}});
    f.assignment[i] = static_cast<PointId>(id);
  }
  f.provenance = Json{{"construction", "tree_walk"}, {"n_max", n_max}, {"spine", K}};
  measure_map(f);
  return f;
}

}  // namespace coarselab
