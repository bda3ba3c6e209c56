#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coarselab/covers.hpp"
#include "coarselab/map_record.hpp"

namespace coarselab {

struct GrowthReport {
  PointId center = 0;
  std::vector<int> radii;
  std::vector<std::size_t> counts;
  std::vector<bool> truncated;
  double fitted_exponent = 0;
  double fit_residual = 0;
  double subexp_stat = 0;
  double tail_slope = 0;
  bool fitted = false;
};

/// Graph-metric balls about `center` for r = 0..r_max.
GrowthReport growth_report(const SpaceGraph& space, PointId center, int r_max);
/// |set n B(center, rho)| in the model metric for integer rho = 0..r_max;
/// radius rho is truncated when it exceeds the depth of the centre.
/// r_max < 0 uses floor(depth(center)) + 1.
GrowthReport set_growth_report(const SpaceGraph& space, const PointSet& set, PointId center, int r_max = -1);
/// Report over given counts at radii 0..n-1 with nothing truncated.
GrowthReport counts_report(const std::vector<std::size_t>& counts);

struct GrowthFit {
  double exponent = 0;
  double residual = 0;  // RMS of the log-log residuals
  std::size_t radii_used = 0;
};

/// OLS slope of log count against log r over untruncated radii >= r_min.
/// Throws Data with fewer than 4 such radii.
GrowthFit fit_growth(const GrowthReport& report, int r_min = 2);

struct SubexpStat {
  double stat = 0;        // log count(r_max) / r_max
  double tail_slope = 0;  // slope of log count against r over the top half
  bool consistent = false;  // tail_slope below kSubexpThreshold
};
inline constexpr double kSubexpThreshold = 0.05;
SubexpStat subexp_stat(const GrowthReport& report);

/// Fills the fit and statistic fields when enough radii are untruncated.
void annotate(GrowthReport& report, int r_min = 2);

struct PieceGrowth {
  PieceId piece = 0;
  std::size_t size = 0;
  GrowthReport growth;
};

/// Growth of every piece about its deepest member; computed in parallel.
std::vector<PieceGrowth> piece_growth(const Cover& cover, int r_min = 2);

// ---------------------------------------------------------------------------

struct DistortionBucket {
  double lo = 0, hi = 0;  // source-distance range [lo, hi)
  std::size_t pairs = 0;
  double source_max = 0;
  double min = 0, max = 0, mean = 0;  // target distances
};

struct DistortionFit {
  std::vector<DistortionBucket> buckets;
  double log_c_envelope = 0;  // max t / (log(1 + s) + 1)
  double log_c_lsq = 0;       // least squares on bucket maxima
  double log_residual = 0;
  double affine_residual = 0;
  bool log_fit_ok = false;  // log model beats the affine one on bucket maxima
  double affine_l = 0, affine_d = 0;
  std::size_t pairs = 0;
};

struct DistortionProfile {
  Json map_ref;
  bool exhaustive = false;
  DistortionFit all_pairs;
  std::optional<PointId> anchor;
  DistortionFit anchored;
};

struct DistortionOptions {
  std::size_t pair_cap = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<PointId> anchor;
};

DistortionProfile distortion_profile(const MapRecord& f, const DistortionOptions& opts = {});
/// Fit from explicit (source, target) distance pairs.
DistortionFit fit_distortion(const std::vector<double>& source, const std::vector<double>& target);

// ---------------------------------------------------------------------------

struct SublinearityReport {
  PointId basepoint = 0;
  std::vector<int> m_grid;
  std::vector<double> max_diam;
  std::vector<double> ratio;
  std::vector<bool> truncated;
  double trend = 0;
  bool consistent = false;  // ratio strictly decreasing across the top half
};

SublinearityReport radial_sublinearity(const Cover& cover, PointId basepoint, const std::vector<int>& m_grid);

// ---------------------------------------------------------------------------

struct DefectOptions {
  std::size_t pair_cap = 1'000'000;
  std::uint64_t seed = 1;
};

struct DefectReport {
  double defect = 0;
  std::size_t pairs = 0;
  bool exhaustive = false;
  PointId a = 0, b = 0;  // pair realising the defect
  std::vector<double> witness;  // sample point on the geodesic, coordinates then y
};

/// Largest distance from a sampled point of a model geodesic between two
/// subset points to the subset. Pairs are a prefix of one seeded permutation.
DefectReport quasi_convexity_defect(const SpaceGraph& net, const PointSet& subset, double r,
                                    const DefectOptions& opts = {});

// ---------------------------------------------------------------------------

struct EscalationStep {
  int m = 0;
  std::size_t size = 0;
  bool level_truncated = false;
  GrowthReport growth;
};

struct EscalationReport {
  PieceId base = 0;
  PointId center = 0;
  double s = 0;
  std::vector<EscalationStep> steps;
  bool non_decreasing = false;
};

/// Growth of N^m_s(base) about a fixed centre for m = 0..m_max. The base is
/// the piece labelled B nearest the window centre (any piece when unlabelled).
EscalationReport escalation(const Cover& cover, double s, int m_max, std::optional<PieceId> base = std::nullopt,
                            int r_min = 2);

// ---------------------------------------------------------------------------
// JSON and CSV twins

Json to_json(const GrowthReport& g);
std::string growth_csv(const GrowthReport& g);  // r,count,truncated
Json to_json(const DistortionProfile& p);
std::string distortion_csv(const DistortionProfile& p);  // set,lo,hi,pairs,source_max,min,max,mean
Json to_json(const SublinearityReport& s);
std::string sublinearity_csv(const SublinearityReport& s);  // m,max_diam,ratio,truncated
Json to_json(const DefectReport& d);
Json to_json(const EscalationReport& e);
std::string escalation_csv(const EscalationReport& e);  // m,size,exponent,residual,fitted,level_truncated

}  // namespace coarselab
