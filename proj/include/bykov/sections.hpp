#pragma once

#include <optional>
#include <vector>

#include "bykov/params.hpp"

namespace bykov {

enum class Section { InV, OutV, InW, OutW };

const char* section_name(Section s);

// Point on a cylinder wall. x is an angular lift (plain real, unreduced);
// log_y caches ln(y) for underflow-safe composition and is only meaningful
// for y > 0.
struct CylPoint {
  Section section = Section::InV;
  double x = 0.0;
  double y = 0.0;
  std::optional<double> log_y;

  static CylPoint make(Section s, double x, double y);
  // Construct from log-height; y is exponentiated (may underflow to 0).
  static CylPoint from_log(Section s, double x, double log_y);
};

struct SampledCurve {
  Section section = Section::InV;
  std::vector<std::pair<double, double>> samples;  // (x lift, y)
  bool closed = false;
};

// Builds a graph-type curve y = f(x) on [a, b] with n uniform samples.
SampledCurve sample_graph(Section s, double a, double b, int n,
                          const std::function<double(double)>& f);

// Graph sampler for positive humps vanishing at the open interval's ends:
// uniform bulk plus geometric tails clustering toward a and b, so that
// log-height resolution stays bounded where f -> 0.
SampledCurve sample_hump(Section s, double a, double b,
                         const std::function<double(double)>& f,
                         int bulk = 4000, double tail_ratio = 0.88,
                         int tail_depth = 220);

// True if x lifts are strictly monotone (graph-type curve check).
bool is_graph(const SampledCurve& c);

// Pairwise segment intersection test among non-adjacent segments, at sample
// resolution. O(n^2); intended for test-sized curves.
bool curve_self_intersects(const SampledCurve& c);

// Image of a positive graph under eta (or eta^{-1}): lift coordinate is
// unbounded, height positive and tending to zero along the tails.
struct Helix {
  Section section = Section::OutW;
  std::vector<std::pair<double, double>> samples;  // (lift, y)
  std::vector<std::pair<double, double>> folds;    // strict lift extrema
  double max_height = 0.0;
  double max_height_at = 0.0;  // lift of the maximum
};

enum class RegionFlag { Wplus, Wminus, OnBoundary };

// Position of an Out(w) point relative to the stable-manifold graph h_v:
// Wminus iff 0 < y < h_v(x) inside the positive hump; OnBoundary within
// atol of the graph; Wplus otherwise. Requires y in (0, 1).
RegionFlag classify_region(const CylPoint& p, double lam,
                           const UnfoldingFamily& fam, double atol = 1e-12);

}  // namespace bykov
