#pragma once

#include <utility>
#include <vector>

#include "bykov/sections.hpp"

namespace bykov {

// n-pulse connection machinery. The base curve (level 0) is the positive
// hump of h_w on In(v); level k+1 is the return-map image of the level-k
// sub-segments that stay in the upper half. Connections at pulse n are the
// transverse crossings of the eta-image of level n-1 with the graph of h_v
// on Out(w); tangencies are the parameters where a crossing pair merges.

struct PulseOptions {
  int bulk = 4000;            // uniform samples across a segment interior
  int tail_depth = 260;       // geometric samples clustering at each end
  double tail_ratio = 0.9;
  double min_height_floor = 1e-14;  // curve samples below this are pruned
  double lift_span_cap = 40.0 * kPi;
  double lambda_ratio = 0.98;  // downward sweep grid
  double bisect_rel = 1e-12;   // lambda bracket width target, relative
  double tangent_slope_tol = 1e-8;
  int zoom_rounds = 48;        // dip-refinement recursion budget
  int jobs = 1;
};

struct PulseSegment {
  // Base-parameter window in the level-0 hump; every sample of every level
  // is the k-fold return image of (t, h_w(t)).
  double t_lo = 0.0, t_hi = 0.0;
  // Lift interval (a_j, b_j) of the W+ piece on the previous level's helix.
  std::pair<double, double> parent_window{0.0, 0.0};
  SampledCurve curve;          // In(v) samples (lift, y)
  std::vector<double> params;  // base parameter per sample
};

struct PulseCurve {
  int level = 0;
  std::vector<PulseSegment> segments;
  long truncated_samples = 0;  // below the height floor
  long truncated_span = 0;     // beyond the lift span cap
  long pruned_segments = 0;    // whole pieces lost to floor/resolution
};

struct Crossing {
  double t = 0.0;      // base parameter
  double x = 0.0;      // contact lift on Out(w)
  double y = 0.0;      // contact height = h_v(x)
  double slope = 0.0;  // dg/dx along the helix at the root
};

struct ConnectionCount {
  int count = 0;
  std::vector<Crossing> locations;
  bool near_tangent = false;  // some root with |slope| below tolerance
};

struct TangencyEvent {
  int pulse = 1;
  double lambda = 0.0;
  CylPoint location;  // contact point on Out(w)
  double residual_g = 0.0;
  double residual_gp = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
};

std::vector<PulseCurve> pulse_curves(double lam, int depth,
                                     const DerivedConstants& dc,
                                     const UnfoldingFamily& fam,
                                     const SectionGeometry& geom,
                                     const PulseOptions& opts = {});

// Lift window for counting, pinned to gap centers of h_v (where crossings
// cannot occur, h_v < 0 there): the window covers the fold lifts of the
// level-(n-1) helix at both sweep endpoints, padded by 2*pi and snapped.
std::pair<double, double> pulse_window(int n, double lam_hi, double lam_lo,
                                       const DerivedConstants& dc,
                                       const UnfoldingFamily& fam,
                                       const SectionGeometry& geom,
                                       const PulseOptions& opts = {});

// Transverse crossings with contact lift inside [window_lo, window_hi].
// n = 0 reports the two primary connections at the zeros of h_w. Throws
// TangentRoot when a root's helix slope falls below tangent_slope_tol.
ConnectionCount count_pulse_connections(double lam, int n, double window_lo,
                                        double window_hi,
                                        const DerivedConstants& dc,
                                        const UnfoldingFamily& fam,
                                        const SectionGeometry& geom,
                                        const PulseOptions& opts = {});

// Downward geometric sweep over [lam_lo, lam_hi]: every change of the
// windowed count is bracketed, bisected to bisect_rel * lambda, and the
// merging pair is polished by a two-variable Newton solve of g = dg = 0.
// Events are sorted by descending lambda.
std::vector<TangencyEvent> find_tangencies(double lam_hi, double lam_lo,
                                           int pulse, int max_events,
                                           const DerivedConstants& dc,
                                           const UnfoldingFamily& fam,
                                           const SectionGeometry& geom,
                                           const PulseOptions& opts = {});

}  // namespace bykov
