#pragma once

#include <string>
#include <vector>

#include "bykov/maps.hpp"
#include "bykov/strips.hpp"

namespace bykov {

// Orbit iteration, fixed points and their bifurcations, covering relations
// for the shift coding, an entropy proxy, and Monte Carlo escape statistics
// for the return map R_lambda on In(v).

enum class Termination { MaxIters, EscapedLower, OnStableManifold,
                         LeftNeighborhood };

const char* termination_name(Termination t);

inline constexpr int kGapLabel = -1;

struct OrbitRecord {
  std::vector<CylPoint> points;  // In(v), x as raw lift
  std::vector<int> itinerary;    // strip index per point, kGapLabel if none
  Termination termination = Termination::MaxIters;
};

// Strip index containing (x, y) after reducing x mod 2*pi into the window's
// period, or kGapLabel.
int strip_label(double x, double y, const DerivedConstants& dc,
                const SectionGeometry& geom);

OrbitRecord iterate_orbit(const CylPoint& p0, double lam, int max_iters,
                          const DerivedConstants& dc,
                          const UnfoldingFamily& fam,
                          const SectionGeometry& geom);

enum class FpType { Sink, Saddle, Source, NonHyperbolic };

const char* fp_type_name(FpType t);

struct FixedPointInfo {
  int branch = 1;        // x-lift shift 2*pi*m across the return
  double x = 0.0;        // normalized to (-pi, pi]
  double y = 0.0;        // e^{(offset - 2*pi*m)/K} by the branch equation
  double mu1 = 0.0, mu2 = 0.0;  // multiplier moduli (mu1 <= mu2)
  bool complex_pair = false;
  FpType type = FpType::Sink;
  double det = 0.0;      // = delta * y^{delta-1}
  double residual = 0.0; // ||R(p) - p|| after polish
};

// Fixed points on branch m: the branch equation pins y_m, leaving the 1-D
// equation lam * s(x - offset) = y_m^delta - y_m (0, 1, or 2 solutions for
// the cosine family). Throws NoSolution when the branch is empty.
std::vector<FixedPointInfo> fixed_points(double lam, int m,
                                         const DerivedConstants& dc,
                                         const UnfoldingFamily& fam,
                                         const SectionGeometry& geom);

struct Period2Info {
  bool found = false;
  bool stable = false;
  double probe_lambda = 0.0;
  double x = 0.0, y = 0.0;  // one of the two period-2 points
  double mu1 = 0.0, mu2 = 0.0;
};

struct BifurcationEvent {
  enum class Kind { SaddleNode, Flip };
  Kind kind = Kind::SaddleNode;
  int m = 1;
  double lambda = 0.0;
  double x = 0.0, y = 0.0;  // representative point at the event
  double det = 0.0;         // Jacobian det at the event point
  Period2Info period2;      // filled for flips with det < 1
};

const char* bif_kind_name(BifurcationEvent::Kind k);

// Continues branch-m fixed points across [lam_lo, lam_hi]: emits the
// saddle-node where the branch is born (existence boundary, bisected) and
// flips where det(J + I) changes sign along a solution branch (bisected to
// 1e-10), probing for the nascent period-2 orbit when det < 1.
std::vector<BifurcationEvent> track_bifurcations(int m, double lam_lo,
                                                 double lam_hi,
                                                 const DerivedConstants& dc,
                                                 const UnfoldingFamily& fam,
                                                 const SectionGeometry& geom);

struct PairCovering {
  int image_strip = 0;   // n of R_lambda(H_n)
  int target_strip = 0;  // m of H_m
  IClass cls = IClass::Empty;
  int components = 0;
  bool covered = false;
  std::string note;
};

struct CoveringReport {
  bool ok = false;
  int alphabet = 0;  // |S| when ok
  std::vector<PairCovering> pairs;
};

// Covering relations for the full-shift coding: every component of
// R_lambda(H_n) cap H_m must cross H_m completely — at one end the image
// slice exits below u1, at the other above u2, and no end is cut by the
// window. Failures are reported, not thrown.
CoveringReport covering_check(const std::vector<int>& strips, double lam,
                              const DerivedConstants& dc,
                              const UnfoldingFamily& fam,
                              const SectionGeometry& geom);

// ln(2k), k = strips among {N(lambda), ..., N(lambda)+cap} whose pairs with
// every other such strip pass covering_check.
double entropy_proxy(double lam, int cap, const DerivedConstants& dc,
                     const UnfoldingFamily& fam, const SectionGeometry& geom);

// Fraction of area-uniform samples of a strip union still iterating after
// t = 0..T returns. Counter-based RNG: identical output for any job count.
std::vector<double> escape_statistics(double lam, int T, int sample_count,
                                      std::uint64_t seed,
                                      const DerivedConstants& dc,
                                      const UnfoldingFamily& fam,
                                      const SectionGeometry& geom,
                                      int jobs = 1);

}  // namespace bykov
