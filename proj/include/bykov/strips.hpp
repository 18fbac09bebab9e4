#pragma once

#include <utility>
#include <vector>

#include "bykov/params.hpp"

namespace bykov {

// Closed-form strip calculus on In(v). Strip n is the 2*pi*n lift-shift
// branch of eta^{-1}(S_w) inside the window [p_v_2 - tau, p_v_1 + tau]; its
// boundaries are exact exponentials and do not depend on lambda.
struct Strip {
  int n = 1;
  double K = 3.0;
  double p_w_1 = 0.0, p_w_2 = 0.0, tau = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  double h_n = 0.0;  // max height, attained at window_hi
  double m_n = 0.0;  // min height, attained at window_lo

  double log_u1(double x) const { return (x - p_w_1 - tau - kTwoPi * n) / K; }
  double log_u2(double x) const { return (x - p_w_2 + tau - kTwoPi * n) / K; }
  double u1(double x) const { return std::exp(log_u1(x)); }  // lower
  double u2(double x) const { return std::exp(log_u2(x)); }  // upper

  bool contains(double x, double y) const;
};

Strip horizontal_strip(int n, const DerivedConstants& dc,
                       const SectionGeometry& geom);

// Image R_lambda(H_n) over the same window: exponential eta-image boundaries
// minus the graph of h_v. The lower wall (a = p_v_2 - tau) gives the arch
// whose maximum tends to M_w(lambda) from above as n grows.
struct HorseshoeStrip {
  int n = 1;
  double lambda = 0.0;
  double K = 3.0, delta = 4.0;
  double a_lo = 0.0, a_up = 0.0;  // wall anchors p_v_2 - tau, p_v_1 + tau
  double window_lo = 0.0, window_hi = 0.0;
  double delta_offset = 0.0;
  UnfoldingFamily fam;

  bool is_horseshoe = false;  // both boundaries cross y = 0 twice
  double arch_max = 0.0;      // max of b_lo over the window
  double arch_argmax = 0.0;
  // maximal subintervals of the window where each boundary is <= 0
  std::vector<std::pair<double, double>> legs_lo, legs_up;

  double e_wall(double a, double x) const {
    return std::exp(delta * (a - (x - delta_offset) - kTwoPi * n) / K);
  }
  double b_lo(double x) const {
    return e_wall(a_lo, x) - fam.h_v(x - delta_offset, lambda);
  }
  double b_up(double x) const {
    return e_wall(a_up, x) - fam.h_v(x - delta_offset, lambda);
  }
};

HorseshoeStrip horseshoe_strip(int n, double lam, const DerivedConstants& dc,
                               const UnfoldingFamily& fam,
                               const SectionGeometry& geom);

enum class IClass { Empty, Irregular, Regular };

const char* iclass_name(IClass c);

struct IntersectionClass {
  IClass value = IClass::Empty;
  int components = 0;  // maximal x-intervals of fiberwise overlap
};

// Classification of H_n (horizontal strip) against R_lambda(H_m): Regular
// when each horseshoe boundary crosses each strip boundary (four crossing
// predicates, two sign changes each); Empty when the fiberwise overlap is
// negative everywhere; Irregular otherwise.
IntersectionClass classify_intersection(int horizontal_n, int horseshoe_m,
                                        double lam,
                                        const DerivedConstants& dc,
                                        const UnfoldingFamily& fam,
                                        const SectionGeometry& geom);

// Least n whose eta-image height h_n^delta clears both wall heights of h_v
// at the window margins (the horseshoe condition holds from here on).
int n0_index(double lam, const DerivedConstants& dc,
             const UnfoldingFamily& fam, const SectionGeometry& geom);

// Least N <= search_cap with (a) strips N..N+2 pairwise Regular in both
// roles, (b) h_N < M_w(lambda), (c) horseshoe condition at N.
int min_regular_index(double lam, int search_cap, const DerivedConstants& dc,
                      const UnfoldingFamily& fam, const SectionGeometry& geom);

// Horseshoe-destruction interval of strip a: at lambda = d the arch's lower
// boundary is tangent to u2, at lambda = c the upper boundary is tangent to
// u1; classification goes Regular -> Irregular -> Empty across [c, d].
struct DeltaInterval {
  int a = 0;
  double c = 0.0, d = 0.0;
  struct Witness {
    double x = 0.0;
    double lambda = 0.0;
  };
  Witness tangency_c, tangency_d;
};

DeltaInterval delta_interval(int a, double lam_seed_hi,
                             const DerivedConstants& dc,
                             const UnfoldingFamily& fam,
                             const SectionGeometry& geom);

}  // namespace bykov
