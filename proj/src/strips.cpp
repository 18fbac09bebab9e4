#include "bykov/strips.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bykov/errors.hpp"

namespace bykov {

namespace {

constexpr int kGrid = 4096;

// Roots of f on [a, b]: sign changes on a uniform grid, then bisection.
template <class F>
std::vector<double> grid_roots(F&& f, double a, double b, int grid = kGrid) {
  std::vector<double> roots;
  double prev_x = a, prev_v = f(a);
  for (int i = 1; i <= grid; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / grid;
    const double v = f(x);
    if (prev_v == 0.0) {
      roots.push_back(prev_x);
    } else if (v != 0.0 && std::signbit(v) != std::signbit(prev_v)) {
      roots.push_back(bisect(f, prev_x, x));
    }
    prev_x = x;
    prev_v = v;
  }
  if (prev_v == 0.0) roots.push_back(prev_x);
  return roots;
}

// Subintervals of [a, b] where f < 0, delimited by roots or window edges.
template <class F>
std::vector<std::pair<double, double>> negative_intervals(F&& f, double a,
                                                          double b) {
  const std::vector<double> roots = grid_roots(f, a, b);
  std::vector<double> cuts;
  cuts.push_back(a);
  cuts.insert(cuts.end(), roots.begin(), roots.end());
  cuts.push_back(b);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0.0) continue;
    if (f(0.5 * (cuts[i] + cuts[i + 1])) < 0.0) {
      if (!out.empty() && out.back().second == cuts[i]) {
        out.back().second = cuts[i + 1];  // merge across a grazing root
      } else {
        out.emplace_back(cuts[i], cuts[i + 1]);
      }
    }
  }
  return out;
}

// Maximum of f on [a, b]: grid argmax polished by ternary search in the
// surrounding two cells. Returns {max, argmax}.
template <class F>
std::pair<double, double> grid_max(F&& f, double a, double b,
                                   int grid = kGrid) {
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= grid; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / grid;
    const double v = f(x);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double cell = (b - a) / grid;
  double lo = std::max(a, a + best_i * cell - cell);
  double hi = std::min(b, a + best_i * cell + cell);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (b - a); ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double x = 0.5 * (lo + hi);
  return {std::max(best, f(x)), x};
}

// Strict sign changes of f sampled on a uniform grid (zeros are skipped, so
// a grazing touch counts as zero or two crossings, never one).
template <class F>
int count_crossings(F&& f, double a, double b, int grid = kGrid) {
  int count = 0;
  double prev = f(a);
  for (int i = 1; i <= grid; ++i) {
    const double v = f(a + (b - a) * static_cast<double>(i) / grid);
    if (v == 0.0) continue;
    if (prev != 0.0 && std::signbit(v) != std::signbit(prev)) ++count;
    prev = v;
  }
  return count;
}

}  // namespace

bool Strip::contains(double x, double y) const {
  return x >= window_lo && x <= window_hi && y >= u1(x) && y <= u2(x);
}

Strip horizontal_strip(int n, const DerivedConstants& dc,
                       const SectionGeometry& geom) {
  if (n < 1) fail(Err::InvariantViolation, "strip index must be >= 1");
  Strip s;
  s.n = n;
  s.K = dc.K;
  s.p_w_1 = geom.p_w_1;
  s.p_w_2 = geom.p_w_2;
  s.tau = geom.tau;
  s.window_lo = geom.window_lo();
  s.window_hi = geom.window_hi();
  s.h_n = s.u2(s.window_hi);
  s.m_n = s.u1(s.window_lo);
  return s;
}

HorseshoeStrip horseshoe_strip(int n, double lam, const DerivedConstants& dc,
                               const UnfoldingFamily& fam,
                               const SectionGeometry& geom) {
  if (n < 1) fail(Err::InvariantViolation, "strip index must be >= 1");
  // lam = 0 is admitted as the degenerate case: h_v vanishes, no legs, and
  // the "horseshoe" collapses to a horizontal strip (not_horseshoe flag).
  if (!(lam >= 0.0) || lam > fam.lambda_star)
    fail(Err::OutOfDomain, "lambda outside [0, lambda_star]");
  HorseshoeStrip hs;
  hs.n = n;
  hs.lambda = lam;
  hs.K = dc.K;
  hs.delta = dc.delta;
  hs.a_lo = geom.window_lo();
  hs.a_up = geom.window_hi();
  hs.window_lo = geom.window_lo();
  hs.window_hi = geom.window_hi();
  hs.delta_offset = geom.delta_offset;
  hs.fam = fam;

  const double a = hs.window_lo, b = hs.window_hi;
  auto lo = [&](double x) { return hs.b_lo(x); };
  auto up = [&](double x) { return hs.b_up(x); };
  hs.legs_lo = negative_intervals(lo, a, b);
  hs.legs_up = negative_intervals(up, a, b);
  hs.is_horseshoe =
      grid_roots(lo, a, b).size() >= 2 && grid_roots(up, a, b).size() >= 2;
  auto [mx, arg] = grid_max(lo, a, b);
  hs.arch_max = mx;
  hs.arch_argmax = arg;
  return hs;
}

const char* iclass_name(IClass c) {
  switch (c) {
    case IClass::Empty: return "empty";
    case IClass::Irregular: return "irregular";
    case IClass::Regular: return "regular";
  }
  return "?";
}

IntersectionClass classify_intersection(int horizontal_n, int horseshoe_m,
                                        double lam,
                                        const DerivedConstants& dc,
                                        const UnfoldingFamily& fam,
                                        const SectionGeometry& geom) {
  const Strip s = horizontal_strip(horizontal_n, dc, geom);
  const HorseshoeStrip hs = horseshoe_strip(horseshoe_m, lam, dc, fam, geom);
  const double a = s.window_lo, b = s.window_hi;

  const bool regular =
      count_crossings([&](double x) { return hs.b_lo(x) - s.u1(x); }, a, b) >=
          2 &&
      count_crossings([&](double x) { return hs.b_lo(x) - s.u2(x); }, a, b) >=
          2 &&
      count_crossings([&](double x) { return hs.b_up(x) - s.u1(x); }, a, b) >=
          2 &&
      count_crossings([&](double x) { return hs.b_up(x) - s.u2(x); }, a, b) >=
          2;

  // Fiberwise overlap of the two strips at angle x (legs need no clamping:
  // below y = 0 the strip fiber already wins the max).
  auto overlap = [&](double x) {
    return std::min(hs.b_up(x), s.u2(x)) - std::max(hs.b_lo(x), s.u1(x));
  };
  // The overlap can only change sign where an active branch pair crosses:
  // b_up/b_lo and u2/u1 are each strictly ordered, so the zero set lies in
  // the roots of b_up - u1 and b_lo - u2. Partition by those roots and test
  // cell midpoints; a uniform scan would miss the sliver-thin leg overlaps
  // of high-index strips.
  std::vector<double> cuts{a, b};
  for (double r : grid_roots([&](double x) { return hs.b_up(x) - s.u1(x); },
                             a, b))
    cuts.push_back(r);
  for (double r : grid_roots([&](double x) { return hs.b_lo(x) - s.u2(x); },
                             a, b))
    cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  int components = 0;
  bool inside = false, any = false;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    if (overlap(0.5 * (cuts[i] + cuts[i + 1])) >= 0.0) {
      any = true;
      if (!inside) {
        inside = true;
        ++components;
      }
    } else {
      inside = false;
    }
  }
  if (!any) {
    // Near-tangent overlaps can still slip through when the arch grazes a
    // boundary between roots; polish the max before declaring empty.
    auto [mx, arg] = grid_max(overlap, a, b);
    (void)arg;
    if (mx >= 0.0) {
      any = true;
      components = 1;
    }
  }

  IntersectionClass out;
  if (!any) {
    out.value = IClass::Empty;
    out.components = 0;
  } else {
    out.value = regular ? IClass::Regular : IClass::Irregular;
    out.components = components;
  }
  return out;
}

int n0_index(double lam, const DerivedConstants& dc,
             const UnfoldingFamily& fam, const SectionGeometry& geom) {
  const double wall_min =
      std::min(fam.h_v(geom.p_w_2 - geom.tau, lam),
               fam.h_v(geom.p_w_1 + geom.tau, lam));
  if (!(wall_min > 0.0))
    fail(Err::InvariantViolation, "window margin leaves the positive hump");
  // Largest eta-image height over the window is h_n^delta; solve
  // h_n^delta < wall_min for n in closed form.
  const double rhs = (geom.p_v_1 - geom.p_w_2 + 2.0 * geom.tau -
                      dc.K / dc.delta * std::log(wall_min)) /
                     kTwoPi;
  const int n0 = static_cast<int>(std::floor(rhs)) + 1;
  return std::max(1, n0);
}

int min_regular_index(double lam, int search_cap, const DerivedConstants& dc,
                      const UnfoldingFamily& fam,
                      const SectionGeometry& geom) {
  if (search_cap < 1) fail(Err::InvariantViolation, "search cap must be >= 1");
  const int n0 = n0_index(lam, dc, fam, geom);
  for (int cand = 1; cand <= search_cap; ++cand) {
    if (cand < n0) continue;
    if (!(horizontal_strip(cand, dc, geom).h_n < fam.M_w(lam))) continue;
    bool all_regular = true;
    for (int n = cand; n <= cand + 2 && all_regular; ++n) {
      for (int m = cand; m <= cand + 2 && all_regular; ++m) {
        all_regular = classify_intersection(n, m, lam, dc, fam, geom).value ==
                      IClass::Regular;
      }
    }
    if (all_regular) return cand;
  }
  fail(Err::CapExceeded, "no regular index up to the search cap");
}

namespace {

struct TangencySolve {
  double x;
  double lambda;
};

// Tangency between one horseshoe boundary and one strip boundary of strip a:
// the largest lambda where max_x F(x, lambda) = 0 with
//   F(x, lam) = exp(delta*(anchor - (x-off) - 2*pi*n)/K) - lam*s(x-off) - u(x)
// G(lam) = max_x F is monotone increasing in lambda (the arch peak sits where
// s < 0), so a sign bisection brackets the root; a damped two-variable Newton
// step on (F, F_x) then polishes (x*, lambda*) to machine accuracy.
TangencySolve boundary_tangency(int a, double seed, bool lower_vs_u2,
                                const DerivedConstants& dc,
                                const UnfoldingFamily& fam,
                                const SectionGeometry& geom) {
  const Strip s = horizontal_strip(a, dc, geom);
  const double wlo = s.window_lo, whi = s.window_hi;
  const double anchor = lower_vs_u2 ? wlo : whi;
  const double off = geom.delta_offset;

  auto ewall = [&](double x) {
    return std::exp(dc.delta * (anchor - (x - off) - kTwoPi * a) / dc.K);
  };
  auto uval = [&](double x) { return lower_vs_u2 ? s.u2(x) : s.u1(x); };
  auto F = [&](double x, double lam) {
    return ewall(x) - fam.h_v(x - off, lam) - uval(x);
  };
  auto Fx = [&](double x, double lam) {
    return -dc.delta / dc.K * ewall(x) - fam.dh_v(x - off, lam) -
           uval(x) / dc.K;
  };
  auto G = [&](double lam) {
    return grid_max([&](double x) { return F(x, lam); }, wlo, whi);
  };

  if (!(G(seed).first > 0.0))
    fail(Err::NoTangencyFound, "seed lambda is already below the tangency");
  double lam_hi = seed, lam_lo = seed;
  bool bracketed = false;
  for (int k = 0; k < 400; ++k) {
    lam_lo *= 0.9;
    if (G(lam_lo).first < 0.0) {
      bracketed = true;
      break;
    }
    lam_hi = lam_lo;
  }
  if (!bracketed)
    fail(Err::NoTangencyFound, "boundary stays above the strip for all lambda");
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lam_lo + lam_hi);
    if (mid == lam_lo || mid == lam_hi) break;
    (G(mid).first < 0.0 ? lam_lo : lam_hi) = mid;
  }
  double lam = 0.5 * (lam_lo + lam_hi);
  double x = G(lam).second;

  // Newton on r = (F, F_x); dF/dlam = -s(x-off), d(F_x)/dlam = -s'(x-off).
  const double fd = 1e-6;
  for (int it = 0; it < 60; ++it) {
    const double r1 = F(x, lam), r2 = Fx(x, lam);
    const double scale1 = std::max({lam, uval(x), ewall(x)});
    const double scale2 = std::max(lam, scale1 / dc.K);
    if (std::abs(r1) <= 1e-14 * scale1 && std::abs(r2) <= 1e-12 * scale2)
      break;
    const double j11 = r2;
    const double j12 = -fam.s(x - off);
    const double j21 = (Fx(x + fd, lam) - Fx(x - fd, lam)) / (2.0 * fd);
    const double j22 = -fam.ds(x - off);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    double dx = -(r1 * j22 - j12 * r2) / det;
    double dl = -(j11 * r2 - r1 * j21) / det;
    dx = std::clamp(dx, -0.3, 0.3);
    dl = std::clamp(dl, -0.3 * lam, 0.3 * lam);
    double step = 1.0;
    const double base = std::hypot(r1 / scale1, r2 / scale2);
    for (int bt = 0; bt < 25; ++bt) {
      const double xn = std::clamp(x + step * dx, wlo, whi);
      const double ln = lam + step * dl;
      if (ln > 0.0 &&
          std::hypot(F(xn, ln) / scale1, Fx(xn, ln) / scale2) < base) {
        x = xn;
        lam = ln;
        step = 0.0;
        break;
      }
      step *= 0.5;
    }
    if (step != 0.0) break;  // no descent; bisection value stands
  }
  return {x, lam};
}

}  // namespace

DeltaInterval delta_interval(int a, double lam_seed_hi,
                             const DerivedConstants& dc,
                             const UnfoldingFamily& fam,
                             const SectionGeometry& geom) {
  if (a < 1) fail(Err::InvariantViolation, "strip index must be >= 1");
  if (classify_intersection(a, a, lam_seed_hi, dc, fam, geom).value !=
      IClass::Regular)
    fail(Err::NoTangencyFound, "seed lambda is not Regular for this strip");

  const TangencySolve td =
      boundary_tangency(a, lam_seed_hi, /*lower_vs_u2=*/true, dc, fam, geom);
  const TangencySolve tc =
      boundary_tangency(a, lam_seed_hi, /*lower_vs_u2=*/false, dc, fam, geom);
  if (!(tc.lambda < td.lambda))
    fail(Err::OrderingViolated, "tangency lambdas are out of order");

  DeltaInterval di;
  di.a = a;
  di.c = tc.lambda;
  di.d = td.lambda;
  di.tangency_c = {tc.x, tc.lambda};
  di.tangency_d = {td.x, td.lambda};

  // The interval must split the classification into the three phases.
  const double probe_reg = std::min(lam_seed_hi, 1.2 * di.d);
  const double probe_irr = std::sqrt(di.c * di.d);
  const double probe_emp = 0.9 * di.c;
  if (classify_intersection(a, a, probe_reg, dc, fam, geom).value !=
          IClass::Regular ||
      classify_intersection(a, a, probe_irr, dc, fam, geom).value !=
          IClass::Irregular ||
      classify_intersection(a, a, probe_emp, dc, fam, geom).value !=
          IClass::Empty)
    fail(Err::OrderingViolated,
         "classification is not Regular/Irregular/Empty across the interval");
  return di;
}

}  // namespace bykov
