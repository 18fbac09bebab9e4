#include "bykov/tangency.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bykov/errors.hpp"
#include "bykov/helix.hpp"

namespace bykov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// State of the n-pulse gap function at base parameter t: the level-(n-1)
// point is chained in (lift, log-height), then opened with eta. ok=false
// when the chain leaves the upper half before reaching level n-1. The
// tangent (gt, Xt) is propagated analytically alongside: FD in t loses the
// tangency residual to truncation bias, and dg/dX is ill-conditioned near
// folds where Xt vanishes.
struct GapEval {
  double g = 0.0;
  double X = 0.0;  // Out(w) contact lift
  double Y = 0.0;
  double gt = 0.0;  // dg/dt along the chain
  double Xt = 0.0;  // dX/dt
  bool ok = false;
};

struct Ctx {
  int n = 1;  // pulse level
  double window_lo = 0.0, window_hi = 0.0;
  const DerivedConstants& dc;
  const UnfoldingFamily& fam;
  const SectionGeometry& geom;
  const PulseOptions& opts;
  std::vector<double> grid;  // base-parameter samples over the h_w hump
};

GapEval gap_eval(double t, double lam, int n, const DerivedConstants& dc,
                 const UnfoldingFamily& fam, const SectionGeometry& geom) {
  GapEval out;
  double x = t;
  const double hw = fam.h_w(t, lam);
  if (!(hw > 0.0)) return out;
  double ly = std::log(hw);
  double dx = 1.0;                        // dx/dt
  double dly = fam.dh_w(t, lam) / hw;     // d(ln y)/dt
  for (int lvl = 1; lvl < n; ++lvl) {
    const double X = x - dc.K * ly;
    const double Y = std::exp(dc.delta * ly);
    const double g = Y - fam.h_v(X, lam);
    if (!(g > 0.0)) return out;
    const double dX = dx - dc.K * dly;
    const double dg = dc.delta * Y * dly - fam.dh_v(X, lam) * dX;
    x = X + geom.delta_offset;
    ly = std::log(g);
    dx = dX;
    dly = dg / g;
  }
  out.X = x - dc.K * ly;
  out.Y = std::exp(dc.delta * ly);
  out.g = out.Y - fam.h_v(out.X, lam);
  out.Xt = dx - dc.K * dly;
  out.gt = dc.delta * out.Y * dly - fam.dh_v(out.X, lam) * out.Xt;
  out.ok = true;
  return out;
}

// Uniform interior plus geometric tails clustering at the open ends, so the
// log-height of the hump stays resolved where it vanishes.
std::vector<double> make_grid(double a, double b, int bulk, int tail_depth,
                              double tail_ratio) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(bulk) + 2 * tail_depth + 1);
  const double w = b - a;
  for (int i = tail_depth; i >= 1; --i)
    xs.push_back(a + 0.25 * w * std::pow(tail_ratio, i));
  for (int i = 0; i <= bulk; ++i)
    xs.push_back(a + 0.25 * w + 0.5 * w * static_cast<double>(i) / bulk);
  for (int i = 1; i <= tail_depth; ++i)
    xs.push_back(b - 0.25 * w * std::pow(tail_ratio, i));
  return xs;
}

bool positive_at(const Ctx& c, double lam, double t) {
  const GapEval e = gap_eval(t, lam, c.n, c.dc, c.fam, c.geom);
  return e.ok && e.g > 0.0;
}

// Boundary of the predicate (chain alive && g > 0) on [ta, tb]; returns a
// parameter on the predicate-true side, a half-ulp from the boundary.
double pred_bisect(const Ctx& c, double lam, double ta, double tb, bool pa) {
  for (int i = 0; i < 200; ++i) {
    const double tm = 0.5 * (ta + tb);
    if (tm == ta || tm == tb) break;
    if (positive_at(c, lam, tm) == pa) {
      ta = tm;
    } else {
      tb = tm;
    }
  }
  return pa ? ta : tb;
}

void resolve_bracket(const Ctx& c, double lam, double t0, double t1, bool p0,
                     std::vector<Crossing>& locs, bool& near_tangent) {
  const double ts = pred_bisect(c, lam, t0, t1, p0);
  const GapEval e = gap_eval(ts, lam, c.n, c.dc, c.fam, c.geom);
  if (!e.ok) return;
  if (e.X < c.window_lo || e.X > c.window_hi) return;
  Crossing cr;
  cr.t = ts;
  cr.x = e.X;
  cr.y = e.Y;
  cr.slope = e.Xt != 0.0 ? e.gt / e.Xt : kInf;
  // Transversality margin in the chain parameter: dg/dt vanishes exactly at
  // a merging pair, while dg/dX degenerates at helix folds.
  if (std::abs(e.gt) < c.opts.tangent_slope_tol) near_tangent = true;
  locs.push_back(cr);
}

// Re-grids around an interior |g| minimum of a same-sign run until either a
// sign change surfaces (two new crossings) or the minimum stagnates away
// from zero.
void zoom_dip(const Ctx& c, double lam, double ta, double tb,
              std::vector<Crossing>& locs, bool& near_tangent) {
  constexpr int kZoomPts = 64;
  double best_prev = kInf;
  for (int round = 0; round < c.opts.zoom_rounds; ++round) {
    std::array<double, kZoomPts + 1> ts;
    std::array<GapEval, kZoomPts + 1> es;
    for (int i = 0; i <= kZoomPts; ++i) {
      ts[i] = ta + (tb - ta) * static_cast<double>(i) / kZoomPts;
      es[i] = gap_eval(ts[i], lam, c.n, c.dc, c.fam, c.geom);
    }
    bool found = false;
    for (int i = 0; i < kZoomPts; ++i) {
      const bool p0 = es[i].ok && es[i].g > 0.0;
      const bool p1 = es[i + 1].ok && es[i + 1].g > 0.0;
      if (p0 != p1) {
        resolve_bracket(c, lam, ts[i], ts[i + 1], p0, locs, near_tangent);
        found = true;
      }
    }
    if (found) return;
    int j = -1;
    double m = kInf;
    for (int i = 1; i < kZoomPts; ++i) {
      if (!es[i].ok) continue;
      if (std::abs(es[i].g) < m) {
        m = std::abs(es[i].g);
        j = i;
      }
    }
    if (j < 0) return;
    if (m >= 0.9 * best_prev) return;  // resolved: dip stays off zero
    best_prev = m;
    ta = ts[j - 1];
    tb = ts[j + 1];
    if (!(tb - ta > 1e-15 * std::max(std::abs(ta), 1.0))) return;
  }
}

void scan_grid(const Ctx& c, double lam, const std::vector<double>& grid,
               ConnectionCount& out) {
  std::vector<GapEval> es(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    es[i] = gap_eval(grid[i], lam, c.n, c.dc, c.fam, c.geom);
  auto pos = [&](std::size_t i) { return es[i].ok && es[i].g > 0.0; };

  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (pos(i) != pos(i + 1)) {
      resolve_bracket(c, lam, grid[i], grid[i + 1], pos(i), out.locations,
                      out.near_tangent);
    }
  }

  // Same-sign valid runs: refine interior |g| minima for crossings that dip
  // between samples (the mechanism that merges pairs at a tangency).
  std::size_t run_start = 0;
  auto flush_run = [&](std::size_t run_end) {  // [run_start, run_end] valid
    if (run_end < run_start + 2) return;
    for (std::size_t j = run_start + 1; j < run_end; ++j) {
      const double aj = std::abs(es[j].g);
      if (aj <= std::abs(es[j - 1].g) && aj <= std::abs(es[j + 1].g)) {
        zoom_dip(c, lam, grid[j - 1], grid[j + 1], out.locations,
                 out.near_tangent);
      }
    }
  };
  bool in_run = false;
  bool run_sign = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool valid = es[i].ok;
    const bool sg = valid && es[i].g > 0.0;
    if (valid && (!in_run || sg != run_sign)) {
      if (in_run) flush_run(i - 1);
      in_run = true;
      run_sign = sg;
      run_start = i;
    } else if (!valid && in_run) {
      flush_run(i - 1);
      in_run = false;
    }
  }
  if (in_run) flush_run(grid.size() - 1);
}

ConnectionCount count_impl(const Ctx& c, double lam) {
  ConnectionCount out;
  if (c.n <= 1) {
    scan_grid(c, lam, c.grid, out);
  } else {
    // The level-n gap oscillates geometrically faster than the base hump
    // parameter near level-(n-1) segment ends, so one hump-wide grid cannot
    // stay Nyquist-safe. Scan each parent segment with its own tail-refined
    // grid instead: the root ladders accumulate at segment ends, exactly
    // where the tails cluster.
    const auto curves =
        pulse_curves(lam, c.n - 1, c.dc, c.fam, c.geom, c.opts);
    const int bulk = std::max(512, c.opts.bulk / 8);
    for (const auto& seg : curves.back().segments)
      scan_grid(c, lam,
                make_grid(seg.t_lo, seg.t_hi, bulk, c.opts.tail_depth,
                          c.opts.tail_ratio),
                out);
  }
  std::sort(out.locations.begin(), out.locations.end(),
            [](const Crossing& a, const Crossing& b) { return a.t < b.t; });
  out.count = static_cast<int>(out.locations.size());
  return out;
}

}  // namespace

std::vector<PulseCurve> pulse_curves(double lam, int depth,
                                     const DerivedConstants& dc,
                                     const UnfoldingFamily& fam,
                                     const SectionGeometry& geom,
                                     const PulseOptions& opts) {
  if (!(lam >= 0.0) || lam >= fam.lambda_star)
    fail(Err::OutOfDomain, "lambda outside [0, lambda_star)");
  if (depth < 0) fail(Err::InvariantViolation, "depth must be >= 0");

  std::vector<PulseCurve> out;
  {
    PulseCurve base;
    base.level = 0;
    PulseSegment seg;
    seg.t_lo = fam.hump_lo();
    seg.t_hi = fam.hump_hi();
    seg.parent_window = {seg.t_lo, seg.t_hi};
    seg.curve.section = Section::InV;
    for (double t : make_grid(seg.t_lo, seg.t_hi, opts.bulk, opts.tail_depth,
                              opts.tail_ratio)) {
      const double y = fam.h_w(t, lam);
      if (!(y >= opts.min_height_floor)) {
        ++base.truncated_samples;
        continue;
      }
      seg.params.push_back(t);
      seg.curve.samples.emplace_back(t, y);
    }
    if (seg.curve.samples.size() < 8)
      fail(Err::ResolutionExhausted, "base hump entirely below the floor");
    base.segments.push_back(std::move(seg));
    out.push_back(std::move(base));
  }

  for (int lvl = 1; lvl <= depth; ++lvl) {
    const PulseCurve& parent = out.back();
    PulseCurve cur;
    cur.level = lvl;
    Ctx c{lvl, -kInf, kInf, dc, fam, geom, opts, {}};

    // Reference lift for the span cap: tip of this level's helix.
    double lift_min = kInf;
    for (const auto& pseg : parent.segments) {
      for (double t : pseg.params) {
        const GapEval e = gap_eval(t, lam, lvl, dc, fam, geom);
        if (e.ok) lift_min = std::min(lift_min, e.X);
      }
    }
    if (lift_min == kInf)
      fail(Err::ResolutionExhausted, "no live samples at this level");
    const double lift_cap = lift_min + opts.lift_span_cap;

    for (const auto& pseg : parent.segments) {
      // W+ windows: maximal sub-intervals with g > 0 along the helix.
      std::vector<std::pair<double, double>> windows;
      double open_at = 0.0;
      bool open = false;
      for (std::size_t i = 0; i < pseg.params.size(); ++i) {
        const double t = pseg.params[i];
        const bool p = positive_at(c, lam, t);
        if (p && !open) {
          open = true;
          open_at = (i == 0) ? t
                             : pred_bisect(c, lam, pseg.params[i - 1], t,
                                           /*pa=*/false) ;
        } else if (!p && open) {
          open = false;
          const double close_at =
              pred_bisect(c, lam, pseg.params[i - 1], t, /*pa=*/true);
          windows.emplace_back(open_at, close_at);
        }
      }
      if (open) windows.emplace_back(open_at, pseg.params.back());

      for (const auto& [ta, tb] : windows) {
        if (!(tb - ta > 1e-12 * (pseg.t_hi - pseg.t_lo))) {
          ++cur.pruned_segments;
          continue;
        }
        const GapEval ea = gap_eval(ta, lam, lvl, dc, fam, geom);
        const GapEval eb = gap_eval(tb, lam, lvl, dc, fam, geom);
        PulseSegment seg;
        seg.t_lo = ta;
        seg.t_hi = tb;
        seg.parent_window = {std::min(ea.X, eb.X), std::max(ea.X, eb.X)};
        seg.curve.section = Section::InV;
        for (double t : make_grid(ta, tb, opts.bulk, opts.tail_depth,
                                  opts.tail_ratio)) {
          const GapEval e = gap_eval(t, lam, lvl, dc, fam, geom);
          if (!e.ok) continue;
          if (e.X > lift_cap) {
            ++cur.truncated_span;
            continue;
          }
          if (!(e.g >= opts.min_height_floor)) {
            ++cur.truncated_samples;
            continue;
          }
          seg.params.push_back(t);
          seg.curve.samples.emplace_back(e.X + geom.delta_offset, e.g);
        }
        if (seg.curve.samples.size() < 8) {
          ++cur.pruned_segments;
          continue;
        }
        cur.segments.push_back(std::move(seg));
      }
    }
    if (cur.segments.empty())
      fail(Err::ResolutionExhausted, "all segments pruned at this level");
    out.push_back(std::move(cur));
  }
  return out;
}

std::pair<double, double> pulse_window(int n, double lam_hi, double lam_lo,
                                       const DerivedConstants& dc,
                                       const UnfoldingFamily& fam,
                                       const SectionGeometry& geom,
                                       const PulseOptions& opts) {
  if (n < 1) fail(Err::InvariantViolation, "pulse must be >= 1");
  if (!(0.0 < lam_lo && lam_lo <= lam_hi && lam_hi < fam.lambda_star))
    fail(Err::OutOfDomain, "need 0 < lambda_lo <= lambda_hi < lambda_star");

  double fold_lo = kInf, fold_hi = -kInf;
  for (double lam : {lam_hi, lam_lo}) {
    if (n == 1) {
      const auto roots = fold_points(
          [&](double x) { return fam.h_w(x, lam); },
          [&](double x) { return fam.dh_w(x, lam); }, fam.hump_lo(),
          fam.hump_hi(), dc.K);
      for (double t : roots) {
        const double lift = t - dc.K * std::log(fam.h_w(t, lam));
        fold_lo = std::min(fold_lo, lift);
        fold_hi = std::max(fold_hi, lift);
      }
    } else {
      const auto curves = pulse_curves(lam, n - 1, dc, fam, geom, opts);
      // The spike over a near-tangency dip is an interior lift maximum
      // flanked by lower lifts on both sides. Sliver segments between
      // same-flank roots have their maxima at the (diverging) ends and
      // carry only FP-noise interior blips, whose prominence is bounded
      // by the height floor at ~1e-2; a genuine tip clears 5e-2 easily.
      for (const auto& seg : curves.back().segments) {
        const auto& s = seg.curve.samples;
        std::vector<double> lifts(s.size());
        for (std::size_t i = 0; i < lifts.size(); ++i)
          lifts[i] = s[i].first - dc.K * std::log(s[i].second);
        for (std::size_t i = 1; i + 1 < lifts.size(); ++i) {
          if (!(lifts[i] > lifts[i - 1] && lifts[i] > lifts[i + 1])) continue;
          double base_l = lifts[i], base_r = lifts[i];
          for (std::size_t j = i; j-- > 0 && lifts[j] < lifts[i];)
            base_l = std::min(base_l, lifts[j]);
          for (std::size_t j = i + 1; j < lifts.size() && lifts[j] < lifts[i];
               ++j)
            base_r = std::min(base_r, lifts[j]);
          if (lifts[i] - std::max(base_l, base_r) < 0.05) continue;
          fold_lo = std::min(fold_lo, lifts[i]);
          fold_hi = std::max(fold_hi, lifts[i]);
        }
      }
    }
  }
  if (!(fold_lo <= fold_hi))
    fail(Err::ResolutionExhausted, "no folds found for the pulse window");

  // Snap to the centers of the h_v < 0 arc: no crossing can sit there, so
  // counts inside the window change only at tangencies.
  const double anchor = 0.5 * (fam.p_w_1 + fam.p_w_2);
  double wlo = snap_down(fold_lo - kTwoPi, anchor);
  double whi = snap_up(fold_hi + kTwoPi, anchor);
  // If the span cap binds, keep the high side: the fold tips closest to a
  // tangency sit at the largest lifts.
  wlo = std::max(wlo, snap_down(whi - opts.lift_span_cap, anchor));
  return {wlo, whi};
}

ConnectionCount count_pulse_connections(double lam, int n, double window_lo,
                                        double window_hi,
                                        const DerivedConstants& dc,
                                        const UnfoldingFamily& fam,
                                        const SectionGeometry& geom,
                                        const PulseOptions& opts) {
  if (n < 0) fail(Err::InvariantViolation, "pulse must be >= 0");
  if (!(lam > 0.0) || lam >= fam.lambda_star)
    fail(Err::OutOfDomain, "lambda outside (0, lambda_star)");
  if (n == 0) {
    ConnectionCount out;
    out.count = 2;
    Crossing c2;
    c2.t = fam.hump_lo();
    c2.x = fam.p_w_2;
    c2.y = 0.0;
    c2.slope = fam.dh_w(fam.hump_lo(), lam);
    Crossing c1;
    c1.t = fam.hump_hi();
    c1.x = fam.p_w_1;
    c1.y = 0.0;
    c1.slope = fam.dh_w(fam.hump_hi(), lam);
    out.locations = {c2, c1};
    return out;
  }
  if (!(window_lo < window_hi))
    fail(Err::InvariantViolation, "empty count window");
  Ctx c{n,  window_lo, window_hi, dc, fam, geom, opts,
        make_grid(fam.hump_lo(), fam.hump_hi(), opts.bulk, opts.tail_depth,
                  opts.tail_ratio)};
  ConnectionCount out = count_impl(c, lam);
  if (out.near_tangent)
    fail(Err::TangentRoot, "a crossing has near-zero helix slope");
  return out;
}

namespace {

// Newton polish of a merging pair: solve g = 0, dg/dt = 0 in (t, lambda).
TangencyEvent polish_event(const Ctx& c, int pulse, double lo, int clo,
                           double hi, int chi) {
  const bool pair_hi = chi > clo;
  const double lam_p = pair_hi ? hi : lo;
  const double lam_m = pair_hi ? lo : hi;
  const ConnectionCount rp = count_impl(c, lam_p);
  const ConnectionCount rm = count_impl(c, lam_m);

  // Roots of the sparse side consume their nearest rich-side partners; what
  // is left unmatched is the merging pair.
  std::vector<char> used(rp.locations.size(), 0);
  for (const auto& m : rm.locations) {
    int best = -1;
    double bd = kInf;
    for (std::size_t i = 0; i < rp.locations.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(rp.locations[i].t - m.t);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    if (best >= 0) used[best] = 1;
  }
  std::vector<const Crossing*> left;
  for (std::size_t i = 0; i < rp.locations.size(); ++i)
    if (!used[i]) left.push_back(&rp.locations[i]);

  double t = 0.0;
  if (left.size() >= 2) {
    // unmatched roots are t-sorted; the tightest adjacent pair merges
    double bd = kInf;
    for (std::size_t i = 0; i + 1 < left.size(); ++i) {
      const double d = left[i + 1]->t - left[i]->t;
      if (d < bd) {
        bd = d;
        t = 0.5 * (left[i]->t + left[i + 1]->t);
      }
    }
  } else if (left.size() == 1) {
    t = left[0]->t;
  } else {
    fail(Err::ResolutionExhausted, "no merging pair across the bracket");
  }

  double lam = 0.5 * (lo + hi);
  auto E = [&](double tt, double ll) {
    return gap_eval(tt, ll, c.n, c.dc, c.fam, c.geom);
  };
  const double ht = 1e-7;
  auto norm = [&](double r1, double r2) { return std::hypot(r1, r2 * 1e-2); };
  for (int it = 0; it < 80; ++it) {
    const double hl = 1e-7 * lam;
    const GapEval e0 = E(t, lam);
    const GapEval ep = E(t + ht, lam), em = E(t - ht, lam);
    const GapEval el = E(t, lam + hl), eL = E(t, lam - hl);
    if (!(e0.ok && ep.ok && em.ok && el.ok && eL.ok)) break;
    const double r1 = e0.g, r2 = e0.gt;
    if (std::abs(r1) <= 1e-13 && std::abs(r2) <= 1e-12) break;
    // residuals are analytic; the Jacobian may be differenced without
    // biasing the root
    const double j11 = e0.gt;
    const double j12 = (el.g - eL.g) / (2.0 * hl);
    const double j21 = (ep.gt - em.gt) / (2.0 * ht);
    const double j22 = (el.gt - eL.gt) / (2.0 * hl);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    double dt = -(r1 * j22 - j12 * r2) / det;
    double dl = -(j11 * r2 - r1 * j21) / det;
    dt = std::clamp(dt, -0.2, 0.2);
    dl = std::clamp(dl, -0.2 * lam, 0.2 * lam);
    const double base = norm(r1, r2);
    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
      const double tn = t + step * dt;
      const double ln = lam + step * dl;
      const GapEval en = E(tn, ln);
      if (!en.ok) continue;
      if (norm(en.g, en.gt) < base) {
        t = tn;
        lam = ln;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  const GapEval e = gap_eval(t, lam, c.n, c.dc, c.fam, c.geom);
  if (!e.ok || !(std::abs(e.g) <= 1e-10) || !(std::abs(e.gt) <= 1e-8))
    fail(Err::ResolutionExhausted, "tangency polish missed its tolerances");

  TangencyEvent ev;
  ev.pulse = pulse;
  ev.lambda = lam;
  ev.location = CylPoint::make(Section::OutW, e.X, e.Y);
  ev.residual_g = std::abs(e.g);
  ev.residual_gp = std::abs(e.gt);
  ev.bracket_lo = std::min(lo, lam);
  ev.bracket_hi = std::max(hi, lam);
  return ev;
}

void locate_events(const Ctx& c, int pulse, double la, int ca, double lb,
                   int cb, int max_events, int depth,
                   std::vector<TangencyEvent>& out) {
  if (ca == cb) return;
  if (depth > 64) fail(Err::ResolutionExhausted, "event recursion too deep");
  double lo = la, hi = lb;
  int clo = ca;
  while (hi - lo > c.opts.bisect_rel * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int cm = count_impl(c, mid).count;
    if (cm == cb) {
      hi = mid;
    } else {
      lo = mid;
      clo = cm;
    }
  }
  out.push_back(polish_event(c, pulse, lo, clo, hi, cb));
  if (static_cast<int>(out.size()) > max_events)
    fail(Err::MaxEventsReached, "more tangencies than max_events");
  locate_events(c, pulse, la, ca, lo, clo, max_events, depth + 1, out);
}

}  // namespace

std::vector<TangencyEvent> find_tangencies(double lam_hi, double lam_lo,
                                           int pulse, int max_events,
                                           const DerivedConstants& dc,
                                           const UnfoldingFamily& fam,
                                           const SectionGeometry& geom,
                                           const PulseOptions& opts) {
  if (pulse < 1) fail(Err::InvariantViolation, "pulse must be >= 1");
  if (!(0.0 < lam_lo && lam_lo < lam_hi && lam_hi < fam.lambda_star))
    fail(Err::OutOfDomain, "need 0 < lambda_lo < lambda_hi < lambda_star");
  if (max_events < 1) fail(Err::InvariantViolation, "max_events must be >= 1");

  const auto [wlo, whi] = pulse_window(pulse, lam_hi, lam_lo, dc, fam, geom,
                                       opts);
  Ctx c{pulse, wlo, whi, dc, fam, geom, opts,
        make_grid(fam.hump_lo(), fam.hump_hi(), opts.bulk, opts.tail_depth,
                  opts.tail_ratio)};

  std::vector<double> grid;
  for (double l = lam_hi; l > lam_lo; l *= opts.lambda_ratio)
    grid.push_back(l);
  grid.push_back(lam_lo);

  std::vector<int> counts(grid.size());
  parallel_for(grid.size(), opts.jobs, [&](std::size_t i) {
    counts[i] = count_impl(c, grid[i]).count;
  });

  std::vector<TangencyEvent> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (counts[i] != counts[i + 1]) {
      locate_events(c, pulse, grid[i + 1], counts[i + 1], grid[i], counts[i],
                    max_events, 0, out);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const TangencyEvent& a, const TangencyEvent& b) {
              return a.lambda > b.lambda;
            });
  return out;
}

}  // namespace bykov
