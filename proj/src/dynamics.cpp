#include "bykov/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "bykov/errors.hpp"

namespace bykov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kUnderflowFloor = 1e-300;

struct Mults {
  double mu1, mu2;  // moduli, mu1 <= mu2
  bool complex_pair;
};

Mults multipliers(const std::array<std::array<double, 2>, 2>& m) {
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double disc = tr * tr - 4.0 * det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    double a = std::abs(0.5 * (tr + s));
    double b = std::abs(0.5 * (tr - s));
    if (a > b) std::swap(a, b);
    return {a, b, false};
  }
  const double r = std::sqrt(std::abs(det));
  return {r, r, true};
}

FpType classify_mults(const Mults& mu, double tol = 1e-9) {
  if (std::abs(mu.mu1 - 1.0) <= tol || std::abs(mu.mu2 - 1.0) <= tol)
    return FpType::NonHyperbolic;
  if (mu.mu2 < 1.0) return FpType::Sink;
  if (mu.mu1 > 1.0) return FpType::Source;
  return FpType::Saddle;
}

}  // namespace

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::MaxIters: return "max_iters";
    case Termination::EscapedLower: return "escaped_lower";
    case Termination::OnStableManifold: return "on_stable_manifold";
    case Termination::LeftNeighborhood: return "left_neighborhood";
  }
  return "?";
}

const char* fp_type_name(FpType t) {
  switch (t) {
    case FpType::Sink: return "sink";
    case FpType::Saddle: return "saddle";
    case FpType::Source: return "source";
    case FpType::NonHyperbolic: return "non_hyperbolic";
  }
  return "?";
}

const char* bif_kind_name(BifurcationEvent::Kind k) {
  switch (k) {
    case BifurcationEvent::Kind::SaddleNode: return "saddle_node";
    case BifurcationEvent::Kind::Flip: return "flip";
  }
  return "?";
}

int strip_label(double x, double y, const DerivedConstants& dc,
                const SectionGeometry& geom) {
  if (!(y > 0.0) || y >= 1.0) return kGapLabel;
  const double wlo = geom.window_lo(), whi = geom.window_hi();
  const double mid = 0.5 * (wlo + whi);
  const double xr = mid + std::remainder(x - mid, kTwoPi);
  if (xr < wlo || xr > whi) return kGapLabel;
  const double shift = xr - dc.K * std::log(y);
  const double a1 = (shift - geom.p_w_1 - geom.tau) / kTwoPi;
  const double a2 = (shift - geom.p_w_2 + geom.tau) / kTwoPi;
  for (int n = static_cast<int>(std::floor(a1));
       n <= static_cast<int>(std::ceil(a2)); ++n) {
    if (n < 1) continue;
    if (horizontal_strip(n, dc, geom).contains(xr, y)) return n;
  }
  return kGapLabel;
}

OrbitRecord iterate_orbit(const CylPoint& p0, double lam, int max_iters,
                          const DerivedConstants& dc,
                          const UnfoldingFamily& fam,
                          const SectionGeometry& geom) {
  if (!(p0.y > 0.0)) fail(Err::NonPositiveHeight, "orbit start needs y > 0");
  if (p0.y > 1.0) fail(Err::OutOfDomain, "orbit start above the chart");
  if (max_iters < 0) fail(Err::InvariantViolation, "max_iters must be >= 0");

  OrbitRecord rec;
  double x = p0.x;
  double ly = p0.log_y ? *p0.log_y : std::log(p0.y);
  rec.points.push_back(CylPoint::make(Section::InV, x, p0.y));
  rec.itinerary.push_back(strip_label(x, p0.y, dc, geom));
  rec.termination = Termination::MaxIters;

  for (int it = 0; it < max_iters; ++it) {
    const double X = x - dc.K * ly;
    const double Y = std::exp(dc.delta * ly);
    const double yn = Y - fam.h_v(X, lam);
    const double xn = X + geom.delta_offset;
    if (yn < 0.0) {
      rec.points.push_back(CylPoint{Section::InV, xn, yn, std::nullopt});
      rec.itinerary.push_back(kGapLabel);
      rec.termination = Termination::EscapedLower;
      return rec;
    }
    if (yn < kUnderflowFloor) {
      rec.points.push_back(CylPoint{Section::InV, xn, yn, std::nullopt});
      rec.itinerary.push_back(kGapLabel);
      rec.termination = Termination::OnStableManifold;
      return rec;
    }
    if (yn > 1.0) {
      rec.points.push_back(CylPoint::make(Section::InV, xn, yn));
      rec.itinerary.push_back(kGapLabel);
      rec.termination = Termination::LeftNeighborhood;
      return rec;
    }
    x = xn;
    ly = std::log(yn);
    rec.points.push_back(CylPoint::make(Section::InV, x, yn));
    rec.itinerary.push_back(strip_label(x, yn, dc, geom));
  }
  return rec;
}

namespace {

// Branch m of R_lambda: the lift advances by exactly 2*pi*m across the
// return, pinning y_m; what remains is lam * s(x - offset) = y_m^delta - y_m.
std::vector<FixedPointInfo> solve_branch(double lam, int m,
                                         const DerivedConstants& dc,
                                         const UnfoldingFamily& fam,
                                         const SectionGeometry& geom) {
  const double ym = std::exp((geom.delta_offset - kTwoPi * m) / dc.K);
  const double rhs = (std::pow(ym, dc.delta) - ym) / lam;  // target for s

  std::vector<double> roots;  // of s(u) = rhs over one period
  if (fam.shape == UnfoldingFamily::Shape::Cosine) {
    const double val = -rhs;  // cos(u - phase) = val
    if (std::abs(val) <= 1.0) {
      const double a = std::acos(val);
      roots.push_back(fam.phase + a);
      if (a > 0.0 && a < kPi) roots.push_back(fam.phase - a);
    }
  } else {
    const int grid = 8192;
    auto f = [&](double u) { return fam.s(u) - rhs; };
    double prev = f(fam.p_w_1);
    for (int i = 1; i <= grid; ++i) {
      const double u = fam.p_w_1 + kTwoPi * static_cast<double>(i) / grid;
      const double cur = f(u);
      if (prev == 0.0) roots.push_back(u - kTwoPi / grid);
      else if (cur != 0.0 && std::signbit(cur) != std::signbit(prev))
        roots.push_back(bisect(f, u - kTwoPi / grid, u));
      prev = cur;
    }
  }

  std::vector<FixedPointInfo> out;
  for (double u : roots) {
    double x = u + geom.delta_offset;
    // polish the angular equation at fixed y_m
    for (int it = 0; it < 8; ++it) {
      const double r = lam * fam.s(x - geom.delta_offset) -
                       (std::pow(ym, dc.delta) - ym);
      const double dr = lam * fam.ds(x - geom.delta_offset);
      if (dr == 0.0) break;
      const double step = r / dr;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    FixedPointInfo fp;
    fp.branch = m;
    fp.x = lift_normalize(x);
    fp.y = ym;
    const CylPoint p = CylPoint::make(Section::InV, fp.x, ym);
    const ReturnJacobian rj = return_jacobian(p, lam, dc, fam);
    fp.det = rj.det_analytic;
    const Mults mu = multipliers(rj.m);
    fp.mu1 = mu.mu1;
    fp.mu2 = mu.mu2;
    fp.complex_pair = mu.complex_pair;
    fp.type = classify_mults(mu);
    const ReturnResult rr = return_map(p, lam, dc, fam, geom);
    fp.residual = std::hypot(std::remainder(rr.point.x - fp.x, kTwoPi),
                             rr.point.y - fp.y);
    out.push_back(fp);
  }
  std::sort(out.begin(), out.end(),
            [](const FixedPointInfo& a, const FixedPointInfo& b) {
              return a.x < b.x;
            });
  return out;
}

}  // namespace

std::vector<FixedPointInfo> fixed_points(double lam, int m,
                                         const DerivedConstants& dc,
                                         const UnfoldingFamily& fam,
                                         const SectionGeometry& geom) {
  if (m < 1) fail(Err::InvariantViolation, "branch must be >= 1");
  if (!(lam > 0.0) || lam >= fam.lambda_star)
    fail(Err::OutOfDomain, "lambda outside (0, lambda_star)");
  auto out = solve_branch(lam, m, dc, fam, geom);
  if (out.empty())
    fail(Err::NoSolution, "branch height is out of the unfolding's range");
  return out;
}

namespace {

double det_j_plus_i(const FixedPointInfo& fp, double lam,
                    const DerivedConstants& dc, const UnfoldingFamily& fam) {
  const ReturnJacobian rj = return_jacobian(
      CylPoint::make(Section::InV, fp.x, fp.y), lam, dc, fam);
  const auto& m = rj.m;
  return (1.0 + m[0][0]) * (1.0 + m[1][1]) - m[0][1] * m[1][0];
}

const FixedPointInfo* nearest_by_x(const std::vector<FixedPointInfo>& fps,
                                   double x_ref) {
  const FixedPointInfo* best = nullptr;
  double bd = kInf;
  for (const auto& fp : fps) {
    const double d = std::abs(std::remainder(fp.x - x_ref, kTwoPi));
    if (d < bd) {
      bd = d;
      best = &fp;
    }
  }
  return best;
}

// One application of R_lambda as a plain (x, y) map; NaN when leaving the
// upper half (Newton treats it as a rejected step).
std::pair<double, double> rmap_xy(double x, double y, double lam,
                                  const DerivedConstants& dc,
                                  const UnfoldingFamily& fam,
                                  const SectionGeometry& geom) {
  if (!(y > 0.0) || y > 1.0) return {NAN, NAN};
  const double X = x - dc.K * std::log(y);
  const double yn = std::pow(y, dc.delta) - fam.h_v(X, lam);
  return {X + geom.delta_offset, yn};
}

Period2Info try_period2(double lam, const FixedPointInfo& fp,
                        const DerivedConstants& dc,
                        const UnfoldingFamily& fam,
                        const SectionGeometry& geom) {
  Period2Info info;
  info.probe_lambda = lam;
  std::vector<FixedPointInfo> fps;
  try {
    fps = solve_branch(lam, fp.branch, dc, fam, geom);
  } catch (const ModelError&) {
    return info;
  }
  const FixedPointInfo* base = nearest_by_x(fps, fp.x);
  if (!base) return info;

  // residual of R^2 around the branch, with the lift folded back
  auto G = [&](double x, double y) -> std::pair<double, double> {
    const auto [x1, y1] = rmap_xy(x, y, lam, dc, fam, geom);
    if (!std::isfinite(y1) || !(y1 > 0.0) || y1 > 1.0) return {NAN, NAN};
    const auto [x2, y2] = rmap_xy(x1, y1, lam, dc, fam, geom);
    if (!std::isfinite(y2)) return {NAN, NAN};
    return {std::remainder(x2 - x, kTwoPi), y2 - y};
  };

  auto polish = [&](double& x, double& y) -> bool {
    for (int it = 0; it < 60; ++it) {
      const auto [g1, g2] = G(x, y);
      if (!std::isfinite(g1 + g2)) return false;
      if (std::hypot(g1, g2) < 1e-13) return true;
      const double hx = 1e-8, hy = 1e-8 * y;
      const auto [gx1, gx2] = G(x + hx, y);
      const auto [gX1, gX2] = G(x - hx, y);
      const auto [gy1, gy2] = G(x, y + hy);
      const auto [gY1, gY2] = G(x, y - hy);
      if (!std::isfinite(gx1 + gX1 + gy1 + gY1)) return false;
      const double j11 = (gx1 - gX1) / (2.0 * hx);
      const double j21 = (gx2 - gX2) / (2.0 * hx);
      const double j12 = (gy1 - gY1) / (2.0 * hy);
      const double j22 = (gy2 - gY2) / (2.0 * hy);
      const double det = j11 * j22 - j12 * j21;
      if (det == 0.0) return false;
      double dx = -(g1 * j22 - j12 * g2) / det;
      double dy = -(j11 * g2 - g1 * j21) / det;
      dx = std::clamp(dx, -0.5, 0.5);
      dy = std::clamp(dy, -0.5 * y, 0.5 * y);
      x += dx;
      y += dy;
      if (!(y > 0.0)) return false;
    }
    return false;
  };

  // eigendirection of mu = -1: (J + I) v = 0 with J11 = 1 gives
  // v ~ (K / (2 y), 1).
  const double vx = dc.K / (2.0 * base->y), vy = 1.0;
  const double vn = std::hypot(vx, vy);

  for (double eps : {0.05, -0.05, 0.2, -0.2}) {
    // Newton seeded near the branch point converges back to it (the branch
    // is itself a root of G), so ride the dynamics out of the unstable
    // point first: a flip-born cycle is stable where it exists, and the
    // folded iteration lands on it.
    double x = base->x + eps * base->y * vx / vn;
    double y = base->y + eps * base->y * vy / vn;
    bool alive = true;
    for (int it = 0; it < 4096; ++it) {
      const auto [x1, y1] = rmap_xy(x, y, lam, dc, fam, geom);
      if (!std::isfinite(y1) || !(y1 > 0.0) || y1 > 1.0) {
        alive = false;
        break;
      }
      x = base->x + std::remainder(x1 - base->x, kTwoPi);
      y = y1;
    }
    if (!alive) continue;
    if (!polish(x, y)) continue;
    // reject convergence back to the fixed point
    if (std::abs(std::remainder(x - base->x, kTwoPi)) < 1e-7 &&
        std::abs(y - base->y) < 1e-7 * base->y)
      continue;
    const auto [x1, y1] = rmap_xy(x, y, lam, dc, fam, geom);
    if (!std::isfinite(y1) || !(y1 > 0.0)) continue;
    const ReturnJacobian ja =
        return_jacobian(CylPoint::make(Section::InV, x, y), lam, dc, fam);
    const ReturnJacobian jb =
        return_jacobian(CylPoint::make(Section::InV, x1, y1), lam, dc, fam);
    std::array<std::array<double, 2>, 2> prod{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        prod[i][j] = jb.m[i][0] * ja.m[0][j] + jb.m[i][1] * ja.m[1][j];
    const Mults mu = multipliers(prod);
    info.found = true;
    info.stable = mu.mu2 < 1.0;
    info.x = lift_normalize(x);
    info.y = y;
    info.mu1 = mu.mu1;
    info.mu2 = mu.mu2;
    return info;
  }
  return info;
}

}  // namespace

std::vector<BifurcationEvent> track_bifurcations(int m, double lam_lo,
                                                 double lam_hi,
                                                 const DerivedConstants& dc,
                                                 const UnfoldingFamily& fam,
                                                 const SectionGeometry& geom) {
  if (m < 1) fail(Err::InvariantViolation, "branch must be >= 1");
  if (!(0.0 < lam_lo && lam_lo < lam_hi && lam_hi < fam.lambda_star))
    fail(Err::OutOfDomain, "need 0 < lambda_lo < lambda_hi < lambda_star");

  auto solutions = [&](double l) { return solve_branch(l, m, dc, fam, geom); };
  std::vector<BifurcationEvent> events;

  const bool e_lo = !solutions(lam_lo).empty();
  const bool e_hi = !solutions(lam_hi).empty();
  double birth = lam_lo;
  if (!e_hi) return events;  // branch absent throughout (or above range)
  if (!e_lo) {
    double a = lam_lo, b = lam_hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double mid = 0.5 * (a + b);
      (solutions(mid).empty() ? a : b) = mid;
    }
    birth = b;
    const auto sols = solutions(b);
    BifurcationEvent ev;
    ev.kind = BifurcationEvent::Kind::SaddleNode;
    ev.m = m;
    ev.lambda = 0.5 * (a + b);
    ev.x = sols.front().x;
    ev.y = sols.front().y;
    ev.det = sols.front().det;
    events.push_back(ev);
  }

  // Flip scan: follow each solution of the branch by x-continuity and
  // bisect sign changes of det(J + I).
  const double start = std::min(lam_hi, birth * (1.0 + 1e-9));
  const int grid_n = 256;
  std::vector<double> grid;
  for (int i = 0; i <= grid_n; ++i)
    grid.push_back(start * std::pow(lam_hi / start,
                                    static_cast<double>(i) / grid_n));
  auto branch_det = [&](double l, double x_ref, double* x_out) -> double {
    const auto sols = solutions(l);
    const FixedPointInfo* fp = nearest_by_x(sols, x_ref);
    if (!fp) return std::numeric_limits<double>::quiet_NaN();
    if (x_out) *x_out = fp->x;
    return det_j_plus_i(*fp, l, dc, fam);
  };

  auto prev_sols = solutions(grid.front());
  for (std::size_t gi = 0; gi + 1 < grid.size(); ++gi) {
    const double l0 = grid[gi], l1 = grid[gi + 1];
    for (const auto& fp : prev_sols) {
      double x_ref = fp.x;
      const double d0 = branch_det(l0, x_ref, &x_ref);
      double x_ref1 = x_ref;
      const double d1 = branch_det(l1, x_ref, &x_ref1);
      if (!std::isfinite(d0) || !std::isfinite(d1)) continue;
      if (std::signbit(d0) == std::signbit(d1)) continue;
      double a = l0, b = l1, xa = x_ref;
      const bool sa = std::signbit(d0);
      while (b - a > 1e-10) {
        const double mid = 0.5 * (a + b);
        double xm = xa;
        const double dm = branch_det(mid, xa, &xm);
        if (std::signbit(dm) == sa) {
          a = mid;
          xa = xm;
        } else {
          b = mid;
        }
      }
      const double lf = 0.5 * (a + b);
      const auto sols = solutions(lf);
      const FixedPointInfo* at = nearest_by_x(sols, xa);
      if (!at) continue;
      BifurcationEvent ev;
      ev.kind = BifurcationEvent::Kind::Flip;
      ev.m = m;
      ev.lambda = lf;
      ev.x = at->x;
      ev.y = at->y;
      ev.det = at->det;
      if (at->det < 1.0) {
        for (double rel : {0.02, 0.05, 0.005, -0.02, -0.05}) {
          const double probe = lf * (1.0 + rel);
          if (!(probe > 0.0) || probe >= fam.lambda_star) continue;
          const Period2Info info = try_period2(probe, *at, dc, fam, geom);
          if (info.found && (!ev.period2.found || info.stable)) {
            ev.period2 = info;
          }
          if (ev.period2.found && ev.period2.stable) break;
        }
      }
      events.push_back(ev);
    }
    prev_sols = solutions(l1);
  }

  std::sort(events.begin(), events.end(),
            [](const BifurcationEvent& a, const BifurcationEvent& b) {
              return a.lambda < b.lambda;
            });
  // Drop duplicate flips found from both solution tracks at the same lambda.
  events.erase(std::unique(events.begin(), events.end(),
                           [](const BifurcationEvent& a,
                              const BifurcationEvent& b) {
                             return a.kind == b.kind &&
                                    std::abs(a.lambda - b.lambda) < 1e-8 &&
                                    std::abs(std::remainder(a.x - b.x,
                                                            kTwoPi)) < 1e-6;
                           }),
               events.end());
  return events;
}

namespace {

enum class EndType { Below, Above, Cut };

struct Component {
  double s0, s1;
  EndType t0, t1;
};

// Connected components of the fiberwise overlap between H_m and the
// horseshoe image of H_n, with end classification for the covering test.
std::vector<Component> overlap_components(const Strip& sm,
                                          const HorseshoeStrip& hn) {
  const double a = sm.window_lo, b = sm.window_hi;
  auto O = [&](double s) {
    return std::min(hn.b_up(s), sm.u2(s)) - std::max(hn.b_lo(s), sm.u1(s));
  };
  constexpr int kGrid = 4096;
  auto at = [&](int i) { return a + (b - a) * static_cast<double>(i) / kGrid; };

  auto edge = [&](double lo, double hi, bool rising) {
    // O sign change in [lo, hi]; returns the zero to ~1e-14 * span
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((O(mid) >= 0.0) == rising) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  auto end_type = [&](double s) {
    const double vu = std::abs(hn.b_up(s) - sm.u1(s));
    const double vl = std::abs(hn.b_lo(s) - sm.u2(s));
    return vu <= vl ? EndType::Below : EndType::Above;
  };

  std::vector<Component> comps;
  bool inside = O(at(0)) >= 0.0;
  Component cur{};
  if (inside) {
    cur.s0 = a;
    cur.t0 = EndType::Cut;
  }
  for (int i = 1; i <= kGrid; ++i) {
    const bool now = O(at(i)) >= 0.0;
    if (now && !inside) {
      cur = Component{};
      cur.s0 = edge(at(i - 1), at(i), /*rising=*/true);
      cur.t0 = end_type(cur.s0);
    } else if (!now && inside) {
      cur.s1 = edge(at(i - 1), at(i), /*rising=*/false);
      cur.t1 = end_type(cur.s1);
      comps.push_back(cur);
    }
    inside = now;
  }
  if (inside) {
    cur.s1 = b;
    cur.t1 = EndType::Cut;
    comps.push_back(cur);
  }
  return comps;
}

}  // namespace

CoveringReport covering_check(const std::vector<int>& strips, double lam,
                              const DerivedConstants& dc,
                              const UnfoldingFamily& fam,
                              const SectionGeometry& geom) {
  CoveringReport rep;
  rep.alphabet = static_cast<int>(strips.size());
  bool all_ok = true;
  for (int n : strips) {
    for (int m : strips) {
      PairCovering pc;
      pc.image_strip = n;
      pc.target_strip = m;
      const IntersectionClass ic =
          classify_intersection(m, n, lam, dc, fam, geom);
      pc.cls = ic.value;
      pc.components = ic.components;
      if (ic.value != IClass::Regular) {
        pc.covered = false;
        pc.note = "intersection not regular";
      } else {
        const Strip sm = horizontal_strip(m, dc, geom);
        const HorseshoeStrip hn = horseshoe_strip(n, lam, dc, fam, geom);
        const auto comps = overlap_components(sm, hn);
        pc.components = static_cast<int>(comps.size());
        pc.covered = !comps.empty();
        for (const auto& c : comps) {
          const bool full = (c.t0 == EndType::Below && c.t1 == EndType::Above) ||
                            (c.t0 == EndType::Above && c.t1 == EndType::Below);
          if (!full) {
            pc.covered = false;
            pc.note = (c.t0 == EndType::Cut || c.t1 == EndType::Cut)
                          ? "component cut by the window"
                          : "component does not cross the strip";
            break;
          }
        }
      }
      all_ok = all_ok && pc.covered;
      rep.pairs.push_back(pc);
    }
  }
  rep.ok = all_ok;
  return rep;
}

double entropy_proxy(double lam, int cap, const DerivedConstants& dc,
                     const UnfoldingFamily& fam, const SectionGeometry& geom) {
  if (cap < 0) fail(Err::InvariantViolation, "cap must be >= 0");
  const int N = min_regular_index(lam, 64, dc, fam, geom);
  std::vector<int> S;
  for (int j = 0; j <= cap; ++j) S.push_back(N + j);
  const CoveringReport rep = covering_check(S, lam, dc, fam, geom);
  int k = 0;
  for (int n : S) {
    bool good = true;
    for (const auto& pc : rep.pairs) {
      if (pc.image_strip == n || pc.target_strip == n) good = good && pc.covered;
    }
    if (good) ++k;
  }
  return std::log(2.0 * static_cast<double>(k));
}

std::vector<double> escape_statistics(double lam, int T, int sample_count,
                                      std::uint64_t seed,
                                      const DerivedConstants& dc,
                                      const UnfoldingFamily& fam,
                                      const SectionGeometry& geom, int jobs) {
  if (T < 0) fail(Err::InvariantViolation, "T must be >= 0");
  if (sample_count < 1) fail(Err::InvariantViolation, "need >= 1 sample");
  if (!(lam >= 0.0) || lam >= fam.lambda_star)
    fail(Err::OutOfDomain, "lambda outside [0, lambda_star)");

  int N = 1;
  if (lam > 0.0) N = min_regular_index(lam, 64, dc, fam, geom);
  constexpr int kStrips = 6;
  std::vector<Strip> strips;
  double wsum = 0.0;
  std::vector<double> weights;
  for (int j = 0; j < kStrips; ++j) {
    strips.push_back(horizontal_strip(N + j, dc, geom));
    weights.push_back(std::exp(-kTwoPi * (N + j) / dc.K));
    wsum += weights.back();
  }
  for (auto& w : weights) w /= wsum;

  const double wlo = geom.window_lo(), whi = geom.window_hi();
  const double elo = std::exp(wlo / dc.K), ehi = std::exp(whi / dc.K);

  std::vector<int> survived(static_cast<std::size_t>(sample_count), 0);
  parallel_for(sample_count, jobs, [&](int i) {
    CounterRng rng{seed, static_cast<std::uint64_t>(i)};
    double u = rng.u01(0);
    std::size_t pick = 0;
    for (; pick + 1 < weights.size(); ++pick) {
      if (u < weights[pick]) break;
      u -= weights[pick];
    }
    const Strip& st = strips[pick];
    const double x0 = dc.K * std::log(elo + rng.u01(1) * (ehi - elo));
    const double y0 = st.u1(x0) + rng.u01(2) * (st.u2(x0) - st.u1(x0));
    double x = x0, ly = std::log(y0);
    int t = 0;
    for (; t < T; ++t) {
      const double X = x - dc.K * ly;
      const double yn = std::exp(dc.delta * ly) - fam.h_v(X, lam);
      if (!(yn >= kUnderflowFloor) || yn > 1.0) break;
      x = X + geom.delta_offset;
      ly = std::log(yn);
    }
    survived[static_cast<std::size_t>(i)] = t;
  });

  std::vector<double> fractions(static_cast<std::size_t>(T) + 1, 0.0);
  for (int t = 0; t <= T; ++t) {
    int alive = 0;
    for (int s : survived)
      if (s >= t) ++alive;
    fractions[static_cast<std::size_t>(t)] =
        static_cast<double>(alive) / sample_count;
  }
  return fractions;
}

}  // namespace bykov
