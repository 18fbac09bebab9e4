#include "bykov/helix.hpp"

#include <algorithm>
#include <cmath>

namespace bykov {

namespace {

Helix map_graph(const SampledCurve& curve, const DerivedConstants& dc,
                double y_floor, bool forward) {
  if (curve.samples.size() < 3) fail(Err::NotAGraph, "too few samples");
  if (!is_graph(curve)) fail(Err::NotAGraph, "x lifts not strictly monotone");
  Helix hx;
  hx.section = forward ? Section::OutW : Section::InV;
  hx.samples.reserve(curve.samples.size());
  double best = -1.0;
  for (const auto& [x, y] : curve.samples) {
    if (y < y_floor) continue;  // graph tails touching zero are dropped
    if (!(y > 0.0)) fail(Err::NonPositive, "interior sample with y <= 0");
    double l = std::log(y);
    double lift, height;
    if (forward) {
      lift = x - dc.K * l;                     // eta
      height = std::exp(dc.delta * l);
    } else {
      lift = x + dc.K / dc.delta * l;          // eta^{-1}
      height = std::exp(l / dc.delta);
    }
    hx.samples.emplace_back(lift, height);
    if (height > best) {
      best = height;
      hx.max_height_at = lift;
    }
  }
  if (hx.samples.size() < 3) fail(Err::NonPositive, "no positive samples");
  hx.max_height = best;
  for (size_t i = 1; i + 1 < hx.samples.size(); ++i) {
    double l0 = hx.samples[i - 1].first;
    double l1 = hx.samples[i].first;
    double l2 = hx.samples[i + 1].first;
    if ((l1 > l0 && l1 > l2) || (l1 < l0 && l1 < l2)) {
      hx.folds.push_back(hx.samples[i]);
    }
  }
  return hx;
}

}  // namespace

Helix image_helix(const SampledCurve& curve, const DerivedConstants& dc,
                  double y_floor) {
  return map_graph(curve, dc, y_floor, true);
}

Helix preimage_helix(const SampledCurve& curve, const DerivedConstants& dc,
                     double y_floor) {
  return map_graph(curve, dc, y_floor, false);
}

std::vector<double> fold_points(const std::function<double(double)>& h,
                                const std::function<double(double)>& dh,
                                double a, double b, double K, int grid) {
  auto g = [&](double x) { return h(x) - K * dh(x); };
  for (int attempt = 0; attempt < 4; ++attempt, grid *= 2) {
    std::vector<std::pair<double, double>> brackets;
    double prev_x = a + (b - a) / grid;
    double prev_g = g(prev_x);
    for (int i = 2; i < grid; ++i) {
      double x = a + (b - a) * i / grid;
      double gx = g(x);
      if ((prev_g < 0.0 && gx > 0.0) || (prev_g > 0.0 && gx < 0.0)) {
        brackets.emplace_back(prev_x, x);
      }
      prev_x = x;
      prev_g = gx;
    }
    if (brackets.empty()) continue;
    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (auto [lo, hi] : brackets) {
      double r = bisect(g, lo, hi);
      // one guarded Newton step with a numerical slope, then re-check
      double step = 1e-7 * (b - a);
      double slope = (g(r + step) - g(r - step)) / (2.0 * step);
      if (slope != 0.0) {
        double r2 = r - g(r) / slope;
        if (r2 > lo && r2 < hi && std::fabs(g(r2)) < std::fabs(g(r))) r = r2;
      }
      if (std::fabs(g(r)) > 1e-12 * std::max(1.0, std::fabs(h(r)))) {
        fail(Err::NoBracket, "fold polish failed to reach tolerance");
      }
      roots.push_back(r);
    }
    return roots;
  }
  fail(Err::NoBracket, "no fold bracket found; refine the grid");
}

int winding_count(const Helix& hx, double y_min) {
  if (!(y_min > 0.0)) fail(Err::EmptyRange, "y_min must be positive");
  if (y_min > hx.max_height) {
    fail(Err::EmptyRange, "y_min above the helix maximum height");
  }
  const auto& s = hx.samples;
  int best_turns = 0;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i].second < y_min) {
      ++i;
      continue;
    }
    // contiguous block with y >= y_min; extend both endpoints to the exact
    // threshold crossing, interpolating lift linearly in ln y (the tails are
    // affine in ln y, so this is accurate wherever it matters)
    size_t j = i;
    while (j + 1 < s.size() && s[j + 1].second >= y_min) ++j;
    auto cross = [&](size_t in, size_t out) {
      double t = (std::log(y_min) - std::log(s[in].second)) /
                 (std::log(s[out].second) - std::log(s[in].second));
      return s[in].first + t * (s[out].first - s[in].first);
    };
    double enter = (i > 0) ? cross(i, i - 1) : s[i].first;
    double exit = (j + 1 < s.size()) ? cross(j, j + 1) : s[j].first;
    // split [i..j] into monotone lift runs, spans measured between the
    // interpolated block ends and the interior turning samples
    double run_start = enter;
    for (size_t k = i; k <= j; ++k) {
      bool turning = k > i && k < j &&
                     ((s[k].first > s[k - 1].first && s[k].first > s[k + 1].first) ||
                      (s[k].first < s[k - 1].first && s[k].first < s[k + 1].first));
      double run_end = turning ? s[k].first : (k == j ? exit : s[k].first);
      if (turning || k == j) {
        double span = std::fabs(run_end - run_start);
        best_turns = std::max(best_turns, static_cast<int>(span / kTwoPi));
        run_start = run_end;
      }
    }
    i = j + 1;
  }
  return best_turns;
}

}  // namespace bykov
