#include <cmath>
#include <limits>

#include "bykov/helix.hpp"
#include "doctest.h"

using namespace bykov;

namespace {

struct Model {
  SaddleParams sp{2.0, 1.0, 2.0, 1.0, 1.0, 1.0};
  DerivedConstants dc = validate_params(sp);
  SectionGeometry geom = make_geometry(kPi / 2, -kPi / 2, 0.1, 0.0);
  UnfoldingFamily fam = build_unfolding(geom, "cosine", 0.9);
};

template <class F>
Err code_of(F&& f) {
  try {
    f();
  } catch (const ModelError& e) {
    return e.code();
  }
  FAIL("expected a ModelError");
  return Err::InvariantViolation;
}

// The positive hump of h_w at the given amplitude, sampled on In(v).
SampledCurve hump_curve(double amp) {
  return sample_hump(Section::InV, -kPi / 2, kPi / 2,
                     [amp](double x) { return amp * std::cos(x); });
}

}  // namespace

TEST_SUITE("helix") {

TEST_CASE("image helix: amplitude power law and peak lift") {
  const Model m;
  const auto hx = image_helix(hump_curve(0.1), m.dc);

  // oracle: grid max of (0.1 cos x)^4 over 1e5 uniform samples
  double gm = 0.0, gm_at = 0.0;
  for (int i = 1; i < 100000; ++i) {
    const double x = -kPi / 2 + kPi * i / 100000;
    const double y = 0.1 * std::cos(x);
    if (std::pow(y, 4) > gm) {
      gm = std::pow(y, 4);
      gm_at = x - 3.0 * std::log(y);
    }
  }
  CHECK(hx.max_height == doctest::Approx(gm).epsilon(1e-6));
  CHECK(hx.max_height == doctest::Approx(1e-4).epsilon(1e-6));
  CHECK(hx.max_height_at == doctest::Approx(gm_at).epsilon(1e-3));
  CHECK(hx.max_height_at ==
        doctest::Approx(-3.0 * std::log(0.1)).epsilon(1e-3));  // 6.9078

  // doubling the amplitude scales the peak by 2^delta = 16
  const auto hx2 = image_helix(hump_curve(0.2), m.dc);
  CHECK(hx2.max_height == doctest::Approx(16.0 * hx.max_height).epsilon(1e-6));

  // heights stay positive, lift diverges upward along both tails
  for (const auto& [lift, y] : hx.samples) CHECK(y > 0.0);
  CHECK(hx.samples.front().first > hx.max_height_at + 8 * kTwoPi);
  CHECK(hx.samples.back().first > hx.max_height_at + 8 * kTwoPi);
}

TEST_CASE("image helix: constant height 1e-9 lifts by K ln(1e9)") {
  const Model m;
  const int n = 11;
  const auto flat = sample_graph(Section::InV, -0.5, 0.5, n,
                                 [](double) { return 1e-9; });
  const auto hx = image_helix(flat, m.dc);
  REQUIRE(hx.samples.size() == static_cast<size_t>(n));
  const double shift = -3.0 * std::log(1e-9);  // 62.1698
  CHECK(shift == doctest::Approx(62.1697975108392).epsilon(1e-12));
  for (int i = 0; i < n; ++i) {
    const double x = -0.5 + 1.0 * i / (n - 1);
    CHECK(hx.samples[i].first == doctest::Approx(x + shift).epsilon(1e-12));
    CHECK(hx.samples[i].first >= x + 62.17 - 1e-3);
  }
}

TEST_CASE("image helix rejects non-graphs and non-positive heights") {
  const Model m;
  SampledCurve bad;
  bad.section = Section::InV;
  bad.samples = {{0.0, 0.1}, {1.0, 0.2}, {0.5, 0.3}};
  CHECK(code_of([&] { image_helix(bad, m.dc); }) == Err::NotAGraph);

  SampledCurve neg;
  neg.section = Section::InV;
  neg.samples = {{0.0, 0.1}, {1.0, -0.2}, {2.0, 0.3}};
  CHECK(code_of([&] { image_helix(neg, m.dc); }) == Err::NonPositive);
}

TEST_CASE("preimage helix: inverse power law and round-trip") {
  const Model m;

  // positive hump of h_v at lambda = 0.1 lives on (pi/2, 3pi/2)
  const auto hv = sample_hump(Section::OutW, kPi / 2, 3 * kPi / 2,
                              [](double x) { return -0.1 * std::cos(x); });
  const auto pre = preimage_helix(hv, m.dc);
  CHECK(pre.max_height ==
        doctest::Approx(std::pow(0.1, 0.25)).epsilon(1e-6));  // 0.56234
  // lift tends to -infinity along the tails (K/delta < K: slower divergence)
  CHECK(pre.samples.front().first < pre.max_height_at - 2 * kTwoPi);
  CHECK(pre.samples.back().first < pre.max_height_at - 2 * kTwoPi);

  const auto tiny = sample_hump(Section::OutW, -kPi / 2, kPi / 2,
                                [](double x) { return 1e-4 * std::cos(x); });
  CHECK(preimage_helix(tiny, m.dc).max_height ==
        doctest::Approx(0.1).epsilon(1e-6));

  // round-trip on a graph whose image is still a graph in the lift
  const auto g = sample_graph(Section::InV, -1.0, 1.0, 257, [](double x) {
    return 0.3 + 0.05 * std::sin(x);
  });
  const auto img = image_helix(g, m.dc);
  SampledCurve img_curve;
  img_curve.section = Section::OutW;
  img_curve.samples = img.samples;
  REQUIRE(is_graph(img_curve));
  const auto back = preimage_helix(img_curve, m.dc);
  REQUIRE(back.samples.size() == g.samples.size());
  for (size_t i = 0; i < g.samples.size(); ++i) {
    CHECK(back.samples[i].first ==
          doctest::Approx(g.samples[i].first).epsilon(1e-10));
    CHECK(back.samples[i].second ==
          doctest::Approx(g.samples[i].second).epsilon(1e-10));
  }
}

TEST_CASE("fold points: analytic locations") {
  // sin x on (0, pi) with K = 1: fold equation sin = cos, root pi/4
  const auto f1 = fold_points([](double x) { return std::sin(x); },
                              [](double x) { return std::cos(x); }, 0.0, kPi,
                              1.0);
  REQUIRE(f1.size() == 1);
  CHECK(f1[0] == doctest::Approx(kPi / 4).epsilon(1e-10));

  // lambda cos x on (-pi/2, pi/2) with K = 3: tan x = -1/3, lambda cancels
  const double xs = std::atan(-1.0 / 3.0);  // -0.321750554396642
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double lam : {0.1, 0.01, 0.001}) {
    const auto f = fold_points(
        [lam](double x) { return lam * std::cos(x); },
        [lam](double x) { return -lam * std::sin(x); }, -kPi / 2, kPi / 2, 3.0);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == doctest::Approx(xs).epsilon(1e-10));
    if (std::isfinite(prev)) CHECK(f[0] == doctest::Approx(prev).epsilon(1e-8));
    prev = f[0];
    // residual of the defining equation at the root
    const double g = lam * std::cos(f[0]) - 3.0 * (-lam * std::sin(f[0]));
    CHECK(std::fabs(g) <= 1e-12);
  }

  // no root in the window: constant graphs have no folds
  CHECK(code_of([] {
          fold_points([](double) { return 0.5; }, [](double) { return 0.0; },
                      0.0, 1.0, 1.0);
        }) == Err::NoBracket);
}

TEST_CASE("fold of the first-hit helix: position on the wall") {
  const Model m;
  const double xs = std::atan(-1.0 / 3.0);
  const double ys = 0.1 * std::cos(xs);
  auto [Xs, Ys] = eta(xs, ys, m.dc);

  // 30-digit evaluation of eta(atan(-1/3), 0.1 cos(atan(-1/3)))
  CHECK(Xs == doctest::Approx(6.74404549807223).epsilon(1e-12));
  CHECK(Ys == doctest::Approx(8.1e-5).epsilon(1e-12));
  CHECK(lift_normalize(Xs) ==
        doctest::Approx(0.460860190892648).epsilon(1e-10));

  // oracle: dense grid minimization of the lift along the helix
  double min_lift = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 200000; ++i) {
    const double x = -kPi / 2 + kPi * i / 200000;
    const double lift = x - 3.0 * std::log(0.1 * std::cos(x));
    min_lift = std::min(min_lift, lift);
  }
  CHECK(Xs == doctest::Approx(min_lift).epsilon(1e-6));

  // the sampled helix must mark a fold, and its lowest-lift fold sits left
  // of (below) the peak-height lift
  const auto hx = image_helix(hump_curve(0.1), m.dc);
  REQUIRE_FALSE(hx.folds.empty());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lift, y] : hx.folds) best = std::min(best, lift);
  CHECK(best == doctest::Approx(Xs).epsilon(1e-4));
  CHECK(best < hx.max_height_at);
}

TEST_CASE("fold lift climbs exactly one turn per amplitude ratio step") {
  const Model m;
  const double ratio = std::exp(-kTwoPi / 3.0);
  double prev_lift = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < 3; ++k) {
    const double lam = 0.1 * std::pow(ratio, k);
    const auto f = fold_points(
        [&](double x) { return m.fam.h_w(x, lam); },
        [&](double x) { return m.fam.dh_w(x, lam); }, -kPi / 2, kPi / 2, 3.0);
    REQUIRE(f.size() == 1);
    auto [X, Y] = eta(f[0], m.fam.h_w(f[0], lam), m.dc);
    if (std::isfinite(prev_lift))
      CHECK(X - prev_lift == doctest::Approx(kTwoPi).epsilon(1e-6));
    prev_lift = X;
  }
}

TEST_CASE("winding count: closed-form turn tally") {
  // One arm of the stable-manifold helix in its normal form: the lift gains
  // exactly K ln(M/y) while the height drops from M to y, so the turn count
  // below threshold y_min is floor(K ln(M/y_min) / 2pi).
  const double M = 0.1;
  Helix hx;
  hx.section = Section::InV;
  hx.max_height = M;
  hx.max_height_at = 0.0;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    const double y = M * std::exp(std::log(1e-12 / M) * i / n);
    hx.samples.push_back({3.0 * std::log(M / y), y});
  }

  auto turns = [&](double y_min) {
    return static_cast<int>(3.0 * std::log(M / y_min) / kTwoPi);
  };
  // 3 ln(1e5) / 2pi = 5.497: five full turns above 1e-6
  CHECK(turns(1e-6) == 5);
  CHECK(winding_count(hx, 1e-6) == 5);
  CHECK(winding_count(hx, hx.max_height) == 0);
  for (double y_min : {0.05, 1e-3, 1e-5, 1e-8, 1e-10})
    CHECK(winding_count(hx, y_min) == turns(y_min));

  // shrinking the threshold by e^{-2pi/K} adds exactly one turn
  const double ratio = std::exp(-kTwoPi / 3.0);
  int prev = winding_count(hx, 1e-6);
  for (int k = 1; k <= 4; ++k) {
    const int w = winding_count(hx, 1e-6 * std::pow(ratio, k));
    CHECK(w == prev + 1);
    prev = w;
  }

  CHECK(code_of([&] { winding_count(hx, 0.0); }) == Err::EmptyRange);
  CHECK(code_of([&] { winding_count(hx, 2.0 * hx.max_height); }) ==
        Err::EmptyRange);

  // sampled first-hit helix: the same tally anchored at the fold lift, with
  // the span of the long tail measured from an actual sample run
  const Model m;
  const auto img = image_helix(hump_curve(0.1), m.dc);
  const double y_min = 1e-9;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [lift, y] : img.samples)
    if (y >= y_min) {
      lo = std::min(lo, lift);
      hi = std::max(hi, lift);
    }
  const int expect = static_cast<int>((hi - lo) / kTwoPi);
  CHECK(winding_count(img, y_min) == expect);
}

}  // TEST_SUITE
