#include <cmath>
#include <limits>
#include <vector>

#include "bykov/strips.hpp"
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

// Numerical extremization oracle: max/min of the strip boundaries over the
// window, computed in log coordinates (the boundaries are exponentials, so
// their extrema sit at the window ends; the scan double-checks that).
std::pair<double, double> scan_extrema(const Strip& s) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i <= 20000; ++i) {
    const double x =
        s.window_lo + (s.window_hi - s.window_lo) * i / 20000.0;
    lo = std::min(lo, s.log_u1(x));
    hi = std::max(hi, s.log_u2(x));
  }
  return {std::exp(hi), std::exp(lo)};  // (h_n, m_n)
}

}  // namespace

TEST_SUITE("strips") {

TEST_CASE("horizontal strips: closed forms match extremization") {
  const Model m;
  const double ratio = std::exp(-kTwoPi / 3.0);

  const auto s1 = horizontal_strip(1, m.dc, m.geom);
  // e^{-(pi - 0.2)/3} and e^{-(3pi + 0.2)/3}, 30-digit evaluation
  CHECK(s1.h_n == doctest::Approx(0.37511190487428675).epsilon(1e-12));
  CHECK(s1.m_n == doctest::Approx(0.040426922386344336).epsilon(1e-12));

  const auto s2 = horizontal_strip(2, m.dc, m.geom);
  CHECK(s2.h_n == doctest::Approx(s1.h_n * ratio).epsilon(1e-12));

  double prev_h = -1.0;
  for (int n = 1; n <= 30; ++n) {
    const auto s = horizontal_strip(n, m.dc, m.geom);
    const auto [h_scan, m_scan] = scan_extrema(s);
    CAPTURE(n);
    CHECK(s.h_n == doctest::Approx(h_scan).epsilon(1e-9));
    CHECK(s.m_n == doctest::Approx(m_scan).epsilon(1e-9));
    if (prev_h > 0.0)
      CHECK(s.h_n / prev_h == doctest::Approx(ratio).epsilon(1e-12));
    prev_h = s.h_n;

    // u1 < u2 across the window, both increasing; consecutive strips are
    // fiberwise disjoint (their global height bands overlap slightly, by
    // e^{4 tau / K}, because the boundaries tilt)
    const Strip above = horizontal_strip(std::max(1, n - 1), m.dc, m.geom);
    for (int i = 0; i < 50; ++i) {
      const double x = s.window_lo + (s.window_hi - s.window_lo) * i / 50.0;
      const double x2 = x + (s.window_hi - s.window_lo) / 100.0;
      CHECK(s.u1(x) < s.u2(x));
      CHECK(s.u1(x) < s.u1(x2));
      CHECK(s.u2(x) < s.u2(x2));
      if (n > 1) CHECK(s.u2(x) < above.u1(x));
    }
    if (n > 1) {
      CHECK(s.h_n / above.m_n ==
            doctest::Approx(std::exp(0.4 / 3.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("horizontal strips carry no parameter dependence") {
  const Model m;
  // the constructor takes no lambda at all; two calls agree bit for bit
  const auto a = horizontal_strip(3, m.dc, m.geom);
  const auto b = horizontal_strip(3, m.dc, m.geom);
  CHECK(a.h_n == b.h_n);
  CHECK(a.m_n == b.m_n);
  CHECK(a.window_lo == b.window_lo);
  CHECK(a.window_hi == b.window_hi);

  const auto s = horizontal_strip(2, m.dc, m.geom);
  CHECK(s.contains(0.0, 0.5 * (s.u1(0.0) + s.u2(0.0))));
  CHECK_FALSE(s.contains(0.0, 2.0 * s.h_n));
  CHECK_FALSE(s.contains(0.0, 0.5 * s.m_n));
}

TEST_CASE("eta-image height of a strip is h_n^delta at the window's low end") {
  const Model m;
  for (int n = 1; n <= 10; ++n) {
    const auto s = horizontal_strip(n, m.dc, m.geom);
    const auto hs = horseshoe_strip(n, 0.05, m.dc, m.fam, m.geom);
    const double img_max = hs.e_wall(hs.a_up, hs.window_lo);
    CAPTURE(n);
    CHECK(img_max == doctest::Approx(std::pow(s.h_n, 4.0)).epsilon(1e-10));
    // and the image height decays along the window
    CHECK(hs.e_wall(hs.a_up, 0.5 * (hs.window_lo + hs.window_hi)) < img_max);
  }
  // n = 2: 30-digit evaluation of e^{4(pi + 0.2 - 4pi)/3}
  const auto hs2 = horseshoe_strip(2, 0.1, m.dc, m.fam, m.geom);
  CHECK(hs2.e_wall(hs2.a_up, hs2.window_lo) ==
        doctest::Approx(4.553092217027641e-6).epsilon(1e-12));
}

TEST_CASE("horseshoe strip: arch height and legs") {
  const Model m;
  const auto hs = horseshoe_strip(2, 0.1, m.dc, m.fam, m.geom);
  CHECK(hs.is_horseshoe);
  // arch max is lambda plus the (tiny) image-height offset
  CHECK(hs.arch_max == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(hs.arch_max > 0.1);
  CHECK(std::fabs(hs.arch_argmax) < 1e-3);

  // legs live where the manifold graph is positive: pi/2 < |x| <= pi/2 + tau
  REQUIRE(hs.legs_lo.size() == 2);
  REQUIRE(hs.legs_up.size() == 2);
  for (const auto& legs : {hs.legs_lo, hs.legs_up})
    for (const auto& [lo, hi] : legs) {
      CHECK(lo < hi);
      const double mid = std::fabs(0.5 * (lo + hi));
      CHECK(mid > kPi / 2);
      CHECK(mid <= kPi / 2 + 0.1 + 1e-12);
    }

  // lambda = 0: degenerate case, no legs, flat boundaries
  const auto flat = horseshoe_strip(2, 0.0, m.dc, m.fam, m.geom);
  CHECK_FALSE(flat.is_horseshoe);
  CHECK(flat.legs_lo.empty());
  CHECK(flat.legs_up.empty());
  CHECK(flat.arch_max == doctest::Approx(std::pow(0.0151646, 4.0)).epsilon(1e-3));

  CHECK(code_of([&] { horseshoe_strip(2, -0.1, m.dc, m.fam, m.geom); }) ==
        Err::OutOfDomain);
  CHECK(code_of([&] { horseshoe_strip(2, 0.95, m.dc, m.fam, m.geom); }) ==
        Err::OutOfDomain);
}

TEST_CASE("arch height tends to lambda from above as the index grows") {
  const Model m;
  const double lam = 0.1;
  const int n0 = n0_index(lam, m.dc, m.fam, m.geom);
  double prev = std::numeric_limits<double>::infinity();
  for (int n = n0; n <= n0 + 8; ++n) {
    const double arch =
        horseshoe_strip(n, lam, m.dc, m.fam, m.geom).arch_max;
    CHECK(arch >= lam);
    CHECK(arch <= prev + 1e-15);
    if (n >= n0 + 3) CHECK(arch == doctest::Approx(lam).epsilon(1e-10));
    prev = arch;
  }
}

TEST_CASE("classification: the three regimes at strip 2") {
  const Model m;

  const auto reg = classify_intersection(2, 2, 0.1, m.dc, m.fam, m.geom);
  CHECK(reg.value == IClass::Regular);
  CHECK(reg.components == 2);

  const auto mid = classify_intersection(2, 2, 0.015, m.dc, m.fam, m.geom);
  CHECK(mid.value == IClass::Irregular);

  const auto emp = classify_intersection(2, 2, 0.002, m.dc, m.fam, m.geom);
  CHECK(emp.value == IClass::Empty);
  CHECK(emp.components == 0);
}

TEST_CASE("classification is monotone in lambda with exactly two switches") {
  const Model m;
  // 200 log-spaced parameters, decreasing; expect Regular -> Irregular ->
  // Empty with exactly two transitions, bracketing the interval endpoints
  std::vector<double> grid(200);
  for (int i = 0; i < 200; ++i)
    grid[i] = 0.1 * std::pow(0.002 / 0.1, i / 199.0);
  std::vector<IClass> cls(grid.size());
  for (size_t i = 0; i < grid.size(); ++i)
    cls[i] = classify_intersection(2, 2, grid[i], m.dc, m.fam, m.geom).value;
  CHECK(cls.front() == IClass::Regular);
  CHECK(cls.back() == IClass::Empty);
  int transitions = 0;
  std::vector<std::pair<double, double>> brackets;
  for (size_t i = 1; i < cls.size(); ++i) {
    if (cls[i] != cls[i - 1]) {
      ++transitions;
      brackets.push_back({grid[i], grid[i - 1]});
      // never jumps straight from Regular to Empty or back upward
      CHECK(static_cast<int>(cls[i]) == static_cast<int>(cls[i - 1]) - 1);
    }
  }
  CHECK(transitions == 2);

  const auto di = delta_interval(2, 0.1, m.dc, m.fam, m.geom);
  REQUIRE(brackets.size() == 2);
  CHECK(brackets[0].first < di.d);
  CHECK(di.d <= brackets[0].second);
  CHECK(brackets[1].first < di.c);
  CHECK(di.c <= brackets[1].second);
}

TEST_CASE("minimal regular index and its parameter ladder") {
  const Model m;
  CHECK(min_regular_index(0.1, 10, m.dc, m.fam, m.geom) == 2);

  // scaling lambda by e^{-2pi/K} shifts the whole strip ladder by one
  const double ratio = std::exp(-kTwoPi / 3.0);
  for (int k = 0; k <= 2; ++k) {
    CHECK(min_regular_index(0.1 * std::pow(ratio, k), 12, m.dc, m.fam,
                            m.geom) == 2 + k);
  }

  CHECK(code_of([&] { min_regular_index(0.95, 10, m.dc, m.fam, m.geom); }) ==
        Err::OutOfDomain);
  CHECK(code_of([&] { min_regular_index(0.1, 1, m.dc, m.fam, m.geom); }) ==
        Err::CapExceeded);
}

TEST_CASE("destruction intervals: tangency systems and probe ordering") {
  const Model m;
  const auto di = delta_interval(2, 0.1, m.dc, m.fam, m.geom);
  CHECK(0.0 < di.c);
  CHECK(di.c < di.d);

  // analytic oracle: the tangency point satisfies tan x = -1/K (the image
  // wall term is a < 1e-4 relative correction), so
  //   d_a = u2_a(x*)/cos(x*),  c_a = u1_a(x*)/cos(x*),  x* = atan(-1/3)
  const double xs = std::atan(-1.0 / 3.0);
  auto u1 = [&](int a, double x) {
    return std::exp((x - kPi / 2 - 0.1 - kTwoPi * a) / 3.0);
  };
  auto u2 = [&](int a, double x) {
    return std::exp((x + kPi / 2 + 0.1 - kTwoPi * a) / 3.0);
  };
  CHECK(di.d == doctest::Approx(u2(2, xs) / std::cos(xs)).epsilon(1e-3));
  CHECK(di.c == doctest::Approx(u1(2, xs) / std::cos(xs)).epsilon(1e-3));
  // frozen values (damped-Newton solution of the full tangency systems)
  CHECK(di.c == doctest::Approx(0.00822654789530056).epsilon(1e-9));
  CHECK(di.d == doctest::Approx(0.025061351736293508).epsilon(1e-9));

  // witnesses really solve F = 0, dF/dx = 0 for their boundary pairs
  const auto hs_d =
      horseshoe_strip(2, di.tangency_d.lambda, m.dc, m.fam, m.geom);
  const auto s2 = horizontal_strip(2, m.dc, m.geom);
  const double xd = di.tangency_d.x;
  CHECK(std::fabs(hs_d.b_lo(xd) - s2.u2(xd)) <= 1e-10);
  const double slope_d =
      (hs_d.b_lo(xd + 1e-6) - s2.u2(xd + 1e-6)) -
      (hs_d.b_lo(xd - 1e-6) - s2.u2(xd - 1e-6));
  CHECK(std::fabs(slope_d / 2e-6) <= 1e-4);
  CHECK(xd == doctest::Approx(xs).epsilon(1e-3));

  const auto hs_c =
      horseshoe_strip(2, di.tangency_c.lambda, m.dc, m.fam, m.geom);
  const double xc = di.tangency_c.x;
  CHECK(std::fabs(hs_c.b_up(xc) - s2.u1(xc)) <= 1e-10);

  // probe scan: 100 log-spaced parameters must classify by position
  for (int i = 0; i < 100; ++i) {
    const double lam = 0.1 * std::pow(0.002 / 0.1, i / 99.0);
    if (std::fabs(lam - di.c) < 1e-4 || std::fabs(lam - di.d) < 1e-4)
      continue;  // stay clear of the tangency roots themselves
    const auto cls = classify_intersection(2, 2, lam, m.dc, m.fam, m.geom);
    CAPTURE(lam);
    if (lam > di.d) {
      CHECK(cls.value == IClass::Regular);
    } else if (lam > di.c) {
      CHECK(cls.value == IClass::Irregular);
    } else {
      CHECK(cls.value == IClass::Empty);
    }
  }
}

TEST_CASE("destruction intervals are disjoint and scale geometrically") {
  const Model m;
  const auto d2 = delta_interval(2, 0.1, m.dc, m.fam, m.geom);
  const auto d3 = delta_interval(3, 0.008, m.dc, m.fam, m.geom);
  const auto d4 = delta_interval(4, 0.001, m.dc, m.fam, m.geom);

  CHECK(d3.d < d2.c);
  CHECK(d4.d < d3.c);

  const double ratio = std::exp(-kTwoPi / 3.0);
  CHECK(d3.d / d2.d == doctest::Approx(ratio).epsilon(1e-5));
  CHECK(d4.d / d3.d == doctest::Approx(ratio).epsilon(1e-5));
  CHECK(d3.c / d2.c == doctest::Approx(ratio).epsilon(1e-3));
  CHECK(d4.c / d3.c == doctest::Approx(ratio).epsilon(1e-4));
}

TEST_CASE("below its interval, a strip empties while deeper strips persist") {
  const Model m;
  const auto d2 = delta_interval(2, 0.1, m.dc, m.fam, m.geom);
  const double lam = 0.97 * d2.c;  // just below the lower endpoint

  CHECK(classify_intersection(2, 2, lam, m.dc, m.fam, m.geom).value ==
        IClass::Empty);

  // the strips at and beyond the new threshold still carry full horseshoes
  const int N = min_regular_index(lam, 12, m.dc, m.fam, m.geom);
  CHECK(N == 3);
  for (int b = N; b <= N + 2; ++b) {
    const auto own = classify_intersection(b, b, lam, m.dc, m.fam, m.geom);
    CHECK(own.value == IClass::Regular);
    CHECK(own.components >= 2);
  }
  // every arch tops out near lambda, so the emptied strip (whose floor
  // sits above that envelope) is unreachable from any deeper strip too
  for (int b = 3; b <= 6; ++b)
    CHECK(classify_intersection(2, b, lam, m.dc, m.fam, m.geom).value ==
          IClass::Empty);
}

}  // TEST_SUITE
