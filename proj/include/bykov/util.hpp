#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace bykov {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Representative of x mod 2*pi in (-pi, pi]. Lifts are stored as plain reals
// everywhere; reduction happens only at comparison/output boundaries.
double lift_normalize(double x);

// Largest grid point g = anchor + 2*pi*k with g <= x (and the upward twin).
// Used to pin sweep windows to angles where crossings cannot occur.
double snap_down(double x, double anchor);
double snap_up(double x, double anchor);

// Counter-based RNG: value i of stream s is a pure function of (seed, s, i),
// so parallel workers can draw without shared state or ordering effects.
std::uint64_t splitmix64(std::uint64_t z);

struct CounterRng {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  std::uint64_t bits(std::uint64_t index) const;
  double u01(std::uint64_t index) const;  // uniform in [0, 1)
};

// Runs fn(0..n-1) on up to `jobs` threads. fn must write only to its own
// index's slot; iteration order is unspecified, so determinism comes from
// indexed output, not scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

// Scalar bisection to a fixed iteration budget; f(a) and f(b) must have
// opposite signs (or one of them zero).
double bisect(const std::function<double(double)>& f, double a, double b,
              int iters = 200);

}  // namespace bykov
