#include "bykov/util.hpp"

#include <algorithm>

namespace bykov {

double lift_normalize(double x) {
  double r = std::remainder(x, kTwoPi);  // in [-pi, pi]
  if (r <= -kPi) r += kTwoPi;            // tie-break: (-pi, pi]
  return r;
}

double snap_down(double x, double anchor) {
  return anchor + kTwoPi * std::floor((x - anchor) / kTwoPi);
}

double snap_up(double x, double anchor) {
  return anchor + kTwoPi * std::ceil((x - anchor) / kTwoPi);
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t index) const {
  std::uint64_t z = seed;
  z = splitmix64(z ^ (stream * 0xd1342543de82ef95ull));
  z = splitmix64(z ^ (index * 0xaf251af3b0f025b5ull));
  return z;
}

double CounterRng::u01(std::uint64_t index) const {
  return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int workers = std::min(jobs, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < n;) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

double bisect(const std::function<double(double)>& f, double a, double b,
              int iters) {
  double fa = f(a);
  for (int i = 0; i < iters; ++i) {
    double m = 0.5 * (a + b);
    if (m == a || m == b) break;  // interval at machine resolution
    double fm = f(m);
    if ((fa <= 0 && fm <= 0) || (fa >= 0 && fm >= 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace bykov
