#pragma once

#include <functional>

#include "bykov/maps.hpp"

namespace bykov {

// Curve analysis on the cylinder walls: images of positive graphs under eta
// and eta^{-1} (helices), fold extraction, and winding counts.

// Image of a positive graph on In(v) under eta. The input must be a graph
// with positive interior heights; tails below y_floor are dropped. Fold
// entries are sample-resolution markers (strict local extrema of the lift).
Helix image_helix(const SampledCurve& curve, const DerivedConstants& dc,
                  double y_floor = 1e-300);

// Preimage of a positive graph on Out(w) under eta^{-1}; lift tends to
// -infinity along the tails, max height M^{1/delta}.
Helix preimage_helix(const SampledCurve& curve, const DerivedConstants& dc,
                     double y_floor = 1e-300);

// All roots of g(x) = h(x) - K h'(x) in (a, b), found by sign bracketing on
// a grid (dyadically refined up to 8x on failure) and polished by bisection
// + Newton to |g| <= 1e-12 * max(1, |h|). The generating graph of a helix
// has at least one fold, so an empty result throws NoBracket.
std::vector<double> fold_points(const std::function<double(double)>& h,
                                const std::function<double(double)>& dh,
                                double a, double b, double K,
                                int grid = 4096);

// Number of complete 2*pi increments of the lift along the helix while
// y >= y_min: maximum over monotone lift runs of floor(run span / 2*pi).
int winding_count(const Helix& hx, double y_min);

}  // namespace bykov
