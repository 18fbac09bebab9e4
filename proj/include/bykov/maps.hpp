#pragma once

#include <array>

#include "bykov/sections.hpp"

namespace bykov {

// Local and global transition maps of the return-map model. Heights above 1
// are outside the modeled neighborhood and rejected; heights must be
// positive wherever a logarithm is taken.

// Passage near v: In(v) -> Out(v), (x, y) -> (y^{delta_v}, x - ln(y)/E_v).
// Returned pair is (r, phi).
std::pair<double, double> phi_v(double x, double y, const SaddleParams& p,
                                const DerivedConstants& dc);

// Passage near w: In(w) -> Out(w), (r, phi) -> (phi - ln(r)/E_w, r^{delta_w}).
// Returned pair is (x, y).
std::pair<double, double> phi_w(double r, double phi, const SaddleParams& p,
                                const DerivedConstants& dc);

// Global map eta = phi_w o psi_vw o phi_v with psi_vw = identity:
// (x, y) -> (x - K ln y, y^delta). Affine in (x, ln y).
std::pair<double, double> eta(double x, double y, const DerivedConstants& dc);
std::pair<double, double> eta_inv(double X, double Y,
                                  const DerivedConstants& dc);

// Log-vertical form: (x, l) -> (x - K l, delta * l) with l = ln y.
std::pair<double, double> eta_log(double x, double l,
                                  const DerivedConstants& dc);
std::pair<double, double> eta_inv_log(double X, double L,
                                      const DerivedConstants& dc);

// Symmetry-breaking wall map Out(w) -> In(v):
// (x, y) -> (x + delta_offset, y - h_v(x, lam)).
// Maps the graph of h_v to y = 0 and y = 0 to the graph of h_w.
CylPoint psi_wv(double x, double y, double lam, const UnfoldingFamily& fam,
                const SectionGeometry& geom);

enum class Landed { UpperHalf, LowerHalf, OnStableManifold };

struct ReturnResult {
  CylPoint point;         // on In(v)
  Landed landed;
  CylPoint intermediate;  // on Out(w), before the wall map
};

// First-return map R_lam = psi_wv o eta on the upper half of In(v):
// (x, y) -> (x - K ln y + delta_offset, y^delta - h_v(x - K ln y, lam)).
ReturnResult return_map(const CylPoint& p, double lam,
                        const DerivedConstants& dc, const UnfoldingFamily& fam,
                        const SectionGeometry& geom, double atol = 1e-12);

struct ReturnJacobian {
  std::array<std::array<double, 2>, 2> m;
  double det_matrix;    // determinant of m
  double det_analytic;  // delta * y^{delta-1}
};

// Analytic Jacobian [[1, -K/y], [-h_v'(X), delta y^{delta-1} + K h_v'(X)/y]]
// with X = x - K ln y. Its determinant is delta * y^{delta-1} exactly.
ReturnJacobian return_jacobian(const CylPoint& p, double lam,
                               const DerivedConstants& dc,
                               const UnfoldingFamily& fam);

}  // namespace bykov
