#include "bykov/maps.hpp"

#include <cmath>

namespace bykov {

namespace {

void require_height(double y, const char* who) {
  if (!(y > 0.0)) fail(Err::NonPositiveHeight, std::string(who) + ": y <= 0");
  if (y > 1.0) fail(Err::OutOfDomain, std::string(who) + ": y > 1");
}

}  // namespace

std::pair<double, double> phi_v(double x, double y, const SaddleParams& p,
                                const DerivedConstants& dc) {
  require_height(y, "phi_v");
  return {std::pow(y, dc.delta_v), x - std::log(y) / p.e_v};
}

std::pair<double, double> phi_w(double r, double phi, const SaddleParams& p,
                                const DerivedConstants& dc) {
  if (!(r > 0.0)) fail(Err::NonPositiveRadius, "phi_w: r <= 0");
  if (r > 1.0) fail(Err::OutOfDomain, "phi_w: r > 1");
  return {phi - std::log(r) / p.e_w, std::pow(r, dc.delta_w)};
}

std::pair<double, double> eta(double x, double y, const DerivedConstants& dc) {
  require_height(y, "eta");
  double l = std::log(y);
  return {x - dc.K * l, std::exp(dc.delta * l)};
}

std::pair<double, double> eta_inv(double X, double Y,
                                  const DerivedConstants& dc) {
  require_height(Y, "eta_inv");
  double L = std::log(Y);
  return {X + dc.K / dc.delta * L, std::exp(L / dc.delta)};
}

std::pair<double, double> eta_log(double x, double l,
                                  const DerivedConstants& dc) {
  return {x - dc.K * l, dc.delta * l};
}

std::pair<double, double> eta_inv_log(double X, double L,
                                      const DerivedConstants& dc) {
  return {X + dc.K / dc.delta * L, L / dc.delta};
}

CylPoint psi_wv(double x, double y, double lam, const UnfoldingFamily& fam,
                const SectionGeometry& geom) {
  return CylPoint::make(Section::InV, x + geom.delta_offset,
                        y - fam.h_v(x, lam));
}

ReturnResult return_map(const CylPoint& p, double lam,
                        const DerivedConstants& dc, const UnfoldingFamily& fam,
                        const SectionGeometry& geom, double atol) {
  require_height(p.y, "return_map");
  // Compose in log coordinates: eta is affine there, so the Out(w) height
  // survives far below DBL_MIN's reciprocal range of pow.
  double l = p.log_y ? *p.log_y : std::log(p.y);
  auto [X, L] = eta_log(p.x, l, dc);
  CylPoint mid = CylPoint::from_log(Section::OutW, X, L);
  ReturnResult res;
  res.intermediate = mid;
  res.point = psi_wv(mid.x, mid.y, lam, fam, geom);
  if (std::fabs(res.point.y) <= atol) {
    res.landed = Landed::OnStableManifold;
  } else if (res.point.y < 0.0) {
    res.landed = Landed::LowerHalf;
  } else {
    res.landed = Landed::UpperHalf;
  }
  return res;
}

ReturnJacobian return_jacobian(const CylPoint& p, double lam,
                               const DerivedConstants& dc,
                               const UnfoldingFamily& fam) {
  require_height(p.y, "return_jacobian");
  double y = p.y;
  double X = p.x - dc.K * (p.log_y ? *p.log_y : std::log(y));
  double hp = fam.dh_v(X, lam);
  double dyd = dc.delta * std::pow(y, dc.delta - 1.0);
  ReturnJacobian j;
  j.m[0][0] = 1.0;
  j.m[0][1] = -dc.K / y;
  j.m[1][0] = -hp;
  j.m[1][1] = dyd + dc.K * hp / y;
  j.det_matrix = j.m[0][0] * j.m[1][1] - j.m[0][1] * j.m[1][0];
  j.det_analytic = dyd;
  return j;
}

}  // namespace bykov
