#include "bykov/params.hpp"

#include <cmath>
#include <sstream>

namespace bykov {

namespace {

bool finite(double v) { return std::isfinite(v); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DerivedConstants validate_params(const SaddleParams& p) {
  for (double v : {p.c_v, p.e_v, p.c_w, p.e_w, p.alpha_v, p.alpha_w}) {
    if (!finite(v)) fail(Err::InvariantViolation, "non-finite parameter");
  }
  if (!(p.e_v > 0.0) || !(p.c_v > p.e_v)) {
    fail(Err::EigenvalueOrder,
         "need C_v > E_v > 0, got C_v=" + num(p.c_v) + " E_v=" + num(p.e_v));
  }
  // Report the product inequality first: when both it and the w-order fail,
  // the stability violation is the stronger (and more informative) diagnosis.
  if (!(p.c_v * p.c_w > p.e_v * p.e_w)) {
    fail(Err::StabilityViolated,
         "need C_v*C_w > E_v*E_w, got " + num(p.c_v * p.c_w) +
             " <= " + num(p.e_v * p.e_w));
  }
  if (!(p.e_w > 0.0) || !(p.c_w > p.e_w)) {
    fail(Err::EigenvalueOrder,
         "need C_w > E_w > 0, got C_w=" + num(p.c_w) + " E_w=" + num(p.e_w));
  }
  if (p.alpha_v == 0.0 || p.alpha_w == 0.0) {
    fail(Err::NonFocus, "alpha_v and alpha_w must be nonzero");
  }
  DerivedConstants dc;
  dc.delta_v = p.c_v / p.e_v;
  dc.delta_w = p.c_w / p.e_w;
  dc.delta = dc.delta_v * dc.delta_w;
  dc.K = (p.c_v + p.e_w) / (p.e_v * p.e_w);
  return dc;
}

SectionGeometry make_geometry(double p_w_1, double p_w_2, double tau,
                              double delta_offset) {
  if (!(p_w_2 < p_w_1) || !(p_w_1 - p_w_2 < kTwoPi)) {
    fail(Err::InvariantViolation,
         "need p_w_2 < p_w_1 with span below 2*pi, got span " +
             num(p_w_1 - p_w_2));
  }
  if (!(tau > 0.0)) fail(Err::InvariantViolation, "tau must be positive");
  // The strip window and the complementary arc must both be nonempty.
  if (!(p_w_1 - p_w_2 + 2.0 * tau < kTwoPi)) {
    fail(Err::InvariantViolation, "window span + 2*tau exceeds 2*pi");
  }
  SectionGeometry g;
  g.p_w_1 = p_w_1;
  g.p_w_2 = p_w_2;
  g.p_v_1 = p_w_1 + delta_offset;
  g.p_v_2 = p_w_2 + delta_offset;
  g.tau = tau;
  g.delta_offset = delta_offset;
  return g;
}

double UnfoldingFamily::s(double x) const {
  if (shape == Shape::Cosine) return -std::cos(x - phase);
  // periodic Catmull-Rom on uniform nodes
  int n = static_cast<int>(nodes.size());
  double u = (x - node_x0) / node_h;
  double fi = std::floor(u);
  double t = u - fi;
  long i = static_cast<long>(fi);
  auto at = [&](long k) {
    long m = ((i + k) % n + n) % n;
    return nodes[static_cast<size_t>(m)];
  };
  double pm1 = at(-1), p0 = at(0), p1 = at(1), p2 = at(2);
  return 0.5 * (2.0 * p0 + (p1 - pm1) * t +
                (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * t * t +
                (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * t * t * t);
}

double UnfoldingFamily::ds(double x) const {
  if (shape == Shape::Cosine) return std::sin(x - phase);
  int n = static_cast<int>(nodes.size());
  double u = (x - node_x0) / node_h;
  double fi = std::floor(u);
  double t = u - fi;
  long i = static_cast<long>(fi);
  auto at = [&](long k) {
    long m = ((i + k) % n + n) % n;
    return nodes[static_cast<size_t>(m)];
  };
  double pm1 = at(-1), p0 = at(0), p1 = at(1), p2 = at(2);
  return 0.5 *
         ((p1 - pm1) + 2.0 * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2) * t +
          3.0 * (-pm1 + 3.0 * p0 - 3.0 * p1 + p2) * t * t) /
         node_h;
}

namespace {

// Scan the positive arc (p_w_1, p_w_2 + 2*pi) and the complementary arc for
// the amplitudes M_v, M_w; also enforce the sign conventions.
void finish_family(UnfoldingFamily& fam, const SectionGeometry& geom) {
  constexpr int kScan = 4096;
  constexpr double kZeroTol = 1e-9;

  if (std::fabs(fam.s(geom.p_w_1)) > kZeroTol ||
      std::fabs(fam.s(geom.p_w_2)) > kZeroTol) {
    fail(Err::ZeroMismatch, "shape does not vanish at p_w_1/p_w_2");
  }
  if (!(fam.ds(geom.p_w_1) > 0.0)) {
    fail(Err::SignConvention, "need dh_v/dx > 0 at p_w_1");
  }
  if (!(fam.ds(geom.p_w_2) < 0.0)) {
    fail(Err::SignConvention, "need dh_v/dx < 0 at p_w_2");
  }

  double hump_lo = geom.p_w_1;
  double hump_hi = geom.p_w_2 + kTwoPi;
  fam.s_pos_max = 0.0;
  for (int i = 1; i < kScan; ++i) {
    double x = hump_lo + (hump_hi - hump_lo) * i / kScan;
    double v = fam.s(x);
    if (v <= 0.0) {
      fail(Err::SignConvention, "shape not positive inside the h_v hump");
    }
    if (v > fam.s_pos_max) {
      fam.s_pos_max = v;
      fam.s_pos_argmax = x;
    }
  }
  fam.s_neg_max = 0.0;
  for (int i = 1; i < kScan; ++i) {
    double x = geom.p_w_2 + (geom.p_w_1 - geom.p_w_2) * i / kScan;
    double v = -fam.s(x);
    if (v <= 0.0) {
      fail(Err::SignConvention, "shape not negative between p_w_2 and p_w_1");
    }
    if (v > fam.s_neg_max) {
      fam.s_neg_max = v;
      fam.s_neg_argmax = x;
    }
  }
  if (fam.shape == UnfoldingFamily::Shape::Cosine) {
    // exact amplitudes for the built-in family
    fam.s_pos_max = 1.0;
    fam.s_pos_argmax = fam.phase + kPi;
    fam.s_neg_max = 1.0;
    fam.s_neg_argmax = fam.phase;
  }
}

}  // namespace

UnfoldingFamily build_unfolding(const SectionGeometry& geom,
                                const std::string& shape,
                                double lambda_star) {
  if (shape != "cosine") {
    fail(Err::InvariantViolation, "unknown family shape '" + shape +
                                      "' (built-in: cosine; or build_tabulated)");
  }
  if (std::fabs((geom.p_w_1 - geom.p_w_2) - kPi) > 1e-12) {
    fail(Err::ZeroMismatch,
         "cosine family requires p_w_1 - p_w_2 = pi, got span " +
             num(geom.p_w_1 - geom.p_w_2));
  }
  if (!(lambda_star > 0.0) || lambda_star > 1.0) {
    fail(Err::InvariantViolation,
         "cosine family needs lambda_star in (0, 1] for the class-C bound");
  }
  UnfoldingFamily fam;
  fam.shape = UnfoldingFamily::Shape::Cosine;
  fam.lambda_star = lambda_star;
  fam.delta_offset = geom.delta_offset;
  fam.p_w_1 = geom.p_w_1;
  fam.p_w_2 = geom.p_w_2;
  fam.phase = 0.5 * (geom.p_w_1 + geom.p_w_2);
  finish_family(fam, geom);
  return fam;
}

UnfoldingFamily build_tabulated(const SectionGeometry& geom,
                                const std::vector<double>& samples, double x0,
                                double lambda_star) {
  if (samples.size() < 8) {
    fail(Err::InvariantViolation, "tabulated family needs >= 8 samples");
  }
  UnfoldingFamily fam;
  fam.shape = UnfoldingFamily::Shape::Tabulated;
  fam.lambda_star = lambda_star;
  fam.delta_offset = geom.delta_offset;
  fam.p_w_1 = geom.p_w_1;
  fam.p_w_2 = geom.p_w_2;
  fam.nodes = samples;
  fam.node_x0 = x0;
  fam.node_h = kTwoPi / static_cast<double>(samples.size());
  finish_family(fam, geom);
  return fam;
}

ClassCReport check_class_C(const UnfoldingFamily& fam,
                           const DerivedConstants& dc,
                           const std::vector<double>& grid) {
  ClassCReport rep;
  for (double lam : grid) {
    if (!(lam > 0.0) || lam > fam.lambda_star) {
      fail(Err::OutOfDomain, "class-C grid point outside (0, lambda_star]");
    }
    if (!(std::pow(fam.M_w(lam), dc.delta) < fam.M_v(lam))) {
      rep.ok = false;
      rep.violations.push_back(lam);
    }
  }
  return rep;
}

}  // namespace bykov
