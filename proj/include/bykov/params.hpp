#pragma once

#include <string>
#include <vector>

#include "bykov/errors.hpp"
#include "bykov/util.hpp"

namespace bykov {

// Eigenvalue data of the two saddle-foci. alpha_* are the (normalized)
// imaginary parts; the model only needs them to be nonzero.
struct SaddleParams {
  double c_v = 2.0;  // contraction rate at v
  double e_v = 1.0;  // expansion rate at v
  double c_w = 2.0;  // contraction rate at w
  double e_w = 1.0;  // expansion rate at w
  double alpha_v = 1.0;
  double alpha_w = 1.0;
};

struct DerivedConstants {
  double delta_v;  // c_v / e_v > 1
  double delta_w;  // c_w / e_w > 1
  double delta;    // delta_v * delta_w
  double K;        // (c_v + e_w) / (e_v * e_w)
};

// Checks the standing hypotheses (C > E at both saddles, nonzero imaginary
// parts, C_v*C_w > E_v*E_w) and derives the return-map constants.
DerivedConstants validate_params(const SaddleParams& p);

// Angular positions of the primary connections and the strip margin tau.
// delta_offset is the rigid rotation of the wall map; p_v_j = p_w_j + offset.
struct SectionGeometry {
  double p_w_1 = kPi / 2;
  double p_w_2 = -kPi / 2;
  double p_v_1 = kPi / 2;
  double p_v_2 = -kPi / 2;
  double tau = 0.1;
  double delta_offset = 0.0;

  double window_lo() const { return p_v_2 - tau; }
  double window_hi() const { return p_v_1 + tau; }
};

SectionGeometry make_geometry(double p_w_1, double p_w_2, double tau,
                              double delta_offset);

// Symmetry-breaking manifold graphs h_v(x, lam) = lam * s(x) with zeros at
// p_w_1, p_w_2, and h_w(x, lam) = -h_v(x - delta_offset, lam) with zeros at
// p_v_1, p_v_2. Shape s is either a shifted negative cosine or a periodic
// Catmull-Rom interpolant of uniform samples.
struct UnfoldingFamily {
  enum class Shape { Cosine, Tabulated };

  Shape shape = Shape::Cosine;
  double lambda_star = 0.9;
  double delta_offset = 0.0;
  double p_w_1 = 0.0;
  double p_w_2 = 0.0;
  double phase = 0.0;          // cosine: s(x) = -cos(x - phase)
  std::vector<double> nodes;   // tabulated: one period of s, uniform grid
  double node_x0 = 0.0;
  double node_h = 0.0;
  double s_pos_max = 1.0;      // max of s on the h_v > 0 arc
  double s_pos_argmax = 0.0;
  double s_neg_max = 1.0;      // max of -s on the complementary arc
  double s_neg_argmax = 0.0;

  double s(double x) const;
  double ds(double x) const;

  double h_v(double x, double lam) const { return lam * s(x); }
  double dh_v(double x, double lam) const { return lam * ds(x); }
  double h_w(double x, double lam) const { return -lam * s(x - delta_offset); }
  double dh_w(double x, double lam) const { return -lam * ds(x - delta_offset); }

  double M_v(double lam) const { return lam * s_pos_max; }
  double M_w(double lam) const { return lam * s_neg_max; }
  double x_v(double /*lam*/) const { return s_pos_argmax; }
  double x_w(double /*lam*/) const { return s_neg_argmax + delta_offset; }

  // Positive hump of h_w on In(v): (p_v_2, p_v_1).
  double hump_lo() const { return p_w_2 + delta_offset; }
  double hump_hi() const { return p_w_1 + delta_offset; }
};

// shape is "cosine" (requires p_w_1 - p_w_2 = pi) or use build_tabulated.
UnfoldingFamily build_unfolding(const SectionGeometry& geom,
                                const std::string& shape,
                                double lambda_star = 0.9);

// samples: one full period of s starting at x0 with uniform step h such that
// n*h = 2*pi. Zeros at p_w_j are required to 1e-9 after interpolation.
UnfoldingFamily build_tabulated(const SectionGeometry& geom,
                                const std::vector<double>& samples,
                                double x0, double lambda_star = 0.9);

struct ClassCReport {
  bool ok = true;
  std::vector<double> violations;  // lambda values failing M_w^delta < M_v
};

ClassCReport check_class_C(const UnfoldingFamily& fam,
                           const DerivedConstants& dc,
                           const std::vector<double>& grid);

}  // namespace bykov
