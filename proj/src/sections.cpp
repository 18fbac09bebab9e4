#include "bykov/sections.hpp"

#include <cmath>

namespace bykov {

const char* err_name(Err code) {
  switch (code) {
    case Err::EigenvalueOrder: return "EigenvalueOrder";
    case Err::StabilityViolated: return "StabilityViolated";
    case Err::NonFocus: return "NonFocus";
    case Err::ZeroMismatch: return "ZeroMismatch";
    case Err::SignConvention: return "SignConvention";
    case Err::OutOfDomain: return "OutOfDomain";
    case Err::NonPositiveHeight: return "NonPositiveHeight";
    case Err::NonPositiveRadius: return "NonPositiveRadius";
    case Err::NotAGraph: return "NotAGraph";
    case Err::NonPositive: return "NonPositive";
    case Err::NoBracket: return "NoBracket";
    case Err::EmptyRange: return "EmptyRange";
    case Err::ResolutionExhausted: return "ResolutionExhausted";
    case Err::TangentRoot: return "TangentRoot";
    case Err::MaxEventsReached: return "MaxEventsReached";
    case Err::CapExceeded: return "CapExceeded";
    case Err::NoSolution: return "NoSolution";
    case Err::NoTangencyFound: return "NoTangencyFound";
    case Err::OrderingViolated: return "OrderingViolated";
    case Err::ParseError: return "ParseError";
    case Err::UnknownKey: return "UnknownKey";
    case Err::InvariantViolation: return "InvariantViolation";
  }
  return "UnknownError";
}

const char* section_name(Section s) {
  switch (s) {
    case Section::InV: return "InV";
    case Section::OutV: return "OutV";
    case Section::InW: return "InW";
    case Section::OutW: return "OutW";
  }
  return "?";
}

CylPoint CylPoint::make(Section s, double x, double y) {
  CylPoint p;
  p.section = s;
  p.x = x;
  p.y = y;
  if (y > 0.0) p.log_y = std::log(y);
  return p;
}

CylPoint CylPoint::from_log(Section s, double x, double log_y) {
  CylPoint p;
  p.section = s;
  p.x = x;
  p.y = std::exp(log_y);
  p.log_y = log_y;
  return p;
}

SampledCurve sample_graph(Section s, double a, double b, int n,
                          const std::function<double(double)>& f) {
  SampledCurve c;
  c.section = s;
  c.samples.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * i / (n - 1);
    c.samples.emplace_back(x, f(x));
  }
  return c;
}

SampledCurve sample_hump(Section s, double a, double b,
                         const std::function<double(double)>& f, int bulk,
                         double tail_ratio, int tail_depth) {
  double w = b - a;
  std::vector<double> xs;
  xs.reserve(static_cast<size_t>(bulk + 2 * tail_depth + 1));
  for (int i = tail_depth; i >= 1; --i) {
    xs.push_back(a + 0.25 * w * std::pow(tail_ratio, i));
  }
  for (int i = 0; i <= bulk; ++i) {
    xs.push_back(a + 0.25 * w + 0.5 * w * i / bulk);
  }
  for (int i = 1; i <= tail_depth; ++i) {
    xs.push_back(b - 0.25 * w * std::pow(tail_ratio, i));
  }
  SampledCurve c;
  c.section = s;
  c.samples.reserve(xs.size());
  for (double x : xs) c.samples.emplace_back(x, f(x));
  return c;
}

bool is_graph(const SampledCurve& c) {
  for (size_t i = 1; i < c.samples.size(); ++i) {
    if (!(c.samples[i].first > c.samples[i - 1].first)) return false;
  }
  return true;
}

namespace {

// Proper crossing of segments (p1,p2) and (p3,p4) via orientation signs.
bool segments_cross(const std::pair<double, double>& p1,
                    const std::pair<double, double>& p2,
                    const std::pair<double, double>& p3,
                    const std::pair<double, double>& p4) {
  auto orient = [](const std::pair<double, double>& a,
                   const std::pair<double, double>& b,
                   const std::pair<double, double>& c) {
    double v = (b.first - a.first) * (c.second - a.second) -
               (b.second - a.second) * (c.first - a.first);
    return (v > 0.0) - (v < 0.0);
  };
  int o1 = orient(p1, p2, p3), o2 = orient(p1, p2, p4);
  int o3 = orient(p3, p4, p1), o4 = orient(p3, p4, p2);
  return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

bool curve_self_intersects(const SampledCurve& c) {
  const auto& s = c.samples;
  if (s.size() < 4) return false;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    for (size_t j = i + 2; j + 1 < s.size(); ++j) {
      if (segments_cross(s[i], s[i + 1], s[j], s[j + 1])) return true;
    }
  }
  return false;
}

RegionFlag classify_region(const CylPoint& p, double lam,
                           const UnfoldingFamily& fam, double atol) {
  if (!(p.y > 0.0) || !(p.y < 1.0)) {
    fail(Err::OutOfDomain, "classify_region needs y in (0, 1)");
  }
  double hv = fam.h_v(p.x, lam);
  if (std::fabs(p.y - hv) <= atol) return RegionFlag::OnBoundary;
  if (hv > 0.0 && p.y < hv) return RegionFlag::Wminus;
  return RegionFlag::Wplus;
}

}  // namespace bykov
