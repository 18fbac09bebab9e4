#include "bykov/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "json.hpp"

#include "bykov/dynamics.hpp"
#include "bykov/errors.hpp"
#include "bykov/strips.hpp"
#include "bykov/tangency.hpp"

namespace bykov {

namespace {

using njson = nlohmann::ordered_json;

// Integral doubles print as integers (derived constants are exact ratios).
njson num(double x) {
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15)
    return static_cast<std::int64_t>(x);
  return x;
}

std::string csv_cell(const njson& v) {
  if (v.is_null()) return "";
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void write_csv(std::ostream& os, const std::vector<njson>& lines) {
  std::vector<std::string> cols;
  for (const auto& l : lines)
    for (const auto& item : l.items())
      if (std::find(cols.begin(), cols.end(), item.key()) == cols.end())
        cols.push_back(item.key());
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& l : lines) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) os << ',';
      if (l.contains(cols[i])) os << csv_cell(l.at(cols[i]));
    }
    os << '\n';
  }
}

void write_jsonl(std::ostream& os, const std::vector<njson>& lines) {
  for (const auto& l : lines) os << l.dump() << '\n';
}

int emit(const CliFlags& flags, const std::string& command,
         const std::vector<njson>& lines) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!flags.out_path.empty()) {
    file.open(flags.out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << flags.out_path
                << "' for writing\n";
      return 1;
    }
    os = &file;
  }
  if (flags.format == "csv")
    write_csv(*os, lines);
  else
    write_jsonl(*os, lines);
  if (!flags.csv_dir.empty()) {
    std::filesystem::create_directories(flags.csv_dir);
    std::ofstream side(flags.csv_dir + "/" + command + ".csv",
                       std::ios::binary);
    if (!side) {
      std::cerr << "error: cannot write CSV sidecar in '" << flags.csv_dir
                << "'\n";
      return 1;
    }
    write_csv(side, lines);
  }
  return 0;
}

int default_base_strip(const CliFlags& flags, double lam,
                       const ModelConfig& cfg) {
  if (flags.strip) return *flags.strip;
  return min_regular_index(lam, 64, cfg.dc, cfg.fam, cfg.geom);
}

std::vector<njson> cmd_validate(const ModelConfig& cfg, const CliFlags&) {
  std::vector<double> grid;
  for (int j = 1; j <= 32; ++j)
    grid.push_back(cfg.fam.lambda_star * 0.5 * j / 32.0);
  const ClassCReport cc = check_class_C(cfg.fam, cfg.dc, grid);
  njson j;
  j["delta"] = num(cfg.dc.delta);
  j["K"] = num(cfg.dc.K);
  j["delta_v"] = num(cfg.dc.delta_v);
  j["delta_w"] = num(cfg.dc.delta_w);
  j["lambda_star"] = cfg.fam.lambda_star;
  j["tau"] = cfg.geom.tau;
  j["delta_offset"] = cfg.geom.delta_offset;
  j["family"] = cfg.family_name;
  j["window_lo"] = cfg.geom.window_lo();
  j["window_hi"] = cfg.geom.window_hi();
  j["class_C_ok"] = cc.ok;
  return {j};
}

std::vector<njson> cmd_sweep(const ModelConfig& cfg, const CliFlags& flags) {
  const double hi = flags.lambda_hi.value_or(0.5);
  const double lo = flags.lambda_lo.value_or(1e-3);
  const int n = flags.strip.value_or(2);
  const int points = flags.depth.value_or(200);
  if (points < 2) fail(Err::InvariantViolation, "need at least 2 sweep points");
  if (!(0.0 < lo && lo < hi))
    fail(Err::OutOfDomain, "need 0 < lambda_lo < lambda_hi");
  std::vector<njson> lines(static_cast<std::size_t>(points));
  parallel_for(points, flags.jobs, [&](int i) {
    const double lam =
        hi * std::pow(lo / hi, static_cast<double>(i) / (points - 1));
    const IntersectionClass ic =
        classify_intersection(n, n, lam, cfg.dc, cfg.fam, cfg.geom);
    njson j;
    j["type"] = "sweep";
    j["lambda"] = lam;
    j["n"] = n;
    j["class"] = iclass_name(ic.value);
    j["components"] = ic.components;
    lines[static_cast<std::size_t>(i)] = std::move(j);
  });
  return lines;
}

std::vector<njson> cmd_tangency(const ModelConfig& cfg, const CliFlags& flags) {
  const int pulse = flags.pulse.value_or(1);
  const double hi = flags.lambda_hi.value_or(0.5);
  const double lo = flags.lambda_lo.value_or(1e-4);
  PulseOptions opts;
  opts.jobs = flags.jobs;
  const auto events = find_tangencies(hi, lo, pulse, /*max_events=*/64,
                                      cfg.dc, cfg.fam, cfg.geom, opts);
  std::vector<njson> lines;
  for (const auto& e : events) {
    njson j;
    j["type"] = "tangency";
    j["pulse"] = e.pulse;
    j["lambda"] = e.lambda;
    j["x"] = e.location.x;
    j["y"] = e.location.y;
    j["residual_g"] = e.residual_g;
    j["residual_gp"] = e.residual_gp;
    lines.push_back(std::move(j));
  }
  return lines;
}

std::vector<njson> cmd_strips(const ModelConfig& cfg, const CliFlags& flags) {
  const int N = flags.strip.value_or(10);
  std::vector<njson> lines;
  for (int n = 1; n <= N; ++n) {
    const Strip st = horizontal_strip(n, cfg.dc, cfg.geom);
    njson j;
    j["type"] = "strip";
    j["n"] = n;
    j["h_n"] = st.h_n;
    j["m_n"] = st.m_n;
    j["window_lo"] = st.window_lo;
    j["window_hi"] = st.window_hi;
    lines.push_back(std::move(j));
  }
  if (!flags.csv_dir.empty()) {
    std::filesystem::create_directories(flags.csv_dir);
    std::ofstream side(flags.csv_dir + "/strip_boundaries.csv",
                       std::ios::binary);
    side << "n,x,u1,u2\n";
    for (int n = 1; n <= N; ++n) {
      const Strip st = horizontal_strip(n, cfg.dc, cfg.geom);
      constexpr int kPts = 128;
      for (int i = 0; i <= kPts; ++i) {
        const double x = st.window_lo +
                         (st.window_hi - st.window_lo) * i / double(kPts);
        side << n << ',' << njson(x).dump() << ',' << njson(st.u1(x)).dump()
             << ',' << njson(st.u2(x)).dump() << '\n';
      }
    }
  }
  return lines;
}

std::vector<njson> cmd_classify(const ModelConfig& cfg, const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.1);
  const int base = default_base_strip(flags, lam, cfg);
  const int depth = flags.depth.value_or(1);
  std::vector<njson> lines;
  for (int horseshoe = base; horseshoe <= base + depth; ++horseshoe) {
    for (int horizontal = base; horizontal <= base + depth; ++horizontal) {
      const IntersectionClass ic = classify_intersection(
          horizontal, horseshoe, lam, cfg.dc, cfg.fam, cfg.geom);
      njson j;
      j["type"] = "classify";
      j["lambda"] = lam;
      j["horseshoe"] = horseshoe;
      j["horizontal"] = horizontal;
      j["class"] = iclass_name(ic.value);
      j["components"] = ic.components;
      lines.push_back(std::move(j));
    }
  }
  return lines;
}

std::vector<njson> cmd_delta(const ModelConfig& cfg, const CliFlags& flags) {
  const int a = flags.strip.value_or(2);
  const double seed = flags.lambda_hi.value_or(0.1);
  const DeltaInterval di = delta_interval(a, seed, cfg.dc, cfg.fam, cfg.geom);
  njson j;
  j["type"] = "delta";
  j["a"] = di.a;
  j["c"] = di.c;
  j["d"] = di.d;
  return {j};
}

std::vector<njson> cmd_orbit(const ModelConfig& cfg, const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.1);
  const int iters = flags.max_iters.value_or(100);
  const int n = default_base_strip(flags, lam, cfg);
  const Strip st = horizontal_strip(n, cfg.dc, cfg.geom);
  const double x0 = 0.5 * (st.window_lo + st.window_hi);
  const double y0 = std::sqrt(st.u1(x0) * st.u2(x0));
  const OrbitRecord rec = iterate_orbit(CylPoint::make(Section::InV, x0, y0),
                                        lam, iters, cfg.dc, cfg.fam, cfg.geom);
  std::vector<njson> lines;
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    njson j;
    j["type"] = "orbit";
    j["i"] = i;
    j["x"] = rec.points[i].x;
    j["y"] = rec.points[i].y;
    j["label"] = rec.itinerary[i];
    lines.push_back(std::move(j));
  }
  njson tail;
  tail["type"] = "orbit_end";
  tail["termination"] = termination_name(rec.termination);
  tail["steps"] = rec.points.size() - 1;
  lines.push_back(std::move(tail));
  return lines;
}

std::vector<njson> cmd_fixedpoints(const ModelConfig& cfg,
                                   const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.13);
  const int m = flags.strip.value_or(1);
  const auto fps = fixed_points(lam, m, cfg.dc, cfg.fam, cfg.geom);
  std::vector<njson> lines;
  for (const auto& fp : fps) {
    njson j;
    j["type"] = "fixed_point";
    j["m"] = fp.branch;
    j["lambda"] = lam;
    j["x"] = fp.x;
    j["y"] = fp.y;
    j["mu1"] = fp.mu1;
    j["mu2"] = fp.mu2;
    j["complex_pair"] = fp.complex_pair;
    j["fp_type"] = fp_type_name(fp.type);
    j["det"] = fp.det;
    j["residual"] = fp.residual;
    lines.push_back(std::move(j));
  }
  return lines;
}

std::vector<njson> cmd_bifurcate(const ModelConfig& cfg,
                                 const CliFlags& flags) {
  const int m = flags.strip.value_or(1);
  const double lo = flags.lambda_lo.value_or(0.05);
  const double hi = flags.lambda_hi.value_or(0.2);
  auto events = track_bifurcations(m, lo, hi, cfg.dc, cfg.fam, cfg.geom);
  std::sort(events.begin(), events.end(),
            [](const BifurcationEvent& a, const BifurcationEvent& b) {
              if (a.lambda != b.lambda) return a.lambda > b.lambda;
              return a.x < b.x;
            });
  std::vector<njson> lines;
  for (const auto& e : events) {
    njson j;
    j["type"] = bif_kind_name(e.kind);
    j["m"] = e.m;
    j["lambda"] = e.lambda;
    j["x"] = e.x;
    j["y"] = e.y;
    j["det"] = e.det;
    if (e.kind == BifurcationEvent::Kind::Flip) {
      j["period2_found"] = e.period2.found;
      if (e.period2.found) {
        j["period2_stable"] = e.period2.stable;
        j["period2_lambda"] = e.period2.probe_lambda;
        j["period2_x"] = e.period2.x;
        j["period2_y"] = e.period2.y;
        j["period2_mu1"] = e.period2.mu1;
        j["period2_mu2"] = e.period2.mu2;
      }
    }
    lines.push_back(std::move(j));
  }
  return lines;
}

std::vector<njson> cmd_cover(const ModelConfig& cfg, const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.1);
  const int base = default_base_strip(flags, lam, cfg);
  const int depth = flags.depth.value_or(1);
  std::vector<int> strips;
  for (int j = 0; j <= depth; ++j) strips.push_back(base + j);
  const CoveringReport rep =
      covering_check(strips, lam, cfg.dc, cfg.fam, cfg.geom);
  std::vector<njson> lines;
  for (const auto& pc : rep.pairs) {
    njson j;
    j["type"] = "covering";
    j["lambda"] = lam;
    j["image"] = pc.image_strip;
    j["target"] = pc.target_strip;
    j["class"] = iclass_name(pc.cls);
    j["components"] = pc.components;
    j["covered"] = pc.covered;
    if (!pc.note.empty()) j["note"] = pc.note;
    lines.push_back(std::move(j));
  }
  njson tail;
  tail["type"] = "covering_summary";
  tail["ok"] = rep.ok;
  tail["alphabet"] = rep.alphabet;
  lines.push_back(std::move(tail));
  return lines;
}

std::vector<njson> cmd_entropy(const ModelConfig& cfg, const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.1);
  const int cap = flags.depth.value_or(1);
  const int base = min_regular_index(lam, 64, cfg.dc, cfg.fam, cfg.geom);
  std::vector<int> S;
  for (int j = 0; j <= cap; ++j) S.push_back(base + j);
  const CoveringReport rep = covering_check(S, lam, cfg.dc, cfg.fam, cfg.geom);
  int k = 0;
  for (int n : S) {
    bool good = true;
    for (const auto& pc : rep.pairs)
      if (pc.image_strip == n || pc.target_strip == n)
        good = good && pc.covered;
    if (good) ++k;
  }
  njson j;
  j["type"] = "entropy";
  j["lambda"] = lam;
  j["base"] = base;
  j["cap"] = cap;
  j["k"] = k;
  if (k > 0)
    j["value"] = std::log(2.0 * k);
  else
    j["value"] = nullptr;
  return {j};
}

std::vector<njson> cmd_escape(const ModelConfig& cfg, const CliFlags& flags) {
  const double lam = flags.lambda.value_or(0.1);
  const int T = flags.max_iters.value_or(50);
  const auto fractions = escape_statistics(lam, T, /*sample_count=*/10000,
                                           flags.seed, cfg.dc, cfg.fam,
                                           cfg.geom, flags.jobs);
  std::vector<njson> lines;
  for (std::size_t t = 0; t < fractions.size(); ++t) {
    njson j;
    j["type"] = "escape";
    j["t"] = t;
    j["fraction"] = fractions[t];
    lines.push_back(std::move(j));
  }
  return lines;
}

}  // namespace

int run_command(const std::string& command, const CliFlags& flags) {
  const bool known =
      std::find_if(std::begin(kCommands), std::end(kCommands),
                   [&](const char* c) { return command == c; }) !=
      std::end(kCommands);
  if (!known) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return 2;
  }
  if (flags.format != "jsonl" && flags.format != "csv") {
    std::cerr << "error: --format must be jsonl or csv\n";
    return 2;
  }
  if (flags.jobs < 1) {
    std::cerr << "error: --jobs must be >= 1\n";
    return 2;
  }
  try {
    const ModelConfig cfg = parse_config_file(flags.config_path);
    std::vector<njson> lines;
    if (command == "validate") lines = cmd_validate(cfg, flags);
    else if (command == "sweep") lines = cmd_sweep(cfg, flags);
    else if (command == "tangency") lines = cmd_tangency(cfg, flags);
    else if (command == "strips") lines = cmd_strips(cfg, flags);
    else if (command == "classify") lines = cmd_classify(cfg, flags);
    else if (command == "delta") lines = cmd_delta(cfg, flags);
    else if (command == "orbit") lines = cmd_orbit(cfg, flags);
    else if (command == "fixedpoints") lines = cmd_fixedpoints(cfg, flags);
    else if (command == "bifurcate") lines = cmd_bifurcate(cfg, flags);
    else if (command == "cover") lines = cmd_cover(cfg, flags);
    else if (command == "entropy") lines = cmd_entropy(cfg, flags);
    else if (command == "escape") lines = cmd_escape(cfg, flags);
    return emit(flags, command, lines);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace bykov
