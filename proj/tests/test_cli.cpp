#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bykov/cli.hpp"
#include "bykov/dynamics.hpp"
#include "doctest.h"
#include "json.hpp"
#include "reference_values.hpp"

using namespace bykov;
using njson = nlohmann::json;

namespace {

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

const std::string kScratch = "cli_scratch";

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  std::filesystem::create_directories(kScratch);
  const std::string out = kScratch + "/stdout.txt";
  const std::string err = kScratch + "/stderr.txt";
  const std::string cmd = std::string("\"") + BYKOV_CLI_PATH + "\" " + args +
                          " > " + out + " 2> " + err;
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<njson> parse_lines(const std::string& text) {
  std::vector<njson> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(njson::parse(line));
  return lines;
}

std::string write_scratch(const std::string& name, const std::string& text) {
  std::filesystem::create_directories(kScratch);
  const std::string path = kScratch + "/" + name;
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config text: defaults, overrides, comments") {
  const ModelConfig def = parse_config_text("");
  CHECK(def.dc.delta == 4.0);
  CHECK(def.dc.K == 3.0);
  CHECK(def.geom.tau == 0.1);
  CHECK(def.geom.delta_offset == 0.0);
  CHECK(def.fam.lambda_star == 0.9);
  CHECK(def.family_name == "cosine");
  CHECK(def.geom.p_w_1 == kPi / 2);
  CHECK(def.geom.p_w_2 == -kPi / 2);

  const ModelConfig cfg = parse_config_text(
      "# full override\n"
      "c_v = 3\n"
      "e_v = 1.5\n"
      "c_w=2\n"
      "e_w=1\n"
      "  tau = 0.2   # inline comment\n"
      "delta_offset = 0.05\n"
      "lambda_star = 0.8\n"
      "family = cosine\n"
      "\n");
  CHECK(cfg.saddle.c_v == 3.0);
  CHECK(cfg.saddle.e_v == 1.5);
  const DerivedConstants dc = validate_params(cfg.saddle);
  CHECK(cfg.dc.delta == dc.delta);
  CHECK(cfg.dc.K == dc.K);
  CHECK(cfg.geom.tau == 0.2);
  CHECK(cfg.geom.delta_offset == 0.05);
  CHECK(cfg.fam.lambda_star == 0.8);

  // an empty path means defaults, not an error
  CHECK(parse_config_file("").dc.delta == 4.0);
}

TEST_CASE("config text: diagnostics carry line numbers") {
  auto msg_of = [](const std::string& text) -> std::string {
    try {
      parse_config_text(text);
    } catch (const ModelError& e) {
      return e.what();
    }
    FAIL("expected a ModelError");
    return "";
  };

  CHECK(code_of([] { parse_config_text("c_v\n"); }) == Err::ParseError);
  CHECK(msg_of("c_v\n").find("line 1") != std::string::npos);

  CHECK(code_of([] { parse_config_text("tau=abc\n"); }) == Err::ParseError);
  CHECK(code_of([] { parse_config_text("tau=0.1 0.2\n"); }) ==
        Err::ParseError);
  CHECK(code_of([] { parse_config_text("tau=\n"); }) == Err::ParseError);

  CHECK(code_of([] { parse_config_text("tau=0.2\nzeta=1\n"); }) ==
        Err::UnknownKey);
  CHECK(msg_of("tau=0.2\nzeta=1\n").find("line 2") != std::string::npos);

  // parameter violations surface from validation, not parsing
  CHECK(code_of([] { parse_config_text("c_v=1\ne_v=2\n"); }) ==
        Err::EigenvalueOrder);
  CHECK(code_of([] { parse_config_text("tau=-0.1\n"); }) ==
        Err::InvariantViolation);

  CHECK(code_of([] { parse_config_file("cli_scratch/no_such_file.conf"); }) ==
        Err::ParseError);
}

TEST_CASE("validate prints the derived-constant header") {
  const auto r = run_cli("validate");
  REQUIRE(r.code == 0);
  const auto lines = parse_lines(r.out);
  REQUIRE(lines.size() == 1);
  const auto& j = lines[0];
  CHECK(j.at("delta").is_number_integer());
  CHECK(j.at("delta").get<double>() == 4.0);
  CHECK(j.at("K").get<double>() == 3.0);
  CHECK(j.at("delta_v").get<double>() == 2.0);
  CHECK(j.at("delta_w").get<double>() == 2.0);
  CHECK(j.at("lambda_star").get<double>() == 0.9);
  CHECK(j.at("tau").get<double>() == 0.1);
  CHECK(j.at("delta_offset").get<double>() == 0.0);
  CHECK(j.at("family").get<std::string>() == "cosine");
  CHECK(j.at("window_lo").get<double>() == -(kPi / 2 + 0.1));
  CHECK(j.at("window_hi").get<double>() == kPi / 2 + 0.1);
  CHECK(j.at("class_C_ok").get<bool>() == true);

  // a config override lands in the report
  const std::string conf = write_scratch("wide.conf", "tau = 0.2\n");
  const auto r2 = run_cli("validate --config " + conf);
  REQUIRE(r2.code == 0);
  CHECK(parse_lines(r2.out)[0].at("window_hi").get<double>() ==
        kPi / 2 + 0.2);
}

TEST_CASE("strips command: rows, sidecars, and --out") {
  const auto r = run_cli("strips --strip 5 --csv-dir " + kScratch + "/side");
  REQUIRE(r.code == 0);
  const auto lines = parse_lines(r.out);
  REQUIRE(lines.size() == 5);
  const ModelConfig cfg = parse_config_text("");
  for (int n = 1; n <= 5; ++n) {
    const Strip st = horizontal_strip(n, cfg.dc, cfg.geom);
    const auto& j = lines[static_cast<std::size_t>(n - 1)];
    CHECK(j.at("n").get<int>() == n);
    CHECK(j.at("h_n").get<double>() == st.h_n);  // JSON round-trips doubles
    CHECK(j.at("m_n").get<double>() == st.m_n);
  }
  CHECK(std::filesystem::exists(kScratch + "/side/strips.csv"));
  CHECK(std::filesystem::exists(kScratch + "/side/strip_boundaries.csv"));
  const std::string side = slurp(kScratch + "/side/strips.csv");
  CHECK(side.rfind("type,n,h_n,m_n,window_lo,window_hi\n", 0) == 0);
  const std::string bnd = slurp(kScratch + "/side/strip_boundaries.csv");
  CHECK(bnd.rfind("n,x,u1,u2\n", 0) == 0);

  // --out writes exactly the stdout bytes
  const auto r2 = run_cli("strips --strip 5 --out " + kScratch + "/s.jsonl");
  REQUIRE(r2.code == 0);
  CHECK(r2.out.empty());
  CHECK(slurp(kScratch + "/s.jsonl") == r.out);

  // csv format on stdout
  const auto r3 = run_cli("strips --strip 2 --format csv");
  REQUIRE(r3.code == 0);
  CHECK(r3.out.rfind("type,n,h_n,m_n,window_lo,window_hi\nstrip,1,", 0) == 0);
}

TEST_CASE("orbit command reproduces the library orbit bit for bit") {
  const auto r = run_cli("orbit --lambda 0.1 --max-iters 40");
  REQUIRE(r.code == 0);
  const auto lines = parse_lines(r.out);
  REQUIRE(lines.size() >= 2);

  // the default seed is the geometric fiber center of the first regular
  // strip: x0 at the window middle (= 0), y0 = e^{-4 pi / 3}
  const ModelConfig cfg = parse_config_text("");
  const Strip st = horizontal_strip(2, cfg.dc, cfg.geom);
  const double x0 = 0.5 * (st.window_lo + st.window_hi);
  const double y0 = std::sqrt(st.u1(x0) * st.u2(x0));
  CHECK(y0 == doctest::Approx(std::exp(-2.0 * kTwoPi / 3.0)).epsilon(1e-15));
  CHECK(lines[0].at("y").get<double>() == y0);
  CHECK(lines[0].at("label").get<int>() == 2);

  const auto rec = iterate_orbit(CylPoint::make(Section::InV, x0, y0), 0.1,
                                 40, cfg.dc, cfg.fam, cfg.geom);
  REQUIRE(lines.size() == rec.points.size() + 1);
  for (std::size_t i = 0; i < rec.points.size(); ++i) {
    CHECK(lines[i].at("type").get<std::string>() == "orbit");
    CHECK(lines[i].at("i").get<std::size_t>() == i);
    CHECK(lines[i].at("x").get<double>() == rec.points[i].x);
    CHECK(lines[i].at("y").get<double>() == rec.points[i].y);
    CHECK(lines[i].at("label").get<int>() == rec.itinerary[i]);
  }
  const auto& tail = lines.back();
  CHECK(tail.at("type").get<std::string>() == "orbit_end");
  CHECK(tail.at("termination").get<std::string>() ==
        termination_name(rec.termination));
  CHECK(tail.at("steps").get<std::size_t>() == rec.points.size() - 1);
}

TEST_CASE("analysis commands emit the frozen values") {
  // delta interval at strip 2
  const auto rd = run_cli("delta --strip 2 --lambda-hi 0.1");
  REQUIRE(rd.code == 0);
  const auto dl = parse_lines(rd.out);
  REQUIRE(dl.size() == 1);
  CHECK(dl[0].at("a").get<int>() == 2);
  CHECK(dl[0].at("c").get<double>() ==
        doctest::Approx(0.00822654789530056).epsilon(1e-12));
  CHECK(dl[0].at("d").get<double>() ==
        doctest::Approx(0.025061351736293508).epsilon(1e-12));

  // classification matrix at the default parameter
  const auto rc = run_cli("classify --lambda 0.1 --depth 1");
  REQUIRE(rc.code == 0);
  const auto cl = parse_lines(rc.out);
  REQUIRE(cl.size() == 4);
  for (const auto& j : cl) {
    CHECK(j.at("class").get<std::string>() == "regular");
    CHECK(j.at("components").get<int>() == 2);
  }

  // entropy proxy over {2, 3}
  const auto re = run_cli("entropy --lambda 0.1 --depth 1");
  REQUIRE(re.code == 0);
  const auto el = parse_lines(re.out);
  REQUIRE(el.size() == 1);
  CHECK(el[0].at("base").get<int>() == 2);
  CHECK(el[0].at("k").get<int>() == 2);
  CHECK(el[0].at("value").get<double>() ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));

  // fixed points on branch 1
  const auto rf = run_cli("fixedpoints --lambda 0.13 --strip 1");
  REQUIRE(rf.code == 0);
  const auto fl = parse_lines(rf.out);
  REQUIRE(fl.size() == 2);
  CHECK(fl[0].at("x").get<double>() ==
        doctest::Approx(-0.3316756241722083).epsilon(1e-12));
  CHECK(fl[0].at("fp_type").get<std::string>() == "sink");
  CHECK(fl[1].at("fp_type").get<std::string>() == "saddle");
  CHECK(fl[1].at("y").get<double>() ==
        doctest::Approx(std::exp(-kTwoPi / 3.0)).epsilon(1e-14));

  // bifurcation scan on branch 1, reported top-down
  const auto rb = run_cli("bifurcate --strip 1 --lambda-lo 0.12 --lambda-hi 0.2");
  REQUIRE(rb.code == 0);
  const auto bl = parse_lines(rb.out);
  REQUIRE(bl.size() == 2);
  CHECK(bl[0].at("type").get<std::string>() == "flip");
  CHECK(bl[0].at("lambda").get<double>() ==
        doctest::Approx(0.1481517186367794).epsilon(1e-9));
  CHECK(bl[0].at("period2_found").get<bool>());
  CHECK(bl[0].at("period2_stable").get<bool>());
  CHECK(bl[1].at("type").get<std::string>() == "saddle_node");
  CHECK(bl[1].at("lambda").get<double>() ==
        doctest::Approx(0.122914745374496933).epsilon(1e-9));
}

TEST_CASE("parallel runs are byte-identical; sampled runs are seeded") {
  // lambda sweep of strip-2 classes
  const std::string sweep_args =
      "sweep --strip 2 --lambda-hi 0.1 --lambda-lo 0.002 --depth 64";
  const auto s1 = run_cli(sweep_args + " --jobs 1");
  const auto s4 = run_cli(sweep_args + " --jobs 4");
  REQUIRE(s1.code == 0);
  REQUIRE(s4.code == 0);
  CHECK(s1.out == s4.out);
  const auto sl = parse_lines(s1.out);
  REQUIRE(sl.size() == 64);
  CHECK(sl.front().at("class").get<std::string>() == "regular");
  CHECK(sl.back().at("class").get<std::string>() == "empty");

  // tangency cascade (three events above lambda = 0.02)
  const std::string tan_args = "tangency --pulse 1 --lambda-hi 0.5 --lambda-lo 0.02";
  const auto t1 = run_cli(tan_args + " --jobs 1");
  const auto t4 = run_cli(tan_args + " --jobs 4");
  REQUIRE(t1.code == 0);
  CHECK(t1.out == t4.out);
  const auto tl = parse_lines(t1.out);
  REQUIRE(tl.size() == 3);
  for (int k = 0; k < 3; ++k)
    CHECK(tl[k].at("lambda").get<double>() ==
          doctest::Approx(refv::kPulse1Lambda[k]).epsilon(refv::kPulse1Tol));

  // escape fractions: same frozen numbers as the library run
  const std::string esc_args = "escape --lambda 0.1 --max-iters 4 --seed 7";
  const auto e1 = run_cli(esc_args + " --jobs 1");
  const auto e4 = run_cli(esc_args + " --jobs 4");
  REQUIRE(e1.code == 0);
  CHECK(e1.out == e4.out);
  const auto el = parse_lines(e1.out);
  REQUIRE(el.size() == 5);
  CHECK(el[0].at("fraction").get<double>() == 1.0);
  CHECK(el[1].at("fraction").get<double>() == 9326.0 / 10000.0);
  CHECK(el[4].at("fraction").get<double>() == 1262.0 / 10000.0);
  const auto e9 = run_cli("escape --lambda 0.1 --max-iters 4 --seed 9");
  CHECK(e9.out != e1.out);
}

TEST_CASE("exit codes separate model errors from usage errors") {
  CHECK(run_cli("validate").code == 0);

  // model-level failures: exit 1 with a diagnostic on stderr
  const std::string bad = write_scratch("bad.conf", "c_v=1\ne_v=2\n");
  const auto r1 = run_cli("validate --config " + bad);
  CHECK(r1.code == 1);
  CHECK(r1.err.find("error:") != std::string::npos);
  CHECK(run_cli("validate --config cli_scratch/missing.conf").code == 1);
  CHECK(run_cli("delta --strip 2 --lambda-hi 0.95").code == 1);
  CHECK(run_cli("fixedpoints --lambda 0.12 --strip 1").code == 1);
  CHECK(run_cli("strips --strip 3 --out /nonexistent/dir/x.jsonl").code == 1);

  // usage failures: exit 2
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("").code == 2);            // a subcommand is required
  CHECK(run_cli("validate --format xml").code == 2);
  CHECK(run_cli("validate --jobs 0").code == 2);
}

}  // TEST_SUITE
