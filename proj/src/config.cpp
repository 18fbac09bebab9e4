#include "bykov/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bykov/errors.hpp"

namespace bykov {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& value, int line_no) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(value, &pos);
    while (pos < value.size() &&
           std::isspace(static_cast<unsigned char>(value[pos])))
      ++pos;
    if (pos != value.size())
      fail(Err::ParseError, "line " + std::to_string(line_no) +
                                ": trailing characters in '" + value + "'");
    return x;
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception&) {
    fail(Err::ParseError, "line " + std::to_string(line_no) +
                              ": expected a number, got '" + value + "'");
  }
}

}  // namespace

ModelConfig parse_config_text(const std::string& text) {
  SaddleParams saddle;
  double tau = 0.1, delta_offset = 0.0, lambda_star = 0.9;
  double p_w_1 = kPi / 2, p_w_2 = -kPi / 2;
  std::string family = "cosine";

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(Err::ParseError,
           "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(Err::ParseError,
           "line " + std::to_string(line_no) + ": empty key or value");

    if (key == "c_v") saddle.c_v = parse_number(value, line_no);
    else if (key == "e_v") saddle.e_v = parse_number(value, line_no);
    else if (key == "c_w") saddle.c_w = parse_number(value, line_no);
    else if (key == "e_w") saddle.e_w = parse_number(value, line_no);
    else if (key == "tau") tau = parse_number(value, line_no);
    else if (key == "delta_offset") delta_offset = parse_number(value, line_no);
    else if (key == "lambda_star") lambda_star = parse_number(value, line_no);
    else if (key == "p_w_1") p_w_1 = parse_number(value, line_no);
    else if (key == "p_w_2") p_w_2 = parse_number(value, line_no);
    else if (key == "family") family = value;
    else
      fail(Err::UnknownKey,
           "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }

  ModelConfig cfg;
  cfg.saddle = saddle;
  cfg.dc = validate_params(saddle);
  cfg.geom = make_geometry(p_w_1, p_w_2, tau, delta_offset);
  cfg.fam = build_unfolding(cfg.geom, family, lambda_star);
  cfg.family_name = family;
  return cfg;
}

ModelConfig parse_config_file(const std::string& path) {
  if (path.empty()) return parse_config_text("");
  std::ifstream in(path);
  if (!in) fail(Err::ParseError, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace bykov
