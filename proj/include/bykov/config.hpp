#pragma once

#include <string>

#include "bykov/params.hpp"

namespace bykov {

// Fully assembled model state shared by every CLI command.
struct ModelConfig {
  SaddleParams saddle;
  DerivedConstants dc;
  SectionGeometry geom;
  UnfoldingFamily fam;
  std::string family_name = "cosine";
};

// Flat key=value text, one pair per line; '#' starts a comment; blank lines
// are skipped. Recognized keys: c_v, e_v, c_w, e_w, tau, delta_offset,
// family, lambda_star, p_w_1, p_w_2. Missing keys take the defaults
// (c_v=2, e_v=1, c_w=2, e_w=1, tau=0.1, delta_offset=0, family=cosine,
// lambda_star=0.9, p_w_1=pi/2, p_w_2=-pi/2).
ModelConfig parse_config_text(const std::string& text);

// Reads the file and delegates to parse_config_text. An empty path yields
// the all-defaults configuration.
ModelConfig parse_config_file(const std::string& path);

}  // namespace bykov
