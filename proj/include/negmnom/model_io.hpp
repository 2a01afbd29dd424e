#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "negmnom/subset_poly.hpp"

namespace negmnom {

// Model files look like
//   {"n": 2, "terms": {"1": 1.0, "2": 1.0, "1,2": -0.5}}
// Term keys are comma-separated ascending 1-based indices. Unknown keys and
// the empty subset are rejected with ModelFormatError.
AffineModel parse_model_json(std::string_view text);
AffineModel load_model(const std::filesystem::path& path);
std::string model_to_json(const AffineModel& model);

// Parses a subset key such as "1,3" for a model of dimension n.
SubsetId parse_subset_key(std::string_view key, int n);

}  // namespace negmnom
