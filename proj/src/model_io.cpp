#include "negmnom/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace negmnom {

using nlohmann::json;

SubsetId parse_subset_key(std::string_view key, int n) {
  if (key.empty()) throw ModelFormatError("empty term key (constant term) is not allowed");
  SubsetId t;
  int previous = 0;
  std::size_t start = 0;
  while (start <= key.size()) {
    const std::size_t comma = std::min(key.find(',', start), key.size());
    const std::string_view piece = key.substr(start, comma - start);
    if (piece.empty() || piece.size() > 3 ||
        piece.find_first_not_of("0123456789") != std::string_view::npos)
      throw ModelFormatError("malformed term key '" + std::string(key) + "'");
    const int index = std::stoi(std::string(piece));
    if (index < 1 || index > n)
      throw ModelFormatError("index " + std::to_string(index) + " in key '" +
                             std::string(key) + "' outside 1.." +
                             std::to_string(n));
    if (index <= previous)
      throw ModelFormatError("indices in key '" + std::string(key) +
                             "' must be strictly ascending");
    previous = index;
    t.bits |= 1u << (index - 1);
    start = comma + 1;
  }
  return t;
}

AffineModel parse_model_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("malformed model JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ModelFormatError("model must be a JSON object");
  for (const auto& [k, v] : doc.items())
    if (k != "n" && k != "terms")
      throw ModelFormatError("unknown model key '" + k + "'");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw ModelFormatError("model needs an integer 'n'");
  const auto n = doc["n"].get<long long>();
  if (n < 1 || n > kMaxDimension)
    throw ModelFormatError("'n' must be in 1.." + std::to_string(kMaxDimension));
  if (!doc.contains("terms") || !doc["terms"].is_object())
    throw ModelFormatError("model needs a 'terms' object");

  std::map<SubsetId, double> coeffs;
  for (const auto& [k, v] : doc["terms"].items()) {
    if (!v.is_number())
      throw ModelFormatError("coefficient for '" + k + "' is not a number");
    const SubsetId t = parse_subset_key(k, static_cast<int>(n));
    if (!coeffs.emplace(t, v.get<double>()).second)
      throw ModelFormatError("duplicate term '" + k + "'");
  }
  try {
    return AffineModel(static_cast<int>(n), std::move(coeffs));
  } catch (const InvalidArgument& e) {
    throw ModelFormatError(e.what());
  }
}

AffineModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open model file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

std::string model_to_json(const AffineModel& model) {
  json terms = json::object();
  for (const auto& [t, a] : model.terms()) terms[t.to_string()] = a;
  return json{{"n", model.dimension()}, {"terms", terms}}.dump();
}

}  // namespace negmnom
