#include <doctest.h>

#include "negmnom/model_io.hpp"

using namespace negmnom;

TEST_CASE("parse_model_json accepts a well formed model") {
  const auto m = parse_model_json(R"({"n": 3, "terms": {"1": 1.0, "2,3": -0.25, "1,2,3": 2}})");
  CHECK(m.dimension() == 3);
  CHECK(m.coeff(SubsetId::of({1})) == 1.0);
  CHECK(m.coeff(SubsetId::of({2, 3})) == -0.25);
  CHECK(m.coeff(SubsetId::of({1, 2, 3})) == 2.0);
  CHECK(m.coeff(SubsetId::of({2})) == 0.0);

  const auto empty = parse_model_json(R"({"n": 2, "terms": {}})");
  CHECK(empty.terms().empty());
}

TEST_CASE("parse_subset_key") {
  CHECK(parse_subset_key("1", 3) == SubsetId::of({1}));
  CHECK(parse_subset_key("1,3", 3) == SubsetId::of({1, 3}));
  CHECK_THROWS_AS(parse_subset_key("", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("0", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("4", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("2,1", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("1,1", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("1,,2", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("1,", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key(" 1", 3), ModelFormatError);
  CHECK_THROWS_AS(parse_subset_key("a", 3), ModelFormatError);
}

TEST_CASE("parse_model_json rejects malformed input") {
  const char* bad[] = {
      "",
      "not json",
      "[1, 2]",
      R"({"terms": {"1": 1}})",
      R"({"n": 2})",
      R"({"n": 2.5, "terms": {}})",
      R"({"n": "2", "terms": {}})",
      R"({"n": 0, "terms": {}})",
      R"({"n": 25, "terms": {}})",
      R"({"n": 2, "terms": []})",
      R"({"n": 2, "terms": {"1": "x"}})",
      R"({"n": 2, "terms": {"1": null}})",
      R"({"n": 2, "terms": {"": 1}})",
      R"({"n": 2, "terms": {"3": 1}})",
      R"({"n": 2, "terms": {"2,1": 1}})",
      R"({"n": 2, "terms": {"1": 1}, "extra": 0})",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_model_json(text), ModelFormatError);
  }
}

TEST_CASE("load_model reports missing files") {
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}

TEST_CASE("model_to_json round trips exactly") {
  const AffineModel m(3, {{SubsetId::of({1}), 0.1},
                          {SubsetId::of({1, 3}), -1.0 / 3},
                          {SubsetId::of({2, 3}), 1e-300},
                          {SubsetId::of({1, 2, 3}), 12345.678901234567}});
  const auto back = parse_model_json(model_to_json(m));
  CHECK(back.dimension() == 3);
  CHECK(back.terms() == m.terms());
}
