#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <sstream>

#include "blcp/curve_table.hpp"

using namespace blcp;

namespace {

CurveTable sample_table() {
  CurveTable t({"x", "y", "std_error"}, {"series", "status"});
  t.metadata["tool"] = "blcp";
  t.metadata["seed"] = 7;
  t.add_row({"analytic", "ok"}, {0.0, 0.125, std::numeric_limits<double>::quiet_NaN()});
  t.add_row({"mc, \"quoted\"", "DIVERGENT"}, {1.0 / 3.0, std::numeric_limits<double>::infinity(), 1e-300});
  t.add_row({"line\nbreak", ""}, {-2.5e-17, -std::numeric_limits<double>::infinity(), 0.1});
  return t;
}

}  // namespace

TEST_CASE("CSV round trip is exact") {
  const auto t = sample_table();
  const std::string csv = t.to_string(OutputFormat::kCsv);
  CHECK(csv.rfind("# {", 0) == 0);
  std::istringstream in(csv);
  const auto back = CurveTable::from_csv(in, {"series", "status"});
  CHECK(back == t);
  CHECK(back.to_string(OutputFormat::kCsv) == csv);
  CHECK(back.numbers("x")[1] == 1.0 / 3.0);
  CHECK(std::isnan(back.numbers("std_error")[0]));
  CHECK(back.strings("series")[1] == "mc, \"quoted\"");
  CHECK(back.strings("series")[2] == "line\nbreak");
}

TEST_CASE("JSON round trip is exact") {
  const auto t = sample_table();
  const auto j = t.to_json();
  CHECK(j.at("schema") == kCurveTableSchema);
  CHECK(j.at("columns").size() == 5);
  CHECK(j.at("rows").at(1).at(3) == "inf");
  const auto back = CurveTable::from_json(nlohmann::ordered_json::parse(t.to_string(OutputFormat::kJson)));
  CHECK(back == t);
  CHECK(back.to_string(OutputFormat::kJson) == t.to_string(OutputFormat::kJson));
}

TEST_CASE("malformed tables are rejected") {
  CurveTable t({"x"}, {"series"});
  CHECK_THROWS_AS(t.add_row({}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_row({"a"}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(t.add_column("x", false), std::invalid_argument);
  t.add_row({"a"}, {1.0});
  CHECK_THROWS_AS(t.add_column("y", false), std::logic_error);
  CHECK_THROWS_AS(t.numbers("series"), std::invalid_argument);
  CHECK_THROWS_AS(t.numbers("nope"), std::invalid_argument);

  std::istringstream ragged("x,y\n1,2\n3\n");
  CHECK_THROWS(CurveTable::from_csv(ragged));
  std::istringstream bad_number("x\n1.5abc\n");
  CHECK_THROWS(CurveTable::from_csv(bad_number));
  CHECK_THROWS(CurveTable::from_json(nlohmann::ordered_json{{"schema", "other"}}));
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
  CHECK(parse_format("json") == OutputFormat::kJson);
}
