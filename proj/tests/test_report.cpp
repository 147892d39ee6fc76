#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dlcfar/report.hpp"
#include "dlcfar/types.hpp"

using namespace dlcfar;

TEST_CASE("csv escaping and layout") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  Curve c;
  c.add(1.0, 0.5, 0.4, 0.6);
  CHECK(curve_to_csv(c) == "x,y,ci_lo,ci_hi\r\n1,0.5,0.40000000000000002,0.59999999999999998\r\n");
  CHECK(table_to_csv({"a", "b"}, {{"1", "x,y"}}) == "a,b\r\n1,\"x,y\"\r\n");
  CHECK_THROWS_AS(table_to_csv({"a", "b"}, {{"1"}}), DomainError);
  CHECK(std::stod(format_number(0.1)) == 0.1);
}

TEST_CASE("fnv1a digest") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
}

TEST_CASE("manifest lists outputs once") {
  const auto dir = std::filesystem::temp_directory_path() / "dlcfar_report_test";
  std::filesystem::remove_all(dir);
  RunManifest m("dlcfar x", {{"k", 1}}, 42);
  m.add_output("a.csv");
  m.add_output("a.csv");
  m.add_tag("np");
  m.add_tag("np");
  const auto j = m.to_json();
  CHECK(j["outputs"].size() == 1);
  CHECK(j["detectors"].size() == 1);
  CHECK(j["seed"] == 42);
  CHECK(j.contains("git_describe"));
  CHECK(j["config_digest"].get<std::string>().size() == 16);
  m.write((dir / "sub" / "manifest.json").string());
  std::ifstream in(dir / "sub" / "manifest.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(nlohmann::json::parse(ss.str())["command_line"] == "dlcfar x");
  std::filesystem::remove_all(dir);
}
