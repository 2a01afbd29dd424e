#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "negmnom/cli.hpp"

namespace fs = std::filesystem;
using negmnom::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::path(NEGMNOM_TEST_TMP) / name;
  std::ofstream(p) << text;
  return p;
}

std::string ex1() { return write_file("cli_ex1.json", R"({"n":2,"terms":{"1":1,"2":1,"1,2":-0.5}})").string(); }
std::string ex2() {
  return write_file("cli_ex2.json",
                    R"({"n":3,"terms":{"1":1,"2":1,"3":1,"1,2":1,"1,3":1,"2,3":1,"1,2,3":0}})")
      .string();
}
std::string bad_id() { return write_file("cli_bad.json", R"({"n":2,"terms":{"1":1,"2":1,"1,2":-1.5}})").string(); }

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::vector<double> split_numbers(const std::string& line) {
  std::vector<double> v;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) v.push_back(std::stod(cell));
  return v;
}

}  // namespace

TEST_CASE("format_double round trips") {
  for (double v : {0.1, -1.0 / 3, 1e-300, 6.02214076e23, 0.0}) CHECK(std::stod(negmnom::cli::format_double(v)) == v);
  CHECK(negmnom::cli::format_double(0.5) == "0.5");
}

TEST_CASE("check-id") {
  const auto ok = call({"check-id", "--model", ex1()});
  CHECK(ok.code == 0);
  CHECK(ok.out == "T\tb_T\n1\t1\n2\t1\n1,2\t0.5\naccepted\n");

  const auto no = call({"check-id", "--model", bad_id()});
  CHECK(no.code == 1);
  CHECK(no.out.find("rejected witness={1,2} b=-0.5") != std::string::npos);

  const auto json = call({"check-id", "--model", ex1(), "--json"});
  CHECK(json.code == 0);
  CHECK(json.out.find("\"verdict\":\"accepted\"") != std::string::npos);

  CHECK(call({"bt", "--model", bad_id()}).code == 0);
}

TEST_CASE("expand") {
  const auto r = call({"expand", "--model", ex1(), "--lambda", "0.5", "--degree", "2", "--csv"});
  CHECK(r.code == 0);
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 7);
  CHECK(lines[0] == "alpha1,alpha2,c,zero");
  CHECK(lines[1] == "0,0,1,0");
  CHECK(lines[5] == "1,1,0.5,0");

  // P depends on z1 only, so every coefficient with alpha2 > 0 is an exact zero.
  const auto path = write_file("cli_z1.json", R"({"n":2,"terms":{"1":0.5}})");
  const auto z = call({"expand", "--model", path.string(), "--lambda", "1", "--degree", "2"});
  CHECK(z.code == 0);
  CHECK(z.out.find("(1,0)\t0.5\n") != std::string::npos);
  CHECK(z.out.find("(0,1)\t0\tzero\n") != std::string::npos);
  CHECK(z.out.find("(1,1)\t0\tzero\n") != std::string::npos);
}

TEST_CASE("domain contains") {
  const auto in = call({"domain", "contains", "--model", ex1(), "--theta",
                        "-0.6931471805599453,-0.6931471805599453"});
  CHECK(in.code == 0);
  CHECK(in.out.rfind("inside ", 0) == 0);

  const auto out = call({"domain-contains", "--model", ex1(), "--theta", "0,0"});
  CHECK(out.code == 1);
  CHECK(out.out.rfind("outside ", 0) == 0);

  // A boundary point reported by the boundary command classifies as boundary.
  const auto b = call({"domain", "contains", "--model", ex1(), "--theta",
                       "-0.53479999673957035,-0.53479999673957035"});
  CHECK(b.code == 1);
  CHECK(b.out.rfind("boundary ", 0) == 0);

  CHECK(call({"domain", "contains", "--model", ex1(), "--theta", "0"}).code == 2);
  CHECK(call({"domain", "contains", "--model", ex1(), "--theta", "0,x"}).code == 2);
}

TEST_CASE("domain boundary CSV") {
  const auto r = call({"domain", "boundary", "--model", ex1(), "--range", "-2:2:0.25"});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const auto lines = split_lines(r.out);
  REQUIRE(lines.size() == 18);
  CHECK(lines[0] == "s1,theta1,theta2,check_A");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto v = split_numbers(lines[i]);
    REQUIRE(v.size() == 4);
    CHECK(std::abs(v[3]) <= 1e-10);
    CHECK(v[1] - v[2] == doctest::Approx(2 * v[0]).epsilon(1e-12));
  }

  const fs::path dst = fs::path(NEGMNOM_TEST_TMP) / "cli_ex2_boundary.csv";
  const auto r3 = call({"domain-boundary", "--model", ex2(), "--range", "-1:1:0.5", "--range2",
                        "-1:1:0.5", "--threads", "3", "--out", dst.string()});
  CHECK(r3.code == 0);
  std::ifstream in(dst);
  std::stringstream text;
  text << in.rdbuf();
  const auto rows = split_lines(text.str());
  REQUIRE(rows.size() == 26);
  CHECK(rows[0] == "s1,s2,theta1,theta2,theta3,check_A");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split_numbers(rows[i])[5] <= 1e-10);

  CHECK(call({"domain", "boundary", "--model", ex1(), "--range", "1:0:0.1"}).code == 2);
}

TEST_CASE("pgf, pmf and sample") {
  const auto pgf = call({"pgf", "--model", ex1(), "--a", "0.5,0.5"});
  CHECK(pgf.code == 0);
  CHECK(pgf.out == "T\tcoefficient\n{}\t8\n1\t-4\n2\t-4\n1,2\t1\n");

  const auto pmf = call({"pmf", "--model", ex1(), "--a", "0.5,0.5", "--lambda", "1", "--degree", "2"});
  CHECK(pmf.code == 0);
  CHECK(pmf.out.find("(0,0)\t0.125\n") != std::string::npos);
  CHECK(pmf.out.find("tail_mass=") != std::string::npos);

  const auto outside = call({"pmf", "--model", ex1(), "--a", "1,1", "--lambda", "1", "--degree", "2"});
  CHECK(outside.code == 1);
  CHECK(outside.out.empty());

  const std::vector<std::string> args{"sample", "--model", ex1(), "--a", "0.5,0.5", "--lambda", "2",
                                      "--count", "200", "--seed", "11"};
  const auto s1 = call(args);
  const auto s2 = call(args);
  CHECK(s1.code == 0);
  CHECK(s1.out == s2.out);
  CHECK(split_lines(s1.out).size() == 201);
}

TEST_CASE("usage and input errors exit 2 with one line") {
  const std::vector<std::vector<std::string>> cases{
      {},
      {"bogus"},
      {"check-id"},
      {"check-id", "--model", ex1(), "--frobnicate"},
      {"check-id", "--model", "/nonexistent.json"},
      {"check-id", "--model", write_file("cli_broken.json", "{\"n\": 2, ").string()},
      {"expand", "--model", ex1(), "--lambda", "-1", "--degree", "3"},
      {"pmf", "--model", ex1(), "--a", "0.5,0.5", "--lambda", "1", "--degree", "2", "--csv", "--json"},
  };
  for (const auto& args : cases) {
    const auto r = call(args);
    CAPTURE(r.err);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(split_lines(r.err).size() == 1);
  }
}

TEST_CASE("the installed binary is byte-identical across runs") {
  const std::string cmd = std::string("\"") + NEGMNOM_CLI_PATH + "\" expand --model " + ex2() +
                          " --lambda 1.5 --degree 6 --json";
  auto capture = [&] {
    std::string text;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    for (std::size_t got; (got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) text.append(buf.data(), got);
    CHECK(pclose(pipe) == 0);
    return text;
  };
  const auto first = capture();
  CHECK(!first.empty());
  CHECK(first == capture());
  CHECK(first == call({"expand", "--model", ex2(), "--lambda", "1.5", "--degree", "6", "--json"}).out);
}
