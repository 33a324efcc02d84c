#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fglaw/io.hpp"

using fglaw::io::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = fglaw::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(FGLAW_DATA_DIR) + "/" + name; }

void expect_single_line_diagnostic(const Result& r, const std::string& kind) {
  ASSERT_FALSE(r.err.empty());
  EXPECT_EQ(r.err.find('\n'), r.err.size() - 1);
  EXPECT_EQ(json::parse(r.err)["error"], kind) << r.err;
}

}  // namespace

TEST(Cli, FglCheck) {
  const auto ok = run({"fgl", "check", data("additive.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(json::parse(ok.out)["pass"].get<bool>());

  const auto bad = run({"fgl", "check", data("broken.json")});
  EXPECT_EQ(bad.code, 1);
  const auto j = json::parse(bad.out);
  EXPECT_FALSE(j["pass"].get<bool>());
  EXPECT_EQ(j["checks"][0]["witness"]["monomial"], json::array({2}));

  EXPECT_EQ(run({"fgl", "check", "heisenberg", "--ring", "padic:3:6", "--D", "8"}).code, 0);
}

TEST(Cli, WordSeriesHeisenbergCommutator) {
  const auto r = run({"word", "series", "--word", "[x1,x2]", "--law", data("heisenberg.json"), "--format", "text"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "[1] 0\n[2] 0\n[3] X1*Y2 + 31*X2*Y1\n");
}

TEST(Cli, GroupVerbs) {
  const std::string g = data("heisenberg_group.json");
  auto result = [](const Result& r) { return json::parse(r.out)["result"]; };
  EXPECT_EQ(result(run({"group", "mul", "--group", g, "--elements", "2,4,6;2,2,0"})), json({"4", "6", "10"}));
  EXPECT_EQ(result(run({"group", "inv", "--group", g, "--elements", "2,4,6"})), json({"30", "28", "2"}));
  EXPECT_EQ(result(run({"group", "pow", "--group", g, "--elements", "2,0,0", "-e", "5"})), json({"10", "0", "0"}));
  const auto q = run({"group", "quotient", "--group", g, "--level", "3", "--list"});
  EXPECT_EQ(json::parse(q.out)["size"], 64);
  EXPECT_EQ(json::parse(q.out)["elements"].size(), 64u);
  const auto c = run({"group", "conj", "--group", g, "--elements", "2,0,0;0,2,0", "--format", "text"});
  EXPECT_NE(c.out.find("value (2,0,4)"), std::string::npos) << c.out;
}

TEST(Cli, WordAndAtlasVerbs) {
  const auto img = run({"word", "image", "--group", data("heisenberg_group.json"), "--word", "[x1,x2]",
                        "--quotient-level", "3"});
  const auto j = json::parse(img.out);
  EXPECT_EQ(j["image_size"], 2);
  EXPECT_EQ(j["marginal_size"], 16);

  const auto v = run({"atlas", "validate", data("ext_inversion_f2.json"), "--quotient-level", "3"});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_TRUE(json::parse(v.out)["pass"].get<bool>());

  const auto m = run({"atlas", "marginal", data("ext_inversion_p3.json"), "--word", "x1^2"});
  EXPECT_FALSE(json::parse(m.out)["all_constant"].get<bool>());
  const auto d = run({"atlas", "marginal", data("ext_direct_product.json"), "--word", "[x1,x2]"});
  EXPECT_TRUE(json::parse(d.out)["all_zero"].get<bool>());

  const auto w = run({"atlas", "wordmap", data("ext_inversion_p3.json"), "--word", "x1^2", "--cosets", "s"});
  EXPECT_TRUE(json::parse(w.out)["constant"].get<bool>());
}

TEST(Cli, Probe) {
  const auto r = run({"probe", "--word", "x1^2", "--extension", data("ext_inversion_p2.json"), "--lmax", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["min_l"], 1);
  EXPECT_EQ(j["levels"].size(), 2u);
  const auto none = run({"probe", "--word", "x1^2", "--extension", data("ext_inversion_p3.json"), "--lmax", "2"});
  EXPECT_TRUE(json::parse(none.out)["min_l"].is_null());
}

TEST(Cli, ErrorsMapToExitCodes) {
  auto r = run({"fgl", "check", "/no/such/file.json"});
  EXPECT_EQ(r.code, 2);
  expect_single_line_diagnostic(r, "usage");

  r = run({"fgl", "check", data("additive.json"), "--bogus"});
  EXPECT_EQ(r.code, 2);
  expect_single_line_diagnostic(r, "usage");

  r = run({"frobnicate"});
  EXPECT_EQ(r.code, 2);

  r = run({"word", "series", "--word", "x1 x2 ?", "--law", "heisenberg"});
  EXPECT_EQ(r.code, 2);
  expect_single_line_diagnostic(r, "parse");

  r = run({"group", "mul", "--law", "additive", "--elements", "1;3"});
  EXPECT_EQ(r.code, 1);  // 1 is a unit, not in the ideal
  expect_single_line_diagnostic(r, "precondition");

  r = run({"atlas", "validate", data("ext_corrupt.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("associativity"), std::string::npos);

  r = run({"group", "quotient", "--law", "additive", "--level", "6"});
  EXPECT_EQ(r.code, 0);
  setenv("FGLAW_ENUM_BOUND", "10", 1);
  r = run({"group", "quotient", "--law", "additive", "--level", "6"});
  unsetenv("FGLAW_ENUM_BOUND");
  EXPECT_EQ(r.code, 1);
  expect_single_line_diagnostic(r, "bound");

  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, OutputIsDeterministicAndReloadable) {
  const std::vector<std::string> cmd{"fgl", "transport", data("deformed.json"), "--point", "3"};
  const auto a = run(cmd), b = run(cmd);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto law = fglaw::io::fgl_from_json(json::parse(a.out));
  EXPECT_EQ(law.spec(), fglaw::RingSpec::padic(3, 3));
  EXPECT_EQ(fglaw::io::to_json(law).dump(2) + "\n", a.out);

  std::ifstream in(data("ext_inversion_p3.json"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto ext = fglaw::io::extension_from_json(json::parse(text));
  EXPECT_EQ(fglaw::io::to_json(ext).dump(2) + "\n", text);
}
