#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "valcalc/cli.hpp"
#include "valcalc/serialize.hpp"

using namespace valcalc;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("valcalc_cli_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("form and valuation round-trip") {
  testing::Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const ValuationRep mu = testing::random_valuation(rng, 2 + int(rng() % 3));
    const Json j = Json::parse(to_json(mu).dump());
    CHECK(valuation_from_json(j) == mu);
    CHECK(form_from_json(to_json(mu.omega)) == mu.omega);
  }
  const ValuationRep Z = z_rep(ImDirection::along(1, 2, 2));
  CHECK(valuation_from_json(Json::parse(to_json(Z).dump())) == Z);
}

TEST_CASE("index order in form JSON carries a sign") {
  const Json a = Json::parse(R"({"dim":3,"terms":[{"dx":[1,0],"dv":[],"poly":[{"exp":[0,0,1],"coeff":{"0":"1/2"}}]}]})");
  const Json b = Json::parse(R"({"dim":3,"terms":[{"dx":[0,1],"dv":[],"poly":[{"exp":[0,0,1],"coeff":{"0":"-1/2"}}]}]})");
  CHECK(form_from_json(a) == form_from_json(b));
}

TEST_CASE("body round-trip") {
  const std::vector<ConvexBody> bodies{
      Ball{{0.1, 0.2, 0.3, 0.4}, 0.7},
      make_box({0, 0, 0, 0}, {0.5, 0.1, 0.2, 0.3}),
      Simplex{{{0, 0, 0}, {1, 0, 0}, {0, 1.0 / 3.0, 0}}},
      regular_polygon({Vec{1, 0, 0, 0}, Vec{0, 0, 1, 0}}, 7, 0.3, {1, 2, 3, 4}),
  };
  for (const auto& K : bodies) {
    const Json j = Json::parse(to_json(K).dump());
    CHECK(to_json(body_from_json(j)) == to_json(K));
  }
}

TEST_CASE("parse errors carry locations") {
  try {
    form_from_json(Json::parse(R"({"dim":4,"terms":[{"dx":[0],"dv":[7],"poly":[]}]})"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/terms/0/dv/0") != std::string::npos);
  }
  CHECK_THROWS_AS(body_from_json(Json::parse(R"({"type":"ball","center":[0,0],"radius":-1})")), ParseError);
  CHECK_THROWS_AS(valuation_from_json(Json::parse(R"({"builtin":"nope"})")), ParseError);
}

TEST_CASE("commands") {
  TempDir dir;
  const auto zi = dir.write("zu_i.json", R"({"builtin":"Z","u":["1","0","0"]})");
  const auto zj = dir.write("zu_j.json", R"({"builtin":"Z","u":["0","1","0"]})");
  const auto chi = dir.write("chi.json", R"({"builtin":"chi"})");
  const auto box = dir.write("box.json", R"({"type":"box","center":[0,0,0,0],"half_extents":[0.5,0.5,0.5,0.5]})");
  const auto ball = dir.write("ball.json", R"({"type":"ball","center":[0,0,0,0],"radius":0.5})");
  const auto bad = dir.write("bad.json", R"({"type":"box","center":[0,0]})");
  const auto broken = dir.write("broken.json", R"({"type":)");

  Run r = run({"su2", "kinematic"});
  CHECK(r.code == 0);
  CHECK(r.out.find("17/4") != std::string::npos);
  CHECK(r.out.find("-3/4") != std::string::npos);
  CHECK(r.out.find("4/3*pi^-1") != std::string::npos);

  r = run({"pair", "--a", zi, "--b", zj});
  CHECK(r.code == 0);
  CHECK(r.out == "1/4\n");

  r = run({"eval", "--valuation", chi, "--body", box});
  CHECK(r.code == 0);
  CHECK(r.out == "1.000000000000\n");

  r = run({"--json", "eval", "--valuation", chi, "--body", box});
  CHECK(Json::parse(r.out)["value"] == "1.000000000000");

  r = run({"eval", "--valuation", chi, "--body", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.json") != std::string::npos);
  r = run({"eval", "--valuation", chi, "--body", broken});
  CHECK(r.code == 2);
  CHECK(r.err.find("byte") != std::string::npos);
  CHECK(run({"eval", "--valuation", chi}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);

  r = run({"su2", "gram", "--basis", "alesker"});
  CHECK(r.code == 0);
  CHECK(r.out.find("5/16") != std::string::npos);

  r = run({"klain", "--u", "1,0,0", "--plane", "1,0,0,0;0,1,0,0"});
  CHECK(r.out == "0.500000000000\n");

  r = run({"op", "--name", "lambda", "--valuation", zi});
  CHECK(r.code == 0);
  CHECK(valuation_from_json(Json::parse(r.out)) == derivation(z_rep(ImDirection::unit(1, 0, 0))));

  const auto form = dir.write("w.json", to_json(z_form(ImDirection::unit(0, 0, 1))).dump());
  r = run({"--json", "rumin", "--form", form});
  CHECK(r.code == 0);
  CHECK(form_from_json(Json::parse(r.out)["D_omega"]) == rumin_golden(ImDirection::unit(0, 0, 1)));

  r = run({"--json", "su2", "forms", "--u", "0,3/5,4/5"});
  CHECK(r.code == 0);
  CHECK(valuation_from_json(Json::parse(r.out)["valuation"]) == z_rep(ImDirection::unit(0, Rational(3, 5), Rational(4, 5))));
}

TEST_CASE("Monte Carlo command: JSON and table carry the same numbers") {
  TempDir dir;
  const auto ball = dir.write("ball.json", R"({"type":"ball","center":[0,0,0,0],"radius":0.5})");
  const auto box = dir.write("box.json", R"({"type":"box","center":[0,0,0,0],"half_extents":[0.5,0.4,0.3,0.2]})");
  const Run human = run({"verify", "mc", "--k", ball, "--l", box, "--samples", "5000", "--seed", "9"});
  const Run json = run({"--json", "--threads", "2", "verify", "mc", "--k", ball, "--l", box, "--samples", "5000", "--seed", "9"});
  REQUIRE(human.code == 0);
  REQUIRE(json.code == 0);
  const Json j = Json::parse(json.out);
  for (const char* key : {"estimate", "standard_error", "exact", "z_score"})
    CHECK(human.out.find(format_double(j[key].get<double>())) != std::string::npos);
  CHECK(human.out.find("samples         5000") != std::string::npos);
  CHECK(run({"verify", "mc", "--k", ball, "--l", box, "--samples", "10"}).code == 2);
}

TEST_CASE("non-convergence exits with 3") {
  TempDir dir;
  const auto form = dir.write("form.json",
                              R"({"dim":4,"terms":[{"dx":[0,1],"dv":[2],"poly":[{"exp":[0,0,0,1],"coeff":"1/2"}]}]})");
  CHECK(run({"rumin", "--form", form}).code == 0);
  const Run r = run({"rumin", "--form", form, "--degree-cap", "1"});
  CHECK(r.code == 3);
  CHECK(r.err.find("degree cap") != std::string::npos);
}

}
