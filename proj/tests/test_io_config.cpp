#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "gsqg/config.hpp"
#include "gsqg/errors.hpp"
#include "gsqg/io.hpp"
#include "support.hpp"

using namespace gsqg;
using namespace testing;

TEST_CASE("scenario YAML") {
  const auto c = parse_config(R"(
alpha: 0.25
epsilon: 0.05
N: 128
t_end: 0.5
dt: 0.001
separate_touching: false
patches:
  - kind: ellipse
    params: {a: 2.0, b: 1.0, rotation: 0.3, center: [0.5, -1.0]}
    strength: -2.0
  - kind: fourier
    params: {r0: 1.0, cos: [0.0, 0.1], sin: [0.05]}
)");
  CHECK(c.alpha == 0.25);
  CHECK(*c.epsilon == 0.05);
  CHECK(c.N == 128);
  CHECK(c.t_end == 0.5);
  CHECK(*c.dt == 0.001);
  CHECK_FALSE(c.separate_touching);
  CHECK_FALSE(c.ceiling_L.has_value());
  REQUIRE(c.patches.size() == 2);
  CHECK(c.patches[0].kind == ShapeKind::Ellipse);
  CHECK(c.patches[0].params.rotation == 0.3);
  CHECK(c.patches[0].params.center == Vec2{0.5, -1.0});
  CHECK(c.patches[0].strength == -2.0);
  CHECK(c.patches[1].params.cos_coef == std::vector<double>{0.0, 0.1});
  CHECK(c.patches[1].strength == 1.0);

  const auto d = parse_config(R"(
presets:
  doubly_odd: {enabled: true, candidate: true, axis_gap: 0.4}
)");
  CHECK(d.doubly_odd);
  CHECK(d.candidate);
  CHECK(d.candidate_params.axis_gap == 0.4);
  CHECK(build_family(d).size() == 4);
}

TEST_CASE("scenario YAML errors") {
  CHECK_THROWS_AS(parse_config("alpah: 0.2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("patches:\n  - kind: circle\n    params: {radius: 1, a: 2}\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("patches:\n  - kind: hexagon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N: many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("patches: 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("alpha: [1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("presets:\n  doubly_odd: {radius: 1, size: 2}\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/scenario.yaml"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("cfl: 0.5\nsteps: 10\n"), doctest::Contains("steps"), ConfigError);
}

TEST_CASE("shipped scenarios parse and validate") {
  for (const auto& f : std::filesystem::directory_iterator(GSQG_SCENARIO_DIR)) {
    INFO(f.path().string());
    const auto c = load_config(f.path().string());
    CHECK_NOTHROW(validate(c));
    CHECK(build_family(c).size() >= 1);
  }
}

TEST_CASE("curve JSON round trip") {
  std::mt19937_64 rng(3);
  const auto c = random_curve(rng, 128);
  const auto back = curve_from_json(curve_to_json(c));
  REQUIRE(back.size() == c.size());
  for (std::size_t j = 0; j < c.size(); ++j) CHECK(back[j] == c[j]);
  CHECK(back.param_kind() == ParamKind::ConstantSpeed);
  CHECK(back.has_geometry());

  const auto path = (std::filesystem::temp_directory_path() / "gsqg_curve_roundtrip.json").string();
  write_curve(path, c);
  CHECK(read_curve(path).nodes()[5] == c[5]);
  std::remove(path.c_str());

  nlohmann::json sq = {{"nodes", nlohmann::json::array()}};
  for (int i = 0; i < 16; ++i) {
    const int side = i / 4, k = i % 4;
    const double t = -1.0 + 0.5 * k;
    const double x[] = {1.0, -t, -1.0, t}, y[] = {t, 1.0, -t, -1.0};
    sq["nodes"].push_back({x[side], y[side]});
  }
  const auto g = curve_from_json(sq);
  CHECK(g.param_kind() == ParamKind::General);
  CHECK_FALSE(g.has_geometry());
  CHECK(g.size() == 16);
  CHECK(polygon_area(g) == doctest::Approx(4.0));
  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"nodes": [[0,0],[1,0],[1,1],[0,1]]})")),
                  DegenerateCurve);

  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"points": []})")), InvalidArgument);
  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"nodes": [[0,0,1]]})")), InvalidArgument);
  CHECK_THROWS_AS(curve_from_json(nlohmann::json::parse(R"({"nodes": [[0,0],[1,0],[0,1]], "closed": false})")),
                  InvalidArgument);
  CHECK_THROWS_AS(read_curve("/nonexistent/curve.json"), InvalidArgument);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(i % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("svg output") {
  const auto f = family({{circle(1.0, 64), 1.0}, {circle(0.5, 64, {3.0, 0.0}), -1.0}});
  const auto vp = viewport_for(f);
  CHECK(vp.xmin < -1.0);
  CHECK(vp.xmax > 3.5);
  CHECK(vp.ymin < -1.0);
  CHECK(vp.ymax > 1.0);
  const auto s = svg_frame(f, vp, 0.25);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("t = 0.25") != std::string::npos);
  CHECK(s.find("#b2182b") != std::string::npos);
  CHECK(s.find("#2166ac") != std::string::npos);
  const auto p = svg_path(f[0].curve, vp, "black");
  CHECK(p.find('Z') != std::string::npos);
}
