#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "culift/io.hpp"

using namespace culift;
using nlohmann::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "culift_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("scalars") {
  CHECK(io::complex_from_json(io::to_json(Complex(0.25, -3.5))) == Complex(0.25, -3.5));
  CHECK(io::real_to_json(INFINITY) == "inf");
  CHECK(std::isinf(io::real_from_json("inf")));
  CHECK(io::real_from_json(json(1.5)) == 1.5);
  CHECK_THROWS_AS(io::real_from_json("nan"), std::invalid_argument);
  CHECK_THROWS_AS(io::complex_from_json(json::array({1})), std::invalid_argument);
  CHECK_THROWS_AS(io::complex_from_json(json("x")), std::invalid_argument);
}

TEST_CASE("region and ball round trip") {
  auto r = Region::disk({0.1, -0.2}, 0.5, 0.1);
  auto back = io::region_from_json(io::to_json(*r));
  CHECK(*back == *r);
  CHECK(back->resolution() == r->resolution());
  CHECK_THROWS_AS(io::region_from_json(json{{"points", json::array()}}), std::invalid_argument);

  const Ball b{{0.3, 0.4}, 0.7};
  const auto bb = io::ball_from_json(io::to_json(b));
  CHECK(bb.center == b.center);
  CHECK(bb.radius == b.radius);
}

TEST_CASE("lsc round trip") {
  auto r = Region::segment({0, 0}, {1, 0}, 8);
  LscFn f(r, {0, 1, 0, 4, ExtNat::infinity(), 0, 2, 0});
  const auto j = io::to_json(f);
  CHECK(j.size() == 4);
  CHECK(j.at("4") == "inf");
  CHECK(io::lsc_from_json(r, j) == f);
  CHECK_THROWS_AS(io::lsc_from_json(r, json{{"99", 1}}), std::invalid_argument);
  CHECK_THROWS_AS(io::lsc_from_json(r, json{{"1", -1}}), std::invalid_argument);
  CHECK_THROWS_AS(io::lsc_from_json(r, json{{"1x", 1}}), std::invalid_argument);
}

TEST_CASE("morphism round trip") {
  auto r = Region::segment({0, 0}, {1, 0}, 11);
  RankMeasure alpha(r, 5, {{{0.1, 0}, 2}, {{0.9, 0}, 3}});
  const auto back = io::morphism_from_json(io::to_json(alpha), r);
  CHECK(same_multiset(back, alpha, 0.0));
  CHECK(back.target_dim() == 5);

  const auto embedded = io::morphism_from_json(io::to_json(alpha, true));
  CHECK(*embedded.region() == *r);
  CHECK(same_multiset(embedded, alpha, 0.0));

  CHECK_THROWS_AS(io::morphism_from_json(io::to_json(alpha)), std::invalid_argument);  // no region anywhere
  CHECK_THROWS_AS(io::morphism_from_json(json{{"n", 1}}, r), std::invalid_argument);
  CHECK_THROWS_AS(io::morphism_from_json(json::parse(R"({"n": 1, "atoms": [{"z": [0, 0], "m": -1}]})"), r),
                  std::invalid_argument);
}

TEST_CASE("matrix round trip") {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> u(-1, 1);
  CMatrix m(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index k = 0; k < 3; ++k) m(i, k) = {u(g), u(g)};
  CHECK(io::matrix_from_json(io::to_json(m)) == m);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"n": 2, "re": [[1]], "im": [[0]]})")), std::invalid_argument);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"n": 0, "re": [], "im": []})")), std::invalid_argument);
}

TEST_CASE("results") {
  auto r = Region::segment({0, 0}, {1, 0}, 11);
  RankMeasure a(r, 2, {{{0, 0}, 2}});
  const auto j = io::to_json(d_cu(a, a));
  CHECK(j.at("value") == 0.0);
  CHECK(j.at("pairing").size() == 1);
  RankMeasure c(r, 2, {{{0, 0}, 1}});
  const auto k = io::to_json(bottleneck_matching(a.atoms(), c.atoms()));
  CHECK(k.at("value") == "inf");
}

TEST_CASE("files") {
  const auto p = scratch("x.json");
  io::write_file(p, json{{"a", 1}});
  CHECK(io::read_file(p) == json{{"a", 1}});
  std::ifstream in(p);
  std::string text((std::istreambuf_iterator<char>(in)), {});
  CHECK(text.back() == '\n');

  CHECK_THROWS_AS(io::read_file(scratch("missing.json")), std::runtime_error);
  {
    std::ofstream bad(scratch("bad.json"));
    bad << "{ not json";
  }
  CHECK_THROWS_AS(io::read_file(scratch("bad.json")), std::invalid_argument);
  // a directory cannot be opened as a file
  CHECK_THROWS(io::write_file(std::filesystem::temp_directory_path(), json{}));
}
