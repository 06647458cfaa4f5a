#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "xg/game.hpp"

using xg::errc;

TEST_SUITE_BEGIN("game");

TEST_CASE("construction and accessors") {
  const xg::XorGame g = xgtest::chsh();
  CHECK(g.n() == 2);
  CHECK(g.sign(0, 0) == 1);
  CHECK(g.sign(1, 1) == -1);
  CHECK(g.prob(1, 0) == 0.25);
  CHECK(g.cost(1, 1) == -0.25);
  CHECK(g.cost(0, 1) == 0.25);
  CHECK(g.signs().size() == 4);
  CHECK(g.cost_row(1)[1] == -0.25);
}

TEST_CASE("every valid game has absolute mass one") {
  for (int n : {1, 2, 3, 5, 9}) {
    const xg::XorGame g = xgtest::random_game_nonuniform(n, 100 + n);
    CHECK(xg::pi_1_norm(g) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(xg::pi_1_norm(xgtest::triangle()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("raw absolute entry sum") {
  xg::ProbMatrix raw = {{0.5, -1.5}, {2.0, 0.0}};
  CHECK(xg::pi_1_norm(raw) == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("validation report catches each defect") {
  xg::SignMatrix f = {{1, 1}, {1, -1}};
  xg::ProbMatrix pi = {{0.25, 0.25}, {0.25, 0.25}};
  CHECK(xg::validate_game(f, pi).ok);

  SUBCASE("zero is not a sign") {
    f[0][1] = 0;
    const auto rep = xg::validate_game(f, pi);
    CHECK_FALSE(rep.ok);
    CHECK(rep.violations.at(0).first == "f");
  }
  SUBCASE("negative mass") {
    pi[1][0] = -0.25;
    pi[0][0] = 0.75;
    const auto rep = xg::validate_game(f, pi);
    CHECK_FALSE(rep.ok);
    CHECK(rep.violations.at(0).first == "pi");
  }
  SUBCASE("mass sum tolerance is one part in 1e9") {
    pi[0][0] = 0.25 + 6e-10;
    CHECK(xg::validate_game(f, pi).ok);
    pi[0][0] = 0.25 + 6e-9;
    CHECK_FALSE(xg::validate_game(f, pi).ok);
  }
  SUBCASE("ragged rows") {
    f[1].push_back(1);
    CHECK_FALSE(xg::validate_game(f, pi).ok);
  }
  SUBCASE("empty game") {
    CHECK_FALSE(xg::validate_game({}, {}).ok);
  }
  SUBCASE("summary names the fields") {
    f[0][0] = 3;
    pi[1][1] = -0.1;
    const auto rep = xg::validate_game(f, pi);
    CHECK_FALSE(rep.ok);
    CHECK(rep.summary().find("f") != std::string::npos);
  }
}

TEST_CASE("build rejects what validate rejects") {
  CHECK(xgtest::thrown_code([] {
          xg::XorGame::build(2, {1, 1, 1}, std::vector<double>(4, 0.25));
        }) == errc::dimension_mismatch);
  CHECK(xgtest::thrown_code([] {
          xg::XorGame::build(2, {1, 0, 1, -1}, std::vector<double>(4, 0.25));
        }) == errc::not_a_sign);
  CHECK(xgtest::thrown_code([] {
          xg::XorGame::build(2, {1, 1, 1, -1}, {0.5, 0.5, 0.25, -0.25});
        }) == errc::not_a_distribution);
  CHECK(xgtest::thrown_code([] {
          xg::XorGame::build(2, {1, 1, 1, -1}, std::vector<double>(4, 0.3));
        }) == errc::not_a_distribution);
}

TEST_CASE("flip_entry is a sign involution that keeps pi") {
  const xg::XorGame g = xgtest::chsh();
  const xg::XorGame h = xg::flip_entry(g, 0, 1);
  CHECK(h.sign(0, 1) == -1);
  CHECK(h.cost(0, 1) == -0.25);
  CHECK(h.prob(0, 1) == g.prob(0, 1));
  CHECK(h.sign(0, 0) == g.sign(0, 0));
  const xg::XorGame back = xg::flip_entry(h, 0, 1);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      CHECK(back.sign(x, y) == g.sign(x, y));
      CHECK(back.cost(x, y) == g.cost(x, y));
    }
  CHECK(xgtest::thrown_code([&] { xg::flip_entry(g, 2, 0); }) == errc::index_out_of_range);
  CHECK(xgtest::thrown_code([&] { xg::flip_entry(g, 0, -1); }) == errc::index_out_of_range);
}

TEST_CASE("json round trip preserves the game bit for bit") {
  const xg::XorGame g = xgtest::random_game_nonuniform(5, 42);
  nlohmann::json j = g;
  const xg::XorGame h = xg::game_from_json(j);
  CHECK(h.n() == g.n());
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y) {
      CHECK(h.sign(x, y) == g.sign(x, y));
      CHECK(h.prob(x, y) == g.prob(x, y));
    }
  nlohmann::json j2 = h;
  CHECK(j.dump() == j2.dump());
}

TEST_CASE("file round trip and io failure modes") {
  const std::string path = xgtest::tmp_path("game_roundtrip.json");
  const xg::XorGame g = xgtest::triangle();
  xg::save_game(g, path);
  const xg::XorGame h = xg::load_game(path);
  CHECK(h.n() == 3);
  CHECK(h.cost(2, 2) == g.cost(2, 2));
  std::remove(path.c_str());

  CHECK(xgtest::thrown_code([] { xg::load_game("/nonexistent/game.json"); }) == errc::io_error);

  const std::string bad = xgtest::tmp_path("game_bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK(xgtest::thrown_code([&] { xg::load_game(bad); }) == errc::io_error);
  std::ofstream(bad) << "{\"n\": 2, \"f\": [[1,1],[1,-1]]}";
  CHECK(xgtest::thrown_code([&] { xg::load_game(bad); }) == errc::io_error);
  std::ofstream(bad) << "{\"n\": 3, \"f\": [[1,1],[1,-1]], \"pi\": [[0.25,0.25],[0.25,0.25]]}";
  CHECK(xgtest::thrown_code([&] { xg::load_game(bad); }) == errc::dimension_mismatch);
  std::remove(bad.c_str());
}

TEST_SUITE_END();
