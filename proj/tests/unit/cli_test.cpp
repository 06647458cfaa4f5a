#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "xg/game.hpp"
#include "xgcli/commands.hpp"

using xg::errc;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string save_temp_game(const xg::XorGame& game, const std::string& name) {
  const std::string path = xgtest::tmp_path(name);
  xg::save_game(game, path);
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("solve reports exact values and the sandwich") {
  const std::string path = save_temp_game(xgtest::chsh(), "cli_chsh.json");
  xg::cli::SolveConfig cfg;
  cfg.game_path = path;
  cfg.cs = {1, 0, 1};
  cfg.out = xgtest::tmp_path("cli_solve_out.json");

  const nlohmann::json rep = xg::cli::cmd_solve(cfg);
  CHECK(rep["method"] == "exact");
  CHECK(rep["is_exact"] == true);
  CHECK(rep["omega"]["lower"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep["omega"]["lower"] == rep["omega"]["upper"]);
  CHECK(rep["one_way"].size() == 2);  // duplicate budgets collapse
  CHECK(rep["one_way"]["0"]["lower"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rep["one_way"]["1"]["lower"].get<double>() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep["sandwich"]["1"]["two_way_lower"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rep["sandwich"]["1"]["two_way_upper"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-15));

  // the file on disk carries the same report
  std::ifstream in(cfg.out);
  nlohmann::json disk;
  in >> disk;
  CHECK(disk == rep);
  std::remove(cfg.out.c_str());
  std::remove(path.c_str());
}

TEST_CASE("solve validates its inputs") {
  xg::cli::SolveConfig cfg;
  cfg.game_path = "/nonexistent/game.json";
  CHECK(xgtest::thrown_code([&] { xg::cli::cmd_solve(cfg); }) == errc::io_error);

  const std::string path = save_temp_game(xgtest::chsh(), "cli_chsh2.json");
  cfg.game_path = path;
  cfg.cs = {-1};
  CHECK(xgtest::thrown_code([&] { xg::cli::cmd_solve(cfg); }) == errc::bad_argument);
  cfg.cs = {1};
  cfg.method = "sideways";
  CHECK(xgtest::thrown_code([&] { xg::cli::cmd_solve(cfg); }) == errc::bad_argument);
  cfg.method = "heuristic";
  CHECK(xgtest::thrown_code([&] { xg::cli::cmd_solve(cfg); }) == errc::bad_argument);
  std::remove(path.c_str());
}

TEST_CASE("heuristic solve brackets instead of pinning") {
  const std::string path = save_temp_game(xgtest::random_game(9, 41), "cli_heur.json");
  xg::cli::SolveConfig cfg;
  cfg.game_path = path;
  cfg.method = "heuristic";
  cfg.has_seed = true;
  cfg.seed = 5;
  cfg.cs = {1};
  const nlohmann::json rep = xg::cli::cmd_solve(cfg);
  CHECK(rep["is_exact"] == false);
  CHECK(rep["omega"]["upper"].get<double>() == 1.0);
  CHECK(rep["omega"]["lower"].get<double>() <= 1.0);
  CHECK(rep["one_way"]["1"]["lower"].get<double>() >=
        rep["omega"]["lower"].get<double>() - 1e-12);
  CHECK(rep["sandwich"]["1"]["two_way_upper"].get<double>() == 1.0);

  // exact on the same game dominates the heuristic floor
  xg::cli::SolveConfig ex = cfg;
  ex.method = "exact";
  const nlohmann::json exact = xg::cli::cmd_solve(ex);
  CHECK(exact["omega"]["lower"].get<double>() >= rep["omega"]["lower"].get<double>() - 1e-12);
  std::remove(path.c_str());
}

TEST_CASE("generators write loadable games deterministically") {
  SUBCASE("full random square") {
    xg::cli::GenerateConfig cfg;
    cfg.kind = "chevet";
    cfg.n = 7;
    cfg.seed = 3;
    cfg.out = xgtest::tmp_path("cli_gen_a.json");
    const nlohmann::json rep = xg::cli::cmd_generate(cfg);
    CHECK(rep["path"] == cfg.out);
    const xg::XorGame g = xg::load_game(cfg.out);
    CHECK(g.n() == 7);

    xg::cli::GenerateConfig cfg2 = cfg;
    cfg2.out = xgtest::tmp_path("cli_gen_b.json");
    xg::cli::cmd_generate(cfg2);
    CHECK(slurp(cfg.out) == slurp(cfg2.out));
    std::remove(cfg.out.c_str());
    std::remove(cfg2.out.c_str());
  }
  SUBCASE("block game keeps its support") {
    xg::cli::GenerateConfig cfg;
    cfg.kind = "chevet-block";
    cfg.n = 8;
    cfg.c = 1;
    cfg.seed = 4;
    cfg.out = xgtest::tmp_path("cli_gen_block.json");
    xg::cli::cmd_generate(cfg);
    const xg::XorGame g = xg::load_game(cfg.out);
    CHECK(g.prob(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.prob(5, 5) == 0.0);
    std::remove(cfg.out.c_str());
  }
  SUBCASE("interval-certified game with sidecar report") {
    xg::cli::GenerateConfig cfg;
    cfg.kind = "levi";
    cfg.delta = 0.5;
    cfg.t = 2;
    cfg.epsilon = 0.5;  // k = 8
    cfg.rows = 64;
    cfg.samples = 40;
    cfg.seed = 9;
    cfg.out = xgtest::tmp_path("cli_gen_levi.json");
    const nlohmann::json rep = xg::cli::cmd_generate(cfg);
    CHECK_FALSE(rep.contains("game"));
    CHECK(rep["params"]["k"] == 8);
    CHECK(rep["report_path"] == cfg.out + ".report.json");
    const xg::XorGame g = xg::load_game(cfg.out);
    CHECK(g.n() == 64);
    std::ifstream in(cfg.out + ".report.json");
    nlohmann::json side;
    in >> side;
    CHECK(side["params"]["k"] == 8);
    CHECK(side["game"]["n"] == 64);
    std::remove(cfg.out.c_str());
    std::remove((cfg.out + ".report.json").c_str());
  }
  SUBCASE("unknown kind") {
    xg::cli::GenerateConfig cfg;
    cfg.kind = "magic";
    cfg.out = xgtest::tmp_path("cli_gen_bad.json");
    CHECK(xgtest::thrown_code([&] { xg::cli::cmd_generate(cfg); }) == errc::bad_argument);
  }
}

TEST_CASE("concentration experiment emits a self-consistent table") {
  xg::cli::ConcentrationConfig cfg;
  cfg.n = 6;
  cfg.samples = 100;
  cfg.rs = {0.0, 0.1, 0.3};
  cfg.seed = 12;
  cfg.out = xgtest::tmp_path("cli_conc.csv");
  cfg.plot = xgtest::tmp_path("cli_conc_plot.py");

  const std::string csv = xg::cli::cmd_experiment_concentration(cfg);
  CHECK(csv == slurp(cfg.out));
  const auto rows = parse_csv(csv);
  CHECK(rows[0] == std::vector<std::string>{"kind", "index", "r", "value", "bound"});

  double median = -1.0, lo = 2.0, hi = -1.0;
  int samples = 0;
  std::vector<std::pair<double, double>> tails;  // (r, tail) plus bound check
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row[0] == "median") median = std::stod(row[3]);
    if (row[0] == "sample") {
      ++samples;
      const double v = std::stod(row[3]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (row[0] == "tail") {
      const double r = std::stod(row[2]);
      const double tail = std::stod(row[3]);
      const double bound = std::stod(row[4]);
      CHECK(tail >= 0.0);
      CHECK(tail <= 1.0);
      CHECK(bound == doctest::Approx(2.0 * std::exp(-36.0 * r * r / 2.0)).epsilon(1e-12));
      tails.emplace_back(r, tail);
    }
  }
  CHECK(samples == 100);
  CHECK(median >= lo);
  CHECK(median <= hi);
  REQUIRE(tails.size() == 3);
  CHECK(tails[0].second == 1.0);  // everything deviates by at least zero
  CHECK(tails[2].second <= tails[1].second);

  const std::string script = slurp(cfg.plot);
  CHECK(script.find("matplotlib") != std::string::npos);
  CHECK(script.find(cfg.out) != std::string::npos);
  std::remove(cfg.out.c_str());
  std::remove(cfg.plot.c_str());

  SUBCASE("guards") {
    cfg.samples = 10;
    CHECK(xgtest::thrown_code([&] { xg::cli::cmd_experiment_concentration(cfg); }) ==
          errc::bad_argument);
    cfg.samples = 100;
    cfg.n = 30;
    CHECK(xgtest::thrown_code([&] { xg::cli::cmd_experiment_concentration(cfg); }) ==
          errc::exact_cap_exceeded);
  }
}

TEST_CASE("tightness experiment stays inside both bounds at small scale") {
  xg::cli::TightnessConfig cfg;
  cfg.n = 8;
  cfg.games = 2;
  cfg.seed = 31;
  cfg.out = xgtest::tmp_path("cli_tight.csv");
  const std::string csv = xg::cli::cmd_experiment_tightness(cfg);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() > 1);
  CHECK(rows[0].size() == 13);
  bool saw_full = false, saw_block = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row[0] == "chevet") saw_full = true;
    if (row[0] == "chevet-block") saw_block = true;
    CHECK(row[11] == "1");  // one_way <= K_G 2^{c/2} omega
    CHECK(row[12] == "1");  // one_way >= universal floor
    const double one_way = std::stod(row[5]);
    const double omega = std::stod(row[4]);
    CHECK(one_way >= omega - 1e-12);
  }
  CHECK(saw_full);
  CHECK(saw_block);

  // identical output no matter how many threads run the sweep
  xg::cli::TightnessConfig threaded = cfg;
  threaded.threads = 3;
  CHECK(xg::cli::cmd_experiment_tightness(threaded) == csv);
  std::remove(cfg.out.c_str());
}

TEST_CASE("mean maximum experiment stays under the ceiling") {
  xg::cli::ChevetConfig cfg;
  cfg.ns = {6, 9};
  cfg.samples = 100;
  cfg.seed = 8;
  cfg.out = xgtest::tmp_path("cli_chevet.csv");
  const std::string csv = xg::cli::cmd_experiment_chevet(cfg);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double mean = std::stod(rows[i][2]);
    const double bound = std::stod(rows[i][4]);
    const double margin = std::stod(rows[i][5]);
    CHECK(mean <= bound);
    CHECK(margin == doctest::Approx(bound - mean).epsilon(1e-12));
    // crude sanity: the scaled mean maximum is at least the all-ones value n
    CHECK(mean >= std::stod(rows[i][0]));
  }
  std::remove(cfg.out.c_str());
}

TEST_CASE("the interval pipeline certifies the planted value at small scale") {
  xg::cli::BellConfig cfg;
  cfg.delta = 0.5;
  cfg.bits = 0;  // t = 2
  cfg.epsilon = 0.5;
  cfg.rows = 256;
  cfg.samples = 100;
  cfg.restarts = 2;
  cfg.seed = 2;
  const nlohmann::json rep = xg::cli::cmd_experiment_bell(cfg);
  CHECK(rep["params"]["k"] == 8);
  CHECK(rep["t"] == 2);
  CHECK(rep["widen_ratio"].get<double>() >= 1.0);
  const double lo = rep["omega_interval"][0].get<double>();
  const double hi = rep["omega_interval"][1].get<double>();
  CHECK(lo <= hi);
  CHECK(rep["heuristic_omega"].get<double>() >= lo - 1e-9);
  CHECK(rep["heuristic_in_omega_interval"] == true);
  CHECK(rep["two_way_interval"][0].get<double>() <=
        rep["two_way_interval"][1].get<double>());

  SUBCASE("memory guard") {
    cfg.rows = 9000;
    CHECK(xgtest::thrown_code([&] { xg::cli::cmd_experiment_bell(cfg); }) ==
          errc::bad_dimensions);
  }
}

TEST_CASE("number formatting round trips doubles") {
  for (double v : {0.5, 1.0 / 3.0, 0.3967575105118047, 1e-300, 12345.678875}) {
    CHECK(std::stod(xg::cli::g17(v)) == v);
  }
}

TEST_SUITE_END();
