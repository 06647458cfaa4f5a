#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace xg::cli {

struct SolveConfig {
  std::string game_path;
  std::string method = "auto";  // exact | heuristic | auto
  std::vector<int> cs = {1};
  unsigned threads = 0;
  std::string out;  // empty = stdout
  bool has_seed = false;
  std::uint64_t seed = 0;
  int restarts = 20;
};

struct GenerateConfig {
  std::string kind;  // chevet | chevet-block | levi
  int n = 16;
  int c = 0;
  double delta = 0.5;
  std::int64_t t = -1;  // -1 = derive from bits
  int bits = 0;
  double epsilon = 0.1;
  int rows = 4096;
  int samples = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string report_path;  // levi sidecar; default <out>.report.json
};

struct ConcentrationConfig {
  int n = 16;
  int samples = 1000;
  std::vector<double> rs = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5};
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string plot;  // empty = no script
};

struct TightnessConfig {
  int n = 12;
  int games = 50;  // seeds per generator kind
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string plot;
};

struct ChevetConfig {
  std::vector<int> ns = {8, 16, 24};
  int samples = 200;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
  std::string plot;
};

struct BellConfig {
  double delta = 0.5;
  int bits = 1;
  std::int64_t t = -1;  // -1 = 2^(2^bits)
  double epsilon = 0.1;
  int rows = 4096;
  int samples = 1000;
  int restarts = 2;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;  // empty = stdout
};

// Each command validates its config, does the work, writes its outputs, and
// returns the report it wrote (JSON commands) or the CSV text (experiments),
// so tests can exercise them without spawning processes.
nlohmann::json cmd_solve(const SolveConfig& config);
nlohmann::json cmd_generate(const GenerateConfig& config);
std::string cmd_experiment_concentration(const ConcentrationConfig& config);
std::string cmd_experiment_tightness(const TightnessConfig& config);
std::string cmd_experiment_chevet(const ChevetConfig& config);
nlohmann::json cmd_experiment_bell(const BellConfig& config);

/// %.17g: shortest decimal that round-trips a double.
std::string g17(double v);

}  // namespace xg::cli
