#include "xg/game.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "xg/errors.hpp"
#include "xg/parallel.hpp"

namespace xg {

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].first << ": " << violations[i].second;
  }
  return os.str();
}

namespace {

ValidationReport validate_flat(int n, std::span<const std::int8_t> f,
                               std::span<const double> pi) {
  ValidationReport rep;
  if (n < 1) {
    rep.reject("n", "input count must be >= 1");
    return rep;
  }
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (f.size() != nn || pi.size() != nn) {
    rep.reject("f/pi", "matrices must be n x n");
    return rep;
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (f[i] != 1 && f[i] != -1) {
      rep.reject("f", "entry at flat index " + std::to_string(i) + " is not in {-1,+1}");
      break;
    }
  }
  KahanSum sum;
  for (std::size_t i = 0; i < nn; ++i) {
    const double p = pi[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      rep.reject("pi", "entry at flat index " + std::to_string(i) + " is negative or non-finite");
      break;
    }
    sum.add(p);
  }
  if (rep.ok && std::fabs(sum.value() - 1.0) > kProbSumTolerance) {
    std::ostringstream os;
    os << "probability mass sums to " << sum.value() << ", not 1";
    rep.reject("pi", os.str());
  }
  return rep;
}

}  // namespace

XorGame XorGame::build(int n, std::vector<std::int8_t> f, std::vector<double> pi) {
  const ValidationReport rep = validate_flat(n, f, pi);
  if (!rep.ok) {
    const auto& first = rep.violations.front().first;
    errc code = errc::dimension_mismatch;
    if (first == "f") code = errc::not_a_sign;
    if (first == "pi") code = errc::not_a_distribution;
    throw Error(code, "invalid game: " + rep.summary());
  }
  std::vector<double> cost(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) cost[i] = f[i] * pi[i];
  return XorGame(n, std::move(f), std::move(pi), std::move(cost));
}

ValidationReport validate_game(const SignMatrix& f, const ProbMatrix& pi) {
  ValidationReport rep;
  const std::size_t n = f.size();
  if (n == 0) {
    rep.reject("n", "input count must be >= 1");
    return rep;
  }
  if (pi.size() != n) {
    rep.reject("f/pi", "f and pi have different row counts");
    return rep;
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x].size() != n || pi[x].size() != n) {
      rep.reject("f/pi", "row " + std::to_string(x) + " is not of length n");
      return rep;
    }
  }
  std::vector<std::int8_t> ff;
  std::vector<double> pp;
  ff.reserve(n * n);
  pp.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const int s = f[x][y];
      // non-sign entries become 0, which validate_flat rejects
      ff.push_back(static_cast<std::int8_t>(s == 1 ? 1 : (s == -1 ? -1 : 0)));
      pp.push_back(pi[x][y]);
    }
  return validate_flat(static_cast<int>(n), ff, pp);
}

XorGame build_game(const SignMatrix& f, const ProbMatrix& pi) {
  const std::size_t n = f.size();
  if (n == 0 || pi.size() != n)
    throw Error(errc::dimension_mismatch, "invalid game: f and pi must be square of equal size");
  std::vector<std::int8_t> ff;
  std::vector<double> pp;
  ff.reserve(n * n);
  pp.reserve(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    if (f[x].size() != n || pi[x].size() != n)
      throw Error(errc::dimension_mismatch,
                  "invalid game: row " + std::to_string(x) + " is not of length n");
    for (std::size_t y = 0; y < n; ++y) {
      const int s = f[x][y];
      if (s != 1 && s != -1)
        throw Error(errc::not_a_sign, "invalid game: f[" + std::to_string(x) + "][" +
                                          std::to_string(y) + "] is not in {-1,+1}");
      ff.push_back(static_cast<std::int8_t>(s));
      pp.push_back(pi[x][y]);
    }
  }
  return XorGame::build(static_cast<int>(n), std::move(ff), std::move(pp));
}

double pi_1_norm(const XorGame& game) {
  KahanSum sum;
  for (double g : game.costs()) sum.add(std::fabs(g));
  return sum.value();
}

double pi_1_norm(const ProbMatrix& raw) {
  KahanSum sum;
  for (const auto& row : raw)
    for (double v : row) sum.add(std::fabs(v));
  return sum.value();
}

XorGame flip_entry(const XorGame& game, int x, int y) {
  if (x < 0 || x >= game.n() || y < 0 || y >= game.n())
    throw Error(errc::index_out_of_range,
                "flip_entry: index (" + std::to_string(x) + "," + std::to_string(y) +
                    ") outside [0," + std::to_string(game.n()) + ")");
  XorGame out = game;
  const std::size_t i = static_cast<std::size_t>(x) * game.n() + y;
  out.f_[i] = static_cast<std::int8_t>(-out.f_[i]);
  out.cost_[i] = -out.cost_[i];
  return out;
}

void to_json(nlohmann::json& j, const XorGame& game) {
  const int n = game.n();
  nlohmann::json f = nlohmann::json::array();
  nlohmann::json pi = nlohmann::json::array();
  for (int x = 0; x < n; ++x) {
    nlohmann::json frow = nlohmann::json::array();
    nlohmann::json prow = nlohmann::json::array();
    for (int y = 0; y < n; ++y) {
      frow.push_back(game.sign(x, y));
      prow.push_back(game.prob(x, y));
    }
    f.push_back(std::move(frow));
    pi.push_back(std::move(prow));
  }
  j = nlohmann::json{{"n", n}, {"f", std::move(f)}, {"pi", std::move(pi)}};
}

XorGame game_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("f") || !j.contains("pi"))
    throw Error(errc::io_error, "game JSON must be an object with keys n, f, pi");
  int n = 0;
  try {
    n = j.at("n").get<int>();
  } catch (const nlohmann::json::exception&) {
    throw Error(errc::io_error, "game JSON: n is not an integer");
  }
  SignMatrix f;
  ProbMatrix pi;
  try {
    f = j.at("f").get<SignMatrix>();
    pi = j.at("pi").get<ProbMatrix>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::io_error, std::string("game JSON: bad matrix payload: ") + e.what());
  }
  if (static_cast<int>(f.size()) != n)
    throw Error(errc::dimension_mismatch, "game JSON: f has " + std::to_string(f.size()) +
                                              " rows, n = " + std::to_string(n));
  return build_game(f, pi);
}

XorGame load_game(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open game file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::io_error, "cannot parse " + path.string() + ": " + e.what());
  }
  return game_from_json(j);
}

void save_game(const XorGame& game, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot open output file: " + path.string());
  nlohmann::json j = game;
  out << j.dump(2) << '\n';
  if (!out) throw Error(errc::io_error, "failed writing " + path.string());
}

}  // namespace xg
