#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace xg {

using SignMatrix = std::vector<std::vector<int>>;
using ProbMatrix = std::vector<std::vector<double>>;

struct ValidationReport {
  bool ok = true;
  std::vector<std::pair<std::string, std::string>> violations;  // (field, description)

  void reject(std::string field, std::string description) {
    ok = false;
    violations.emplace_back(std::move(field), std::move(description));
  }
  std::string summary() const;
};

/// Probability mass is accepted when |sum - 1| <= this tolerance. Uniform
/// pi = 1/N^2 is inexact in binary, so exact equality is not required.
inline constexpr double kProbSumTolerance = 1e-9;

/// An XOR game: sign matrix f in {-1,+1}^{n x n}, input distribution pi,
/// and derived cost matrix G = f o pi. Immutable after construction; all
/// mutation-like operations return new values, so games are safe to share
/// across threads.
class XorGame {
 public:
  /// Flat, row-major builder. Throws Error(dimension_mismatch | not_a_sign |
  /// not_a_distribution) when the input fails validation.
  static XorGame build(int n, std::vector<std::int8_t> f, std::vector<double> pi);

  int n() const { return n_; }
  int sign(int x, int y) const { return f_[idx(x, y)]; }
  double prob(int x, int y) const { return pi_[idx(x, y)]; }
  double cost(int x, int y) const { return cost_[idx(x, y)]; }

  std::span<const std::int8_t> signs() const { return f_; }
  std::span<const double> probs() const { return pi_; }
  std::span<const double> costs() const { return cost_; }
  std::span<const double> cost_row(int x) const {
    return std::span<const double>(cost_).subspan(static_cast<std::size_t>(x) * n_, n_);
  }

 private:
  XorGame(int n, std::vector<std::int8_t> f, std::vector<double> pi,
          std::vector<double> cost)
      : n_(n), f_(std::move(f)), pi_(std::move(pi)), cost_(std::move(cost)) {}

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(x) * n_ + y;
  }

  int n_;
  std::vector<std::int8_t> f_;
  std::vector<double> pi_;
  std::vector<double> cost_;

  friend XorGame flip_entry(const XorGame&, int, int);
};

/// Validates candidate (f, pi) matrices without constructing a game.
ValidationReport validate_game(const SignMatrix& f, const ProbMatrix& pi);

/// Builds a validated game from nested matrices; G = f o pi.
XorGame build_game(const SignMatrix& f, const ProbMatrix& pi);

/// Sum of |G[x][y]| over all entries; equals 1 for every valid game.
double pi_1_norm(const XorGame& game);

/// Absolute entry sum of a raw matrix (the same functional on unnormalized
/// input).
double pi_1_norm(const ProbMatrix& raw);

/// Returns a copy of the game with f[x][y] negated (an involution). pi is
/// unchanged. Throws Error(index_out_of_range) on bad indices.
XorGame flip_entry(const XorGame& game, int x, int y);

// JSON interchange: {"n": int, "f": [[int]], "pi": [[float]]}, row-major.
// Parsing enforces the full type invariants.
void to_json(nlohmann::json& j, const XorGame& game);
XorGame game_from_json(const nlohmann::json& j);

XorGame load_game(const std::filesystem::path& path);
void save_game(const XorGame& game, const std::filesystem::path& path);

}  // namespace xg
