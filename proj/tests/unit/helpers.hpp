#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <doctest.h>

#include "xg/errors.hpp"
#include "xg/game.hpp"
#include "xg/rng.hpp"

namespace xgtest {

// 2x2 game with classical value 1/2 and one-bit one-way value 1.
inline xg::XorGame chsh() {
  return xg::XorGame::build(2, {1, 1, 1, -1}, {0.25, 0.25, 0.25, 0.25});
}

// 3x3 game with identity signs: classical value 5/9, one-bit one-way 7/9
// (optimal partition {0} | {1,2}).
inline xg::XorGame triangle() {
  return xg::XorGame::build(3, {1, -1, -1, -1, 1, -1, -1, -1, 1},
                            std::vector<double>(9, 1.0 / 9.0));
}

// Uniform-pi random-sign game. Sampled locally so the oracle tests do not
// share code with the library generators they are checking.
inline xg::XorGame random_game(int n, std::uint64_t seed) {
  xg::Rng rng(seed);
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n);
  for (auto& s : f) s = static_cast<std::int8_t>(rng.sign());
  return xg::XorGame::build(
      n, std::move(f),
      std::vector<double>(static_cast<std::size_t>(n) * n,
                          1.0 / (static_cast<double>(n) * n)));
}

// Random signs with a random (normalized) distribution, to keep the exact
// kernels honest away from the uniform-pi special case.
inline xg::XorGame random_game_nonuniform(int n, std::uint64_t seed) {
  xg::Rng rng(seed);
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n);
  for (auto& s : f) s = static_cast<std::int8_t>(rng.sign());
  std::vector<double> pi(static_cast<std::size_t>(n) * n);
  double sum = 0.0;
  for (auto& p : pi) {
    p = rng.uniform() + 1e-3;
    sum += p;
  }
  for (auto& p : pi) p /= sum;
  return xg::XorGame::build(n, std::move(f), std::move(pi));
}

template <typename F>
xg::errc thrown_code(F&& f) {
  try {
    f();
  } catch (const xg::Error& e) {
    return e.code();
  }
  FAIL("expected xg::Error");
  return xg::errc::bad_argument;
}

inline std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("xg_test_" + name)).string();
}

}  // namespace xgtest
