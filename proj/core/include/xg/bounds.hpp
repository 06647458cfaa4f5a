#pragma once

#include <optional>

#include <nlohmann/json.hpp>

namespace xg {

/// Universal constants used by the bound formulas. K_G is not known exactly;
/// the Krivine upper bound pi/(2 ln(1+sqrt2)) is a safe proxy in both
/// directions (it multiplies upper bounds and divides lower bounds).
struct Constants {
  double k_g = 1.7822139781913693;      // pi / (2 ln(1 + sqrt 2))
  double chevet_b = 1.2533141373155001;  // sqrt(pi / 2)
};

/// A certified enclosure of a game value.
struct ValuePair {
  double lower = 0.0;
  double upper = 1.0;
};

/// Assembled sandwich for the two-way value at c bits, together with the
/// one-way bounds it was derived from. All value bounds are clipped to [0,1].
struct BoundReport {
  int c = 0;
  double omega = 0.0;
  double omega_one_way = 0.0;
  double discrepancy_upper = 0.0;
  double grothendieck_one_way_upper = 0.0;
  double one_way_floor = 0.0;
  double two_way_lower = 0.0;
  double two_way_upper = 1.0;
  bool block_size_exact = true;  // whether 2^c divides n
};

/// Discrepancy-method bound: omega_c <= 2^c omega, clipped to 1.
double discrepancy_upper(double omega, int c);

/// One-way upper bound omega_c^1 <= K_G 2^{c/2} omega, clipped to 1.
double grothendieck_one_way_upper(double omega, int c, const Constants& consts = {});

/// Universal one-way floor: omega_c^1 >= 2^{c/2} / (K_G sqrt n) when 2^c
/// divides n, with an extra factor 1/2 otherwise. Capped at 1.
double one_way_floor(int n, int c, const Constants& consts = {});

/// Builds the two-way sandwich from certified enclosures of omega, of the
/// one-way value at c bits, and optionally of the one-way value at 2^c bits
/// (the row-pattern route). Throws Error(inconsistent_inputs) if the
/// resulting lower bound exceeds the upper bound beyond 1e-9.
BoundReport two_way_sandwich(int n, int c, ValuePair omega, ValuePair one_way_c,
                             std::optional<ValuePair> one_way_pow_c = std::nullopt,
                             const Constants& consts = {});

void to_json(nlohmann::json& j, const BoundReport& r);

}  // namespace xg
