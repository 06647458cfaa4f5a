#pragma once

#include <cstdint>
#include <vector>

#include "xg/game.hpp"

namespace xg {

struct ExactOptions {
  int classical_cap = 24;  // sign enumeration cap for omega
  int dp_cap = 14;         // subset-DP cap for the one-way value
  unsigned threads = 0;    // 0 = all hardware threads
};

/// Optimal local strategy: value = sum_{x,y} G[x][y] a[x] b[y], with Bob's
/// signs the best response b[y] = sign(sum_x G[x][y] a[x]), ties to +1.
struct ValueCertificate {
  double value = 0.0;
  std::vector<std::int8_t> alice;
  std::vector<std::int8_t> bob;
};

/// Optimal one-way strategy for c bits: a partition of the inputs into at
/// most 2^c message blocks plus Alice signs. value =
/// sum_i sum_y |sum_{x in block i} a[x] G[x][y]|.
struct PartitionCertificate {
  double value = 0.0;
  int c = 0;
  int t = 1;                          // messages actually used
  std::vector<int> message_map;       // input -> message in [0, t)
  std::vector<std::int8_t> alice;
  std::vector<std::int8_t> bob;       // t x n, row-major: best response per message
};

/// Block values for every nonempty subset of inputs, indexed by bitmask.
struct BlockValueTable {
  int n = 0;
  std::vector<double> value;  // size 1 << n; entry 0 unused
  double operator[](std::uint32_t mask) const { return value[mask]; }
};

/// Exact classical value: max over Alice signs of sum_y |sum_x a[x] G[x][y]|.
/// Gray-code enumeration with the first sign fixed to +1; deterministic
/// tie-break (lexicographically smallest signs, +1 before -1). Throws
/// Error(exact_cap_exceeded) above the cap; use module search instead.
ValueCertificate classical_value(const XorGame& game, const ExactOptions& opt = {});

/// Computes the certificate value for a fixed Alice sign vector (Bob best
/// response implied). Used to re-evaluate certificates reproducibly.
double value_of_alice_signs(const XorGame& game, const std::vector<std::int8_t>& alice);

/// Exact block value: max over signs supported on the subset `mask` of
/// sum_y |sum_{x in mask} a[x] G[x][y]|. Throws Error(empty_subset) on an
/// empty mask.
double block_value(const XorGame& game, std::uint32_t mask, const ExactOptions& opt = {});

/// Block values for all 2^n - 1 nonempty subsets; Theta(3^n n) work.
BlockValueTable block_value_table(const XorGame& game, const ExactOptions& opt = {});

/// Exact one-way value with c bits: max over partitions of the inputs into
/// at most 2^c blocks of the sum of block values (DP over submasks). When
/// 2^c >= n the singleton partition is optimal and the value is pi_1 = 1.
PartitionCertificate one_way_value(const XorGame& game, int c, const ExactOptions& opt = {});
PartitionCertificate one_way_value(const XorGame& game, int c, const BlockValueTable& table,
                                   const ExactOptions& opt = {});

/// Value of a given partition + Alice signs (sum over blocks of the L1 norm
/// of the aggregated columns). The PartitionCertificate formula.
double partition_value(const XorGame& game, const std::vector<int>& message_map,
                       const std::vector<std::int8_t>& alice);

/// The ambient space the vectors of a weak-p norm computation live in.
enum class Ambient {
  sup_norm,  // l_inf^d: dual ball extreme points are +/- coordinate functionals
  sum_norm,  // l_1^d:   dual ball extreme points are +/-1 sign vectors
};

/// Weak-p norm of a finite vector sequence: sup over dual-unit-ball
/// functionals of the l_p norm of their values. Exact via extreme-point
/// enumeration; for sum_norm ambient the dimension is capped (sign
/// enumeration).
double weak_p_norm(const std::vector<std::vector<double>>& vectors, Ambient ambient, double p,
                   int cap = 24);

}  // namespace xg
