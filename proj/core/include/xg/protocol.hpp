#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "xg/exact.hpp"
#include "xg/game.hpp"

namespace xg {

/// Operational one-way strategy: Alice sends message_map[x] (one of t words)
/// and plays alice[x]; Bob answers bob[message][y].
struct OneWayProtocol {
  int t = 1;
  std::vector<int> message_map;       // [n] -> [0, t)
  std::vector<std::int8_t> alice;     // n signs
  std::vector<std::int8_t> bob;       // t x n signs, row-major
};

/// One rectangle of a two-way strategy: a row set x column set with the sign
/// vectors the players use on it (aligned with rows/cols).
struct Rectangle {
  std::vector<int> rows;
  std::vector<int> cols;
  std::vector<std::int8_t> alice;
  std::vector<std::int8_t> bob;
};

/// 2^c rectangles partitioning the input square.
using RectanglePartition = std::vector<Rectangle>;

struct WeightedProtocol {
  double weight = 1.0;
  OneWayProtocol protocol;
};

/// Shared randomness as a finite convex mixture of deterministic protocols.
using ProtocolMixture = std::vector<WeightedProtocol>;

/// Value of a protocol: sum_{x,y} G[x][y] alice[x] bob[message_map[x]][y].
double protocol_value(const XorGame& game, const OneWayProtocol& prot);

/// Bob's optimal per-message answers for a fixed message map and Alice
/// signs: bob[i][y] = sign(sum_{x: m(x)=i} alice[x] G[x][y]), ties to +1. The
/// returned protocol's value equals the PartitionCertificate formula.
OneWayProtocol best_bob_responses(const XorGame& game, const std::vector<int>& message_map,
                                  const std::vector<std::int8_t>& alice);

/// Brute-force one-way oracle: exhaustive over all message maps and Alice
/// signs with Bob best responses. Hard-capped at n <= 7, 2^c <= 4; throws
/// Error(oracle_cap_exceeded) beyond (oracles certify, they never estimate).
OneWayProtocol enumerate_one_way(const XorGame& game, int c);

/// Brute-force classical oracle: direct double enumeration over both
/// players' sign vectors, O(4^n). Hard-capped at n <= 10.
ValueCertificate naive_classical(const XorGame& game);

/// Value of a rectangle strategy: sum over rectangles of
/// sum_{(x,y) in R} alice_R[x] bob_R[y] G[x][y].
double rectangle_value(const XorGame& game, const RectanglePartition& rect);

/// Rewrites a two-way rectangle strategy as a one-way protocol: each input x
/// is mapped to the index of its row sign-pattern (at most 2^{2^c} distinct
/// patterns for 2^c rectangles) and Bob is re-optimized, so the protocol
/// value dominates the rectangle value. The returned t is the distinct-row
/// count.
OneWayProtocol two_way_to_one_way(const XorGame& game, const RectanglePartition& rect);

/// Exact mixture value (sum of weighted protocol values) together with an
/// empirical estimate from `rounds` seeded protocol draws.
std::pair<double, double> mixture_value(const XorGame& game, const ProtocolMixture& mix,
                                        int rounds, std::uint64_t seed);

// Protocol JSON: {"t": int, "m": [int], "a": [int], "b": [[int]]}.
void to_json(nlohmann::json& j, const OneWayProtocol& prot);
OneWayProtocol protocol_from_json(const nlohmann::json& j);
void save_protocol(const OneWayProtocol& prot, const std::filesystem::path& path);
OneWayProtocol load_protocol(const std::filesystem::path& path);

}  // namespace xg
