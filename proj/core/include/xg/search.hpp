#pragma once

#include <cstdint>
#include <vector>

#include "xg/exact.hpp"
#include "xg/game.hpp"

namespace xg {

struct SearchParams {
  int restarts = 20;
  int max_iters = 20000;       // annealing steps per restart
  double t0 = 0.1;             // initial temperature
  double decay = 0.995;        // geometric cooling factor, in (0,1)
  std::uint64_t seed = 0;
  int relaxation_rank = 8;
  int sweeps = 200;            // relaxation ascent cap
  unsigned threads = 0;        // 0 = all hardware threads
};

/// Unit vectors (row-major n x rank) and the bilinear objective they attain.
struct RelaxationResult {
  double value = 0.0;
  int rank = 1;
  std::vector<double> alice_vectors;
  std::vector<double> bob_vectors;
};

/// Multistart local search over Alice signs with Bob best responses; restart
/// 0 starts from all +1, the rest from seeded random signs. The certificate
/// is feasible, so its value never exceeds the exact classical value.
ValueCertificate hill_climb_classical(const XorGame& game, const SearchParams& params);

/// Simulated annealing over (message map, Alice signs) with Metropolis
/// acceptance and geometric cooling, then a greedy polish of the best state.
/// Feasible by construction: value never exceeds the exact one-way value.
PartitionCertificate anneal_one_way(const XorGame& game, int c, const SearchParams& params);

/// Block-coordinate ascent on sum G[x][y] <u_x, v_y> over unit vectors of
/// dimension relaxation_rank. Seeding with a sign certificate embeds it as a
/// rank-1 start, so the result dominates that certificate's value. The
/// objective is nondecreasing across sweeps; the returned value is a lower
/// bound on the relaxation optimum, never a certified upper bound.
RelaxationResult vector_relaxation(const XorGame& game, const SearchParams& params,
                                   const ValueCertificate* init = nullptr);

/// Random-hyperplane rounding of relaxation vectors: best sign certificate
/// over `rounds` seeded Gaussian directions, Bob re-optimized per round.
ValueCertificate hyperplane_round(const XorGame& game, const std::vector<double>& alice_vectors,
                                  const std::vector<double>& bob_vectors, int rounds,
                                  std::uint64_t seed, unsigned threads = 0);

}  // namespace xg
