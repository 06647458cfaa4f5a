#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "xg/bounds.hpp"
#include "xg/game.hpp"

namespace xg {

/// Parameters of the p-stable game construction. Derived from (delta, t,
/// epsilon): alpha = 1/delta, theta0 = log2(alpha), m0 the least integer
/// with t^(theta0/m0) < 1 + epsilon (raised further until q > 2), k = 2^m0,
/// q = m0/theta0 and p its conjugate, so that k^(1/q) = alpha.
struct LeviParams {
  double delta = 0.5;
  double alpha = 2.0;
  double theta0 = 1.0;
  double epsilon = 0.1;
  std::int64_t t = 2;
  int m0 = 1;
  std::int64_t k = 2;
  double q = 3.0;
  double p = 1.5;
};

/// A sampled p-stable embedding A of l_p^k into l_1^rows:
/// (Ax)_j = normalization * sum_i matrix[j][i] * x_i, with
/// normalization = 1/(rows * c_p) chosen so that E ||A e_i||_1 = 1.
struct EmbeddingSpec {
  double p = 1.5;
  int k = 1;
  int rows = 1;
  std::vector<double> matrix;  // rows x k, row-major
  double normalization = 1.0;
};

/// Measured range of ||Ax||_1 / ||x||_p over a sample set.
struct DistortionReport {
  double lower = 1.0;
  double upper = 1.0;
  int samples = 0;
};

/// A p-stable game together with the measurements backing its value
/// intervals: omega_interval brackets the classical value and
/// one_way_interval brackets the t-message one-way value.
struct LeviGameReport {
  XorGame game;
  LeviParams params;
  DistortionReport distortion;
  double pi1_of_T = 1.0;
  ValuePair omega_interval;
  ValuePair one_way_interval;
};

/// Mean of |X| for a standard symmetric p-stable X under the exp(-|u|^p)
/// convention: c_p = (2/pi) * Gamma(1 - 1/p); c_2 = 2/sqrt(pi).
double stable_abs_mean(double p);

/// Median-of-means estimate of E|X| from fresh draws. Fallback for c_p:
/// heavy tails make the plain sample mean converge slowly for p near 1.
double stable_abs_mean_empirical(double p, std::int64_t count, std::uint64_t seed,
                                 int groups = 64);

/// i.i.d. symmetric p-stable draws (characteristic function exp(-|u|^p))
/// via the Chambers-Mallows-Stuck transform. Requires 1 < p <= 2.
std::vector<double> sample_stable(double p, std::int64_t count, std::uint64_t seed);

/// Samples the embedding matrix row by row from per-row derived seeds, so
/// output is independent of scheduling. Requires rows >= k >= 1, 1 < p < 2.
EmbeddingSpec stable_embedding(int k, int rows, double p, std::uint64_t seed,
                               unsigned threads = 0);

/// Applies the embedding: returns A x (length rows).
std::vector<double> apply_embedding(const EmbeddingSpec& emb, const std::vector<double>& x);

/// ||A x||_1.
double embedding_l1(const EmbeddingSpec& emb, const std::vector<double>& x);

/// Min and max of ||Ax||_1 / ||x||_p over all k basis vectors, the all-ones
/// vector, and `samples` random directions.
DistortionReport distortion_estimate(const EmbeddingSpec& emb, int samples, std::uint64_t seed,
                                     unsigned threads = 0);

/// Derives the construction parameters from the contraction target delta,
/// the message budget t, and the isomorphism slack epsilon. Throws
/// Error(degenerate_delta) when delta is so close to 1 that theta0
/// underflows.
LeviParams levi_params(double delta, std::int64_t t, double epsilon);

/// Same with the one-way budget that dominates two-way c-bit protocols:
/// t = 2^(2^c).
LeviParams levi_params_bits(double delta, int c, double epsilon);

/// Builds the game of the operator T = A o S o P (S = k^(-1/p) id, P the
/// projection onto the first k coordinates), normalized to absolute entry
/// sum 1, on `rows` inputs per side. Only the first k of Alice's inputs
/// carry weight. Intervals come from the measured distortion: the all-ones
/// direction gives the omega lower bound and t^(1/q) * distortion.upper
/// caps the t-message one-way value.
LeviGameReport levi_game(const LeviParams& params, int rows, int samples, std::uint64_t seed,
                         unsigned threads = 0);

/// n x n game with i.i.d. uniform random signs and uniform pi = 1/n^2.
XorGame chevet_full_game(int n, std::uint64_t seed);

/// Game whose mass sits on a random-sign 2^c x 2^c top-left block (uniform
/// pi there, zero elsewhere; signs outside the block fixed to +1).
XorGame chevet_block_game(int n, int c, std::uint64_t seed);

void to_json(nlohmann::json& j, const LeviParams& params);
void to_json(nlohmann::json& j, const DistortionReport& report);
void to_json(nlohmann::json& j, const LeviGameReport& report);
void save_levi_report(const LeviGameReport& report, const std::filesystem::path& path);

}  // namespace xg
