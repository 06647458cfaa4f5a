#include "xg/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <utility>

#include "xg/errors.hpp"
#include "xg/parallel.hpp"
#include "xg/rng.hpp"

namespace xg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Chambers-Mallows-Stuck transform for a standard symmetric p-stable draw
// under the exp(-|u|^p) convention. Consumes exactly two uniforms.
double cms_draw(Rng& rng, double p) {
  const double theta = kPi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double a = std::sin(p * theta) / std::pow(std::cos(theta), 1.0 / p);
  const double b = std::pow(std::cos((p - 1.0) * theta) / w, (1.0 - p) / p);
  return a * b;
}

void check_stability(double p, double hi) {
  if (!(p > 1.0) || !(p <= hi)) {
    throw Error(errc::bad_stability_index,
                "stability index must lie in (1, " + std::to_string(hi) + "], got " +
                    std::to_string(p));
  }
}

double p_norm(const std::vector<double>& x, double p) {
  double acc = 0.0;
  for (double v : x) acc += std::pow(std::fabs(v), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

double stable_abs_mean(double p) {
  check_stability(p, 2.0);
  return (2.0 / kPi) * std::tgamma(1.0 - 1.0 / p);
}

double stable_abs_mean_empirical(double p, std::int64_t count, std::uint64_t seed, int groups) {
  check_stability(p, 2.0);
  if (groups < 1 || count < groups) {
    throw Error(errc::bad_argument, "need at least one draw per group");
  }
  Rng rng(seed);
  const std::int64_t per_group = count / groups;
  std::vector<double> means(groups);
  for (int g = 0; g < groups; ++g) {
    KahanSum sum;
    for (std::int64_t i = 0; i < per_group; ++i) sum.add(std::fabs(cms_draw(rng, p)));
    means[g] = sum.value() / per_group;
  }
  std::nth_element(means.begin(), means.begin() + groups / 2, means.end());
  return means[groups / 2];
}

std::vector<double> sample_stable(double p, std::int64_t count, std::uint64_t seed) {
  check_stability(p, 2.0);
  if (count < 0) throw Error(errc::bad_argument, "count must be nonnegative");
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& v : out) v = cms_draw(rng, p);
  return out;
}

EmbeddingSpec stable_embedding(int k, int rows, double p, std::uint64_t seed, unsigned threads) {
  if (k < 1 || rows < k) {
    throw Error(errc::bad_dimensions,
                "embedding needs rows >= k >= 1, got k = " + std::to_string(k) +
                    ", rows = " + std::to_string(rows));
  }
  if (!(p > 1.0) || !(p < 2.0)) {
    throw Error(errc::bad_stability_index,
                "embedding needs 1 < p < 2, got " + std::to_string(p));
  }
  EmbeddingSpec emb;
  emb.p = p;
  emb.k = k;
  emb.rows = rows;
  emb.normalization = 1.0 / (rows * stable_abs_mean(p));
  emb.matrix.resize(static_cast<std::size_t>(rows) * k);
  for_each_chunk(static_cast<std::size_t>(rows), threads, [&](std::size_t j) {
    Rng rng(derive_seed(seed, j, 4));
    double* row = emb.matrix.data() + j * k;
    for (int i = 0; i < k; ++i) row[i] = cms_draw(rng, p);
  });
  return emb;
}

std::vector<double> apply_embedding(const EmbeddingSpec& emb, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != emb.k) {
    throw Error(errc::dimension_mismatch, "embedding input must have k coordinates");
  }
  std::vector<double> out(emb.rows);
  for (int j = 0; j < emb.rows; ++j) {
    const double* row = emb.matrix.data() + static_cast<std::size_t>(j) * emb.k;
    double dot = 0.0;
    for (int i = 0; i < emb.k; ++i) dot += row[i] * x[i];
    out[j] = emb.normalization * dot;
  }
  return out;
}

double embedding_l1(const EmbeddingSpec& emb, const std::vector<double>& x) {
  const std::vector<double> ax = apply_embedding(emb, x);
  KahanSum sum;
  for (double v : ax) sum.add(std::fabs(v));
  return sum.value();
}

DistortionReport distortion_estimate(const EmbeddingSpec& emb, int samples, std::uint64_t seed,
                                     unsigned threads) {
  if (samples < 1) throw Error(errc::bad_argument, "need at least one sample");
  DistortionReport report;
  report.samples = samples;

  // Basis vectors: ||A e_i||_1 is the scaled absolute column sum.
  std::vector<KahanSum> col(emb.k);
  for (int j = 0; j < emb.rows; ++j) {
    const double* row = emb.matrix.data() + static_cast<std::size_t>(j) * emb.k;
    for (int i = 0; i < emb.k; ++i) col[i].add(std::fabs(row[i]));
  }
  double lo = emb.normalization * col[0].value();
  double hi = lo;
  for (int i = 1; i < emb.k; ++i) {
    const double r = emb.normalization * col[i].value();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }

  const std::vector<double> ones(emb.k, 1.0);
  const double ones_ratio = embedding_l1(emb, ones) / p_norm(ones, emb.p);
  lo = std::min(lo, ones_ratio);
  hi = std::max(hi, ones_ratio);

  struct Range {
    double lo, hi;
  };
  const Range sampled = chunked_reduce<Range>(
      static_cast<std::size_t>(samples), threads,
      [&](std::size_t s) {
        Rng rng(derive_seed(seed, s, 7));
        std::vector<double> x(emb.k);
        for (auto& v : x) v = rng.gaussian();
        const double norm = p_norm(x, emb.p);
        if (norm < 1e-300) return Range{ones_ratio, ones_ratio};
        const double r = embedding_l1(emb, x) / norm;
        return Range{r, r};
      },
      [](Range a, const Range& b) {
        return Range{std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
      });
  report.lower = std::min(lo, sampled.lo);
  report.upper = std::max(hi, sampled.hi);
  return report;
}

LeviParams levi_params(double delta, std::int64_t t, double epsilon) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw Error(errc::bad_argument, "delta must lie in (0,1)");
  }
  if (t < 1) throw Error(errc::bad_argument, "message budget t must be positive");
  if (!(epsilon > 0.0)) throw Error(errc::bad_argument, "epsilon must be positive");

  LeviParams params;
  params.delta = delta;
  params.epsilon = epsilon;
  params.t = t;
  params.alpha = 1.0 / delta;
  params.theta0 = std::log2(params.alpha);
  if (!(params.theta0 > 1e-9)) {
    throw Error(errc::degenerate_delta,
                "delta = " + std::to_string(delta) + " makes theta0 = log2(1/delta) underflow");
  }

  // Least m with t^(theta0/m) < 1 + epsilon; seed from the closed form and
  // settle the boundary exactly.
  const double target = params.theta0 * std::log(static_cast<double>(t)) / std::log1p(epsilon);
  long m = std::max(1L, static_cast<long>(std::ceil(target)) - 2);
  while (std::pow(static_cast<double>(t), params.theta0 / m) >= 1.0 + epsilon) ++m;
  while (m > 1 && std::pow(static_cast<double>(t), params.theta0 / (m - 1)) < 1.0 + epsilon) --m;
  // The interval bounds need q strictly greater than 2 (equivalently p < 2).
  while (static_cast<double>(m) / params.theta0 <= 2.0) ++m;
  if (m > 62) {
    throw Error(errc::bad_argument,
                "k = 2^" + std::to_string(m) + " overflows; loosen epsilon or delta");
  }
  params.m0 = static_cast<int>(m);
  params.k = std::int64_t{1} << params.m0;
  params.q = params.m0 / params.theta0;
  params.p = params.q / (params.q - 1.0);
  return params;
}

LeviParams levi_params_bits(double delta, int c, double epsilon) {
  if (c < 0 || c > 5) {
    throw Error(errc::bad_argument, "t = 2^(2^c) needs 0 <= c <= 5 to stay within 2^62");
  }
  return levi_params(delta, std::int64_t{1} << (1 << c), epsilon);
}

LeviGameReport levi_game(const LeviParams& params, int rows, int samples, std::uint64_t seed,
                         unsigned threads) {
  if (params.k > rows) {
    throw Error(errc::bad_dimensions, "rows must be at least k = " + std::to_string(params.k));
  }
  if (params.k > (std::int64_t{1} << 22)) {
    throw Error(errc::bad_dimensions, "k = " + std::to_string(params.k) + " is too large to build");
  }
  const int k = static_cast<int>(params.k);
  const int n = rows;

  EmbeddingSpec emb = stable_embedding(k, rows, params.p, seed, threads);
  const DistortionReport dist = distortion_estimate(emb, samples, derive_seed(seed, 1, 8), threads);

  // T = A o S o P: column x of T is k^(-1/p) A e_x for x < k, zero after.
  const double scale = emb.normalization * std::pow(static_cast<double>(k), -1.0 / params.p);
  KahanSum abs_total;
  for (double v : emb.matrix) abs_total.add(std::fabs(scale * v));
  const double pi1 = abs_total.value();

  KahanSum ones_sum;
  for (int j = 0; j < rows; ++j) {
    const double* row = emb.matrix.data() + static_cast<std::size_t>(j) * k;
    double rowsum = 0.0;
    for (int i = 0; i < k; ++i) rowsum += row[i];
    ones_sum.add(std::fabs(scale * rowsum));
  }
  const double ones_l1 = ones_sum.value();

  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n, 1);
  std::vector<double> pi(static_cast<std::size_t>(n) * n, 0.0);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < n; ++y) {
      const double entry = scale * emb.matrix[static_cast<std::size_t>(y) * k + x];
      if (entry < 0.0) f[static_cast<std::size_t>(x) * n + y] = -1;
      pi[static_cast<std::size_t>(x) * n + y] = std::fabs(entry) / pi1;
    }
  }
  XorGame game = XorGame::build(n, std::move(f), std::move(pi));

  // The all-ones direction sits in the distortion sample set, so these
  // intervals are nonempty up to FP dust, which the max() absorbs.
  ValuePair omega;
  omega.lower = std::min(1.0, ones_l1 / pi1);
  omega.upper = std::min(1.0, std::max(omega.lower, dist.upper / pi1));
  ValuePair one_way;
  one_way.lower = omega.lower;
  one_way.upper = std::min(
      1.0, std::max(one_way.lower, std::pow(static_cast<double>(params.t), 1.0 / params.q) *
                                       dist.upper / pi1));

  const double width_cap = (1.0 + params.epsilon) * (dist.upper / dist.lower) * (1.0 + 1e-9);
  if (omega.upper / omega.lower > width_cap || one_way.upper / one_way.lower > width_cap) {
    throw std::logic_error("interval width exceeded the epsilon window");
  }
  return LeviGameReport{std::move(game), params, dist, pi1, omega, one_way};
}

XorGame chevet_full_game(int n, std::uint64_t seed) {
  if (n < 1) throw Error(errc::bad_argument, "game size must be positive");
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n, 1);
  const double w = 1.0 / (static_cast<double>(n) * n);
  std::vector<double> pi(static_cast<std::size_t>(n) * n, w);
  for (int x = 0; x < n; ++x) {
    Rng rng(derive_seed(seed, x, 5));
    for (int y = 0; y < n; ++y) f[static_cast<std::size_t>(x) * n + y] = rng.sign();
  }
  return XorGame::build(n, std::move(f), std::move(pi));
}

XorGame chevet_block_game(int n, int c, std::uint64_t seed) {
  if (n < 1) throw Error(errc::bad_argument, "game size must be positive");
  if (c < 0 || c >= 62 || (std::int64_t{1} << c) > n) {
    throw Error(errc::block_too_large, "block of 2^" + std::to_string(c) +
                                           " rows does not fit in an n = " + std::to_string(n) +
                                           " game");
  }
  const int b = 1 << c;
  std::vector<std::int8_t> f(static_cast<std::size_t>(n) * n, 1);
  std::vector<double> pi(static_cast<std::size_t>(n) * n, 0.0);
  const double w = 1.0 / (static_cast<double>(b) * b);
  for (int x = 0; x < b; ++x) {
    Rng rng(derive_seed(seed, x, 6));
    for (int y = 0; y < b; ++y) {
      f[static_cast<std::size_t>(x) * n + y] = rng.sign();
      pi[static_cast<std::size_t>(x) * n + y] = w;
    }
  }
  return XorGame::build(n, std::move(f), std::move(pi));
}

void to_json(nlohmann::json& j, const LeviParams& params) {
  j = nlohmann::json{{"delta", params.delta}, {"alpha", params.alpha},
                     {"theta0", params.theta0}, {"epsilon", params.epsilon},
                     {"t", params.t},          {"m0", params.m0},
                     {"k", params.k},          {"q", params.q},
                     {"p", params.p}};
}

void to_json(nlohmann::json& j, const DistortionReport& report) {
  j = nlohmann::json{
      {"lower", report.lower}, {"upper", report.upper}, {"samples", report.samples}};
}

void to_json(nlohmann::json& j, const LeviGameReport& report) {
  j = nlohmann::json{{"game", report.game},
                     {"params", report.params},
                     {"distortion", report.distortion},
                     {"pi1_of_T", report.pi1_of_T},
                     {"omega_interval", {report.omega_interval.lower, report.omega_interval.upper}},
                     {"one_way_interval",
                      {report.one_way_interval.lower, report.one_way_interval.upper}}};
}

void save_levi_report(const LeviGameReport& report, const std::filesystem::path& path) {
  nlohmann::json j;
  to_json(j, report);
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(errc::io_error, "failed writing " + path.string());
}

}  // namespace xg
