#include "xg/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "xg/errors.hpp"
#include "xg/parallel.hpp"

namespace xg {

namespace {

// Fixed-order 4-lane absolute sum. Every objective evaluation in this file
// goes through the same lane layout so that incremental and fresh
// evaluations compare consistently and results do not depend on the thread
// count.
double abs_sum4(const double* s, int n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  int y = 0;
  for (; y + 4 <= n; y += 4) {
    a0 += std::fabs(s[y]);
    a1 += std::fabs(s[y + 1]);
    a2 += std::fabs(s[y + 2]);
    a3 += std::fabs(s[y + 3]);
  }
  for (; y < n; ++y) a0 += std::fabs(s[y]);
  return (a0 + a1) + (a2 + a3);
}

// Adds coef * row to s and returns the updated absolute sum, fused.
double update_abs_sum4(double* s, const double* row, double coef, int n) {
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
  int y = 0;
  for (; y + 4 <= n; y += 4) {
    s[y] += coef * row[y];
    a0 += std::fabs(s[y]);
    s[y + 1] += coef * row[y + 1];
    a1 += std::fabs(s[y + 1]);
    s[y + 2] += coef * row[y + 2];
    a2 += std::fabs(s[y + 2]);
    s[y + 3] += coef * row[y + 3];
    a3 += std::fabs(s[y + 3]);
  }
  for (; y < n; ++y) {
    s[y] += coef * row[y];
    a0 += std::fabs(s[y]);
  }
  return (a0 + a1) + (a2 + a3);
}

struct BestSigns {
  double value = -1.0;
  std::uint64_t mask = 0;  // bit i set <=> rows[i] plays -1; bit 0 always clear

  void consider(double v, std::uint64_t m) {
    if (v > value || (v == value && m < mask)) {
      value = v;
      mask = m;
    }
  }
  BestSigns merged(const BestSigns& o) const {
    BestSigns r = *this;
    r.consider(o.value, o.mask);
    return r;
  }
};

// Exhaustive search over sign patterns on `rows` (first row fixed to +1).
// Enumerates the 2^(m-1) patterns in Gray-code order over a fixed chunk
// grid; chunk boundaries depend only on m, never on the thread count.
BestSigns enumerate_signs(const XorGame& game, const std::vector<int>& rows, unsigned threads) {
  const int n = game.n();
  const int m = static_cast<int>(rows.size());
  const std::uint64_t total = 1ULL << (m - 1);
  constexpr std::uint64_t kChunk = 1ULL << 12;
  const std::size_t chunks = static_cast<std::size_t>(total > kChunk ? total / kChunk : 1);

  auto run_chunk = [&](std::size_t ci) -> BestSigns {
    const std::uint64_t begin = ci * (total / chunks);
    const std::uint64_t end = (ci + 1) * (total / chunks);
    std::uint64_t gray = begin ^ (begin >> 1);  // over the m-1 free bits
    std::vector<std::int8_t> sign(m, 1);
    for (int j = 1; j < m; ++j)
      if ((gray >> (j - 1)) & 1) sign[j] = -1;
    std::vector<double> s(n, 0.0);
    for (int j = 0; j < m; ++j) {
      const double* row = game.cost_row(rows[j]).data();
      const double a = sign[j];
      for (int y = 0; y < n; ++y) s[y] += a * row[y];
    }
    BestSigns best;
    best.consider(abs_sum4(s.data(), n), gray << 1);
    for (std::uint64_t i = begin + 1; i < end; ++i) {
      const int bit = std::countr_zero(i);
      const int j = bit + 1;
      const double coef = -2.0 * sign[j];
      sign[j] = static_cast<std::int8_t>(-sign[j]);
      gray ^= 1ULL << bit;
      const double v =
          update_abs_sum4(s.data(), game.cost_row(rows[j]).data(), coef, n);
      best.consider(v, gray << 1);
    }
    return best;
  };

  return chunked_reduce<BestSigns>(
      chunks, threads, run_chunk,
      [](BestSigns a, const BestSigns& b) { return a.merged(b); });
}

std::vector<std::int8_t> signs_from_mask(const std::vector<int>& rows, std::uint64_t mask,
                                         int n) {
  std::vector<std::int8_t> alice(n, 1);
  for (std::size_t j = 0; j < rows.size(); ++j)
    if ((mask >> j) & 1) alice[rows[j]] = -1;
  return alice;
}

std::vector<double> column_sums(const XorGame& game, const std::vector<int>& rows,
                                const std::vector<std::int8_t>& alice) {
  const int n = game.n();
  std::vector<double> s(n, 0.0);
  for (int r : rows) {
    const double* row = game.cost_row(r).data();
    const double a = alice[r];
    for (int y = 0; y < n; ++y) s[y] += a * row[y];
  }
  return s;
}

std::vector<int> all_rows(int n) {
  std::vector<int> rows(n);
  for (int i = 0; i < n; ++i) rows[i] = i;
  return rows;
}

std::vector<int> mask_rows(std::uint32_t mask) {
  std::vector<int> rows;
  for (std::uint32_t m = mask; m != 0; m &= m - 1) rows.push_back(std::countr_zero(m));
  return rows;
}

}  // namespace

double value_of_alice_signs(const XorGame& game, const std::vector<std::int8_t>& alice) {
  if (static_cast<int>(alice.size()) != game.n())
    throw Error(errc::dimension_mismatch, "alice sign vector has wrong length");
  const auto s = column_sums(game, all_rows(game.n()), alice);
  return abs_sum4(s.data(), game.n());
}

ValueCertificate classical_value(const XorGame& game, const ExactOptions& opt) {
  const int n = game.n();
  if (n > opt.classical_cap)
    throw Error(errc::exact_cap_exceeded,
                "classical_value: n = " + std::to_string(n) + " exceeds exact cap " +
                    std::to_string(opt.classical_cap) + "; use the search module");
  const auto rows = all_rows(n);
  const BestSigns best = enumerate_signs(game, rows, opt.threads);

  ValueCertificate cert;
  cert.alice = signs_from_mask(rows, best.mask, n);
  const auto s = column_sums(game, rows, cert.alice);
  cert.value = abs_sum4(s.data(), n);
  cert.bob.resize(n);
  for (int y = 0; y < n; ++y) cert.bob[y] = s[y] >= 0.0 ? 1 : -1;
  return cert;
}

double block_value(const XorGame& game, std::uint32_t mask, const ExactOptions& opt) {
  if (mask == 0) throw Error(errc::empty_subset, "block_value: empty subset");
  if (mask >> game.n())
    throw Error(errc::index_out_of_range, "block_value: mask has bits outside [n]");
  const auto rows = mask_rows(mask);
  if (static_cast<int>(rows.size()) > opt.classical_cap)
    throw Error(errc::exact_cap_exceeded, "block_value: subset larger than exact cap");
  const BestSigns best = enumerate_signs(game, rows, opt.threads);
  const auto alice = signs_from_mask(rows, best.mask, game.n());
  const auto s = column_sums(game, rows, alice);
  return abs_sum4(s.data(), game.n());
}

BlockValueTable block_value_table(const XorGame& game, const ExactOptions& opt) {
  const int n = game.n();
  if (n > opt.dp_cap)
    throw Error(errc::dp_cap_exceeded, "block_value_table: n = " + std::to_string(n) +
                                           " exceeds DP cap " + std::to_string(opt.dp_cap));
  BlockValueTable table;
  table.n = n;
  const std::uint32_t size = 1u << n;
  table.value.assign(size, 0.0);

  // Each mask is enumerated independently from a fresh start, so the result
  // is the same under any work partition.
  const std::size_t chunks = std::min<std::size_t>(256, size);
  for_each_chunk(chunks, opt.threads, [&](std::size_t ci) {
    const std::uint32_t begin = static_cast<std::uint32_t>(1 + (size - 1) * ci / chunks);
    const std::uint32_t end = static_cast<std::uint32_t>(1 + (size - 1) * (ci + 1) / chunks);
    std::vector<double> s(n);
    for (std::uint32_t mask = begin; mask < end; ++mask) {
      const auto rows = mask_rows(mask);
      const int m = static_cast<int>(rows.size());
      std::fill(s.begin(), s.end(), 0.0);
      {
        const double* row = game.cost_row(rows[0]).data();
        for (int y = 0; y < n; ++y) s[y] = row[y];
      }
      if (m > 1) {
        for (int j = 1; j < m; ++j) {
          const double* row = game.cost_row(rows[j]).data();
          for (int y = 0; y < n; ++y) s[y] += row[y];
        }
      }
      double best = abs_sum4(s.data(), n);
      std::vector<std::int8_t> sign(m, 1);
      const std::uint64_t patterns = 1ULL << (m - 1);
      for (std::uint64_t i = 1; i < patterns; ++i) {
        const int j = std::countr_zero(i) + 1;
        const double coef = -2.0 * sign[j];
        sign[j] = static_cast<std::int8_t>(-sign[j]);
        const double v = update_abs_sum4(s.data(), game.cost_row(rows[j]).data(), coef, n);
        best = std::max(best, v);
      }
      table.value[mask] = best;
    }
  });
  return table;
}

namespace {

PartitionCertificate singleton_certificate(const XorGame& game, int c) {
  const int n = game.n();
  PartitionCertificate cert;
  cert.c = c;
  cert.t = n;
  cert.message_map.resize(n);
  for (int x = 0; x < n; ++x) cert.message_map[x] = x;
  cert.alice.assign(n, 1);
  cert.bob.resize(static_cast<std::size_t>(n) * n);
  double total = 0.0;
  for (int x = 0; x < n; ++x) {
    const double* row = game.cost_row(x).data();
    for (int y = 0; y < n; ++y) cert.bob[static_cast<std::size_t>(x) * n + y] = row[y] >= 0.0 ? 1 : -1;
    total += abs_sum4(row, n);
  }
  cert.value = total;
  return cert;
}

}  // namespace

double partition_value(const XorGame& game, const std::vector<int>& message_map,
                       const std::vector<std::int8_t>& alice) {
  const int n = game.n();
  if (static_cast<int>(message_map.size()) != n || static_cast<int>(alice.size()) != n)
    throw Error(errc::dimension_mismatch, "partition_value: vector lengths must equal n");
  int t = 0;
  for (int m : message_map) t = std::max(t, m + 1);
  std::vector<double> agg(static_cast<std::size_t>(t) * n, 0.0);
  for (int x = 0; x < n; ++x) {
    double* dst = &agg[static_cast<std::size_t>(message_map[x]) * n];
    const double* row = game.cost_row(x).data();
    const double a = alice[x];
    for (int y = 0; y < n; ++y) dst[y] += a * row[y];
  }
  double total = 0.0;
  for (int i = 0; i < t; ++i) total += abs_sum4(&agg[static_cast<std::size_t>(i) * n], n);
  return total;
}

PartitionCertificate one_way_value(const XorGame& game, int c, const ExactOptions& opt) {
  if (c < 0) throw Error(errc::bad_argument, "one_way_value: c must be >= 0");
  if (c >= 30 || (1LL << c) >= game.n()) return singleton_certificate(game, c);
  return one_way_value(game, c, block_value_table(game, opt), opt);
}

PartitionCertificate one_way_value(const XorGame& game, int c, const BlockValueTable& table,
                                   const ExactOptions& opt) {
  const int n = game.n();
  if (c < 0) throw Error(errc::bad_argument, "one_way_value: c must be >= 0");
  if (c >= 30 || (1LL << c) >= n) return singleton_certificate(game, c);
  if (n > opt.dp_cap)
    throw Error(errc::dp_cap_exceeded, "one_way_value: n = " + std::to_string(n) +
                                           " exceeds DP cap " + std::to_string(opt.dp_cap));
  if (table.n != n) throw Error(errc::dimension_mismatch, "one_way_value: table size mismatch");

  const int t = static_cast<int>(1 << c);
  const std::uint32_t full = (1u << n) - 1;

  // dp_j[mask]: best value of a partition of `mask` into at most j blocks.
  // choice 0 means "inherit from j-1"; otherwise the block containing the
  // lowest set bit of mask.
  std::vector<double> prev(table.value);
  std::vector<double> cur(static_cast<std::size_t>(full) + 1);
  std::vector<std::vector<std::uint32_t>> choice(
      t + 1, std::vector<std::uint32_t>());
  for (int j = 2; j <= t; ++j) {
    choice[j].assign(static_cast<std::size_t>(full) + 1, 0);
    cur[0] = 0.0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t rest = mask ^ low;
      double best = prev[mask];
      std::uint32_t best_block = 0;
      std::uint32_t sub = rest;
      for (;;) {
        const std::uint32_t block = sub | low;
        const double cand = table.value[block] + prev[mask ^ block];
        if (cand > best) {
          best = cand;
          best_block = block;
        }
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
      cur[mask] = best;
      choice[j][mask] = best_block;
    }
    std::swap(prev, cur);
  }

  // Backtrack the blocks.
  std::vector<std::uint32_t> blocks;
  std::uint32_t mask = full;
  for (int j = t; j >= 2 && mask != 0; --j) {
    const std::uint32_t b = choice[j][mask];
    if (b != 0) {
      blocks.push_back(b);
      mask ^= b;
    }
  }
  if (mask != 0) blocks.push_back(mask);
  std::sort(blocks.begin(), blocks.end(),
            [](std::uint32_t a, std::uint32_t b) {
              return std::countr_zero(a) < std::countr_zero(b);
            });

  PartitionCertificate cert;
  cert.c = c;
  cert.t = static_cast<int>(blocks.size());
  cert.message_map.assign(n, 0);
  cert.alice.assign(n, 1);
  cert.bob.assign(static_cast<std::size_t>(cert.t) * n, 1);
  double total = 0.0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto rows = mask_rows(blocks[i]);
    for (int r : rows) cert.message_map[r] = static_cast<int>(i);
    const BestSigns best = enumerate_signs(game, rows, opt.threads);
    const auto alice = signs_from_mask(rows, best.mask, n);
    for (int r : rows) cert.alice[r] = alice[r];
    const auto s = column_sums(game, rows, alice);
    for (int y = 0; y < n; ++y)
      cert.bob[i * n + y] = s[y] >= 0.0 ? 1 : -1;
    total += abs_sum4(s.data(), n);
  }
  cert.value = total;
  return cert;
}

double weak_p_norm(const std::vector<std::vector<double>>& vectors, Ambient ambient, double p,
                   int cap) {
  if (vectors.empty()) throw Error(errc::bad_argument, "weak_p_norm: empty vector list");
  if (!(p >= 1.0)) throw Error(errc::bad_argument, "weak_p_norm: p must be >= 1");
  const std::size_t d = vectors.front().size();
  if (d == 0) throw Error(errc::bad_argument, "weak_p_norm: zero-dimensional vectors");
  for (const auto& v : vectors)
    if (v.size() != d)
      throw Error(errc::dimension_mismatch, "weak_p_norm: inconsistent dimensions");

  if (ambient == Ambient::sup_norm) {
    // Dual ball extreme points are +/- e_j.
    double best = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (const auto& v : vectors) acc += std::pow(std::fabs(v[j]), p);
      best = std::max(best, acc);
    }
    return std::pow(best, 1.0 / p);
  }

  // sum_norm ambient: dual ball extreme points are sign vectors; enumerate
  // with the first coordinate fixed (symmetry under global flip).
  if (static_cast<int>(d) > cap)
    throw Error(errc::exact_cap_exceeded,
                "weak_p_norm: dimension " + std::to_string(d) + " exceeds cap " +
                    std::to_string(cap));
  const std::size_t m = vectors.size();
  std::vector<double> dots(m, 0.0);
  std::vector<std::int8_t> sigma(d, 1);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j) dots[i] += vectors[i][j];
  auto objective = [&] {
    double acc = 0.0;
    for (double v : dots) acc += std::pow(std::fabs(v), p);
    return acc;
  };
  double best = objective();
  const std::uint64_t patterns = 1ULL << (d - 1);
  for (std::uint64_t i = 1; i < patterns; ++i) {
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(i)) + 1;
    const double coef = -2.0 * sigma[j];
    sigma[j] = static_cast<std::int8_t>(-sigma[j]);
    for (std::size_t v = 0; v < m; ++v) dots[v] += coef * vectors[v][j];
    best = std::max(best, objective());
  }
  return std::pow(best, 1.0 / p);
}

}  // namespace xg
