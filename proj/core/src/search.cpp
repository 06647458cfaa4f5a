#include "xg/search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "xg/errors.hpp"
#include "xg/parallel.hpp"
#include "xg/rng.hpp"

namespace xg {

namespace {

constexpr double kFlipTol = 1e-14;  // accept a local move only past FP noise

void validate_params(const SearchParams& p) {
  if (p.restarts < 1) throw Error(errc::bad_argument, "restarts must be >= 1");
  if (p.max_iters < 0) throw Error(errc::bad_argument, "max_iters must be >= 0");
  if (!(p.decay > 0.0) || !(p.decay < 1.0)) {
    throw Error(errc::bad_argument, "temperature decay must lie in (0,1)");
  }
  if (!(p.t0 > 0.0)) throw Error(errc::bad_argument, "initial temperature must be positive");
  if (p.relaxation_rank < 1) throw Error(errc::bad_argument, "relaxation rank must be >= 1");
  if (p.sweeps < 1) throw Error(errc::bad_argument, "sweeps must be >= 1");
}

// Deterministic preference order: larger value, then lexicographically
// smaller Alice signs, so reductions do not depend on scheduling.
bool better_cert(const ValueCertificate& a, const ValueCertificate& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.alice < b.alice;
}

bool better_cert(const PartitionCertificate& a, const PartitionCertificate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.message_map != b.message_map) return a.message_map < b.message_map;
  return a.alice < b.alice;
}

// Fresh certificate from Alice signs: canonical global sign, Bob best
// responses with ties to +1, compensated value sum.
ValueCertificate finish_classical(const XorGame& game, std::vector<std::int8_t> a) {
  const int n = game.n();
  if (a[0] == -1) {
    for (auto& s : a) s = static_cast<std::int8_t>(-s);
  }
  ValueCertificate cert;
  cert.alice = std::move(a);
  cert.bob.assign(n, 1);
  KahanSum total;
  for (int y = 0; y < n; ++y) {
    double col = 0.0;
    for (int x = 0; x < n; ++x) col += cert.alice[x] * game.cost(x, y);
    if (col < 0.0) cert.bob[y] = -1;
    total.add(std::fabs(col));
  }
  cert.value = total.value();
  return cert;
}

// First-improvement single-flip descent on Alice signs. The flip guard only
// exists to bound pathological FP cycling; real instances converge in a few
// passes.
ValueCertificate climb_from(const XorGame& game, std::vector<std::int8_t> a) {
  const int n = game.n();
  std::vector<double> s(n, 0.0);
  for (int y = 0; y < n; ++y) {
    double col = 0.0;
    for (int x = 0; x < n; ++x) col += a[x] * game.cost(x, y);
    s[y] = col;
  }
  long flips = 0;
  const long flip_guard = 1000L * n + 10000;
  bool improved = true;
  while (improved && flips < flip_guard) {
    improved = false;
    for (int x = 0; x < n; ++x) {
      const double* row = game.cost_row(x).data();
      const double coef = -2.0 * a[x];
      double delta = 0.0;
      for (int y = 0; y < n; ++y) delta += std::fabs(s[y] + coef * row[y]) - std::fabs(s[y]);
      if (delta > kFlipTol) {
        for (int y = 0; y < n; ++y) s[y] += coef * row[y];
        a[x] = static_cast<std::int8_t>(-a[x]);
        improved = true;
        ++flips;
      }
    }
  }
  return finish_classical(game, std::move(a));
}

// Mutable annealing state: per-message aggregated rows, their L1 norms, and
// the running objective.
struct PartitionState {
  std::vector<int> map;
  std::vector<std::int8_t> a;
  std::vector<double> agg;   // t_max x n
  std::vector<double> msum;  // t_max
  double value = 0.0;
};

void rebuild_state(const XorGame& game, int t_max, PartitionState& st) {
  const int n = game.n();
  st.agg.assign(static_cast<std::size_t>(t_max) * n, 0.0);
  st.msum.assign(t_max, 0.0);
  for (int x = 0; x < n; ++x) {
    const double* row = game.cost_row(x).data();
    double* dst = st.agg.data() + static_cast<std::size_t>(st.map[x]) * n;
    for (int y = 0; y < n; ++y) dst[y] += st.a[x] * row[y];
  }
  st.value = 0.0;
  for (int i = 0; i < t_max; ++i) {
    const double* blk = st.agg.data() + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (int y = 0; y < n; ++y) s += std::fabs(blk[y]);
    st.msum[i] = s;
    st.value += s;
  }
}

double sign_flip_delta(const XorGame& game, const PartitionState& st, int x) {
  const int n = game.n();
  const double* blk = st.agg.data() + static_cast<std::size_t>(st.map[x]) * n;
  const double* row = game.cost_row(x).data();
  const double coef = -2.0 * st.a[x];
  double s = 0.0;
  for (int y = 0; y < n; ++y) s += std::fabs(blk[y] + coef * row[y]);
  return s - st.msum[st.map[x]];
}

void apply_sign_flip(const XorGame& game, PartitionState& st, int x) {
  const int n = game.n();
  const int i = st.map[x];
  double* blk = st.agg.data() + static_cast<std::size_t>(i) * n;
  const double* row = game.cost_row(x).data();
  const double coef = -2.0 * st.a[x];
  double s = 0.0;
  for (int y = 0; y < n; ++y) {
    blk[y] += coef * row[y];
    s += std::fabs(blk[y]);
  }
  st.a[x] = static_cast<std::int8_t>(-st.a[x]);
  st.value += s - st.msum[i];
  st.msum[i] = s;
}

double reassign_delta(const XorGame& game, const PartitionState& st, int x, int to) {
  const int n = game.n();
  const int from = st.map[x];
  const double* src = st.agg.data() + static_cast<std::size_t>(from) * n;
  const double* dst = st.agg.data() + static_cast<std::size_t>(to) * n;
  const double* row = game.cost_row(x).data();
  const double ax = st.a[x];
  double s_from = 0.0, s_to = 0.0;
  for (int y = 0; y < n; ++y) {
    s_from += std::fabs(src[y] - ax * row[y]);
    s_to += std::fabs(dst[y] + ax * row[y]);
  }
  return s_from + s_to - st.msum[from] - st.msum[to];
}

void apply_reassign(const XorGame& game, PartitionState& st, int x, int to) {
  const int n = game.n();
  const int from = st.map[x];
  double* src = st.agg.data() + static_cast<std::size_t>(from) * n;
  double* dst = st.agg.data() + static_cast<std::size_t>(to) * n;
  const double* row = game.cost_row(x).data();
  const double ax = st.a[x];
  double s_from = 0.0, s_to = 0.0;
  for (int y = 0; y < n; ++y) {
    src[y] -= ax * row[y];
    dst[y] += ax * row[y];
    s_from += std::fabs(src[y]);
    s_to += std::fabs(dst[y]);
  }
  st.map[x] = to;
  st.value += s_from + s_to - st.msum[from] - st.msum[to];
  st.msum[from] = s_from;
  st.msum[to] = s_to;
}

// Greedy first-improvement polish over both move types.
void polish_state(const XorGame& game, int t_max, PartitionState& st) {
  const int n = game.n();
  long moves = 0;
  const long guard = 1000L * n + 10000;
  bool improved = true;
  while (improved && moves < guard) {
    improved = false;
    for (int x = 0; x < n; ++x) {
      if (sign_flip_delta(game, st, x) > kFlipTol) {
        apply_sign_flip(game, st, x);
        improved = true;
        ++moves;
      }
      for (int to = 0; to < t_max; ++to) {
        if (to == st.map[x]) continue;
        if (reassign_delta(game, st, x, to) > kFlipTol) {
          apply_reassign(game, st, x, to);
          improved = true;
          ++moves;
        }
      }
    }
  }
}

// Canonical certificate from a partition state: messages relabeled by first
// appearance, each block's leading sign +1, Bob best responses, fresh value.
PartitionCertificate finish_partition(const XorGame& game, int c, const std::vector<int>& map,
                                      const std::vector<std::int8_t>& alice) {
  const int n = game.n();
  PartitionCertificate cert;
  cert.c = c;
  cert.message_map.assign(n, -1);
  std::vector<int> relabel;
  std::vector<int> leader;  // first input of each relabeled block
  for (int x = 0; x < n; ++x) {
    int id = -1;
    for (std::size_t i = 0; i < relabel.size(); ++i) {
      if (relabel[i] == map[x]) {
        id = static_cast<int>(i);
        break;
      }
    }
    if (id < 0) {
      id = static_cast<int>(relabel.size());
      relabel.push_back(map[x]);
      leader.push_back(x);
    }
    cert.message_map[x] = id;
  }
  cert.t = static_cast<int>(relabel.size());
  cert.alice = alice;
  for (int i = 0; i < cert.t; ++i) {
    if (cert.alice[leader[i]] == -1) {
      for (int x = 0; x < n; ++x) {
        if (cert.message_map[x] == i) cert.alice[x] = static_cast<std::int8_t>(-cert.alice[x]);
      }
    }
  }
  cert.bob.assign(static_cast<std::size_t>(cert.t) * n, 1);
  KahanSum total;
  std::vector<double> blk(n);
  for (int i = 0; i < cert.t; ++i) {
    std::fill(blk.begin(), blk.end(), 0.0);
    for (int x = 0; x < n; ++x) {
      if (cert.message_map[x] != i) continue;
      const double* row = game.cost_row(x).data();
      for (int y = 0; y < n; ++y) blk[y] += cert.alice[x] * row[y];
    }
    for (int y = 0; y < n; ++y) {
      if (blk[y] < 0.0) cert.bob[static_cast<std::size_t>(i) * n + y] = -1;
      total.add(std::fabs(blk[y]));
    }
  }
  cert.value = total.value();
  return cert;
}

PartitionCertificate anneal_restart(const XorGame& game, int c, int t_max,
                                    const SearchParams& params, int restart) {
  const int n = game.n();
  PartitionState st;
  st.map.assign(n, 0);
  st.a.assign(n, 1);
  Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(restart), 1));
  if (restart == 0) {
    // Deterministic balanced start.
    for (int x = 0; x < n; ++x) st.map[x] = x % t_max;
  } else {
    for (int x = 0; x < n; ++x) st.map[x] = static_cast<int>(rng.below(t_max));
    for (int x = 1; x < n; ++x) st.a[x] = rng.sign();
  }
  rebuild_state(game, t_max, st);

  std::vector<int> best_map = st.map;
  std::vector<std::int8_t> best_a = st.a;
  double best_value = st.value;

  double temp = params.t0;
  for (int iter = 0; iter < params.max_iters; ++iter, temp *= params.decay) {
    const bool flip_sign = t_max == 1 || rng.below(2) == 0;
    if (flip_sign) {
      const int x = static_cast<int>(rng.below(n));
      const double delta = sign_flip_delta(game, st, x);
      if (delta > 0.0 || rng.uniform() < std::exp(delta / temp)) {
        apply_sign_flip(game, st, x);
      }
    } else {
      const int x = static_cast<int>(rng.below(n));
      int to = static_cast<int>(rng.below(t_max - 1));
      if (to >= st.map[x]) ++to;
      const double delta = reassign_delta(game, st, x, to);
      if (delta > 0.0 || rng.uniform() < std::exp(delta / temp)) {
        apply_reassign(game, st, x, to);
      }
    }
    if (st.value > best_value) {
      best_value = st.value;
      best_map = st.map;
      best_a = st.a;
    }
  }

  st.map = std::move(best_map);
  st.a = std::move(best_a);
  rebuild_state(game, t_max, st);
  polish_state(game, t_max, st);
  return finish_partition(game, c, st.map, st.a);
}

}  // namespace

ValueCertificate hill_climb_classical(const XorGame& game, const SearchParams& params) {
  validate_params(params);
  const int n = game.n();
  return chunked_reduce<ValueCertificate>(
      static_cast<std::size_t>(params.restarts), params.threads,
      [&](std::size_t restart) {
        std::vector<std::int8_t> a(n, 1);
        if (restart != 0) {
          Rng rng(derive_seed(params.seed, restart, 0));
          for (int x = 1; x < n; ++x) a[x] = rng.sign();
        }
        return climb_from(game, std::move(a));
      },
      [](ValueCertificate acc, const ValueCertificate& next) {
        return better_cert(next, acc) ? next : acc;
      });
}

PartitionCertificate anneal_one_way(const XorGame& game, int c, const SearchParams& params) {
  validate_params(params);
  if (c < 0) throw Error(errc::bad_argument, "message bits must be nonnegative");
  const int n = game.n();
  if (c >= 30 || (1LL << c) >= n) {
    // Singleton partition is optimal and needs no search.
    std::vector<int> map(n);
    for (int x = 0; x < n; ++x) map[x] = x;
    return finish_partition(game, c, map, std::vector<std::int8_t>(n, 1));
  }
  const int t_max = 1 << c;
  return chunked_reduce<PartitionCertificate>(
      static_cast<std::size_t>(params.restarts), params.threads,
      [&](std::size_t restart) {
        return anneal_restart(game, c, t_max, params, static_cast<int>(restart));
      },
      [](PartitionCertificate acc, const PartitionCertificate& next) {
        return better_cert(next, acc) ? next : acc;
      });
}

RelaxationResult vector_relaxation(const XorGame& game, const SearchParams& params,
                                   const ValueCertificate* init) {
  validate_params(params);
  const int n = game.n();
  const int r = params.relaxation_rank;
  RelaxationResult res;
  res.rank = r;
  res.alice_vectors.assign(static_cast<std::size_t>(n) * r, 0.0);
  res.bob_vectors.assign(static_cast<std::size_t>(n) * r, 0.0);

  auto normalize = [r](double* v) {
    double sq = 0.0;
    for (int k = 0; k < r; ++k) sq += v[k] * v[k];
    if (sq < 1e-300) {
      for (int k = 0; k < r; ++k) v[k] = 0.0;
      v[0] = 1.0;
      return;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (int k = 0; k < r; ++k) v[k] *= inv;
  };

  if (init != nullptr) {
    if (static_cast<int>(init->alice.size()) != n || static_cast<int>(init->bob.size()) != n) {
      throw Error(errc::dimension_mismatch, "seed certificate does not match game size");
    }
    for (int x = 0; x < n; ++x) res.alice_vectors[static_cast<std::size_t>(x) * r] = init->alice[x];
    for (int y = 0; y < n; ++y) res.bob_vectors[static_cast<std::size_t>(y) * r] = init->bob[y];
  } else {
    Rng rng(derive_seed(params.seed, 0, 3));
    for (double& v : res.alice_vectors) v = rng.gaussian();
    for (double& v : res.bob_vectors) v = rng.gaussian();
    for (int x = 0; x < n; ++x) normalize(res.alice_vectors.data() + static_cast<std::size_t>(x) * r);
    for (int y = 0; y < n; ++y) normalize(res.bob_vectors.data() + static_cast<std::size_t>(y) * r);
  }

  auto objective = [&] {
    KahanSum total;
    std::vector<double> acc(r);
    for (int x = 0; x < n; ++x) {
      const double* row = game.cost_row(x).data();
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int y = 0; y < n; ++y) {
        const double* v = res.bob_vectors.data() + static_cast<std::size_t>(y) * r;
        for (int k = 0; k < r; ++k) acc[k] += row[y] * v[k];
      }
      const double* u = res.alice_vectors.data() + static_cast<std::size_t>(x) * r;
      double dot = 0.0;
      for (int k = 0; k < r; ++k) dot += u[k] * acc[k];
      total.add(dot);
    }
    return total.value();
  };

  double prev = objective();
  std::vector<double> acc(r);
  for (int sweep = 0; sweep < params.sweeps; ++sweep) {
    for (int x = 0; x < n; ++x) {
      const double* row = game.cost_row(x).data();
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int y = 0; y < n; ++y) {
        const double* v = res.bob_vectors.data() + static_cast<std::size_t>(y) * r;
        for (int k = 0; k < r; ++k) acc[k] += row[y] * v[k];
      }
      double* u = res.alice_vectors.data() + static_cast<std::size_t>(x) * r;
      double sq = 0.0;
      for (int k = 0; k < r; ++k) sq += acc[k] * acc[k];
      if (sq >= 1e-300) {
        const double inv = 1.0 / std::sqrt(sq);
        for (int k = 0; k < r; ++k) u[k] = acc[k] * inv;
      }
    }
    for (int y = 0; y < n; ++y) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int x = 0; x < n; ++x) {
        const double g = game.cost(x, y);
        const double* u = res.alice_vectors.data() + static_cast<std::size_t>(x) * r;
        for (int k = 0; k < r; ++k) acc[k] += g * u[k];
      }
      double* v = res.bob_vectors.data() + static_cast<std::size_t>(y) * r;
      double sq = 0.0;
      for (int k = 0; k < r; ++k) sq += acc[k] * acc[k];
      if (sq >= 1e-300) {
        const double inv = 1.0 / std::sqrt(sq);
        for (int k = 0; k < r; ++k) v[k] = acc[k] * inv;
      }
    }
    const double obj = objective();
    if (obj < prev - 1e-9) {
      throw std::logic_error("relaxation ascent regressed: " + std::to_string(prev) + " -> " +
                             std::to_string(obj));
    }
    const bool converged = obj - prev < 1e-12;
    prev = obj;
    if (converged) break;
  }
  res.value = prev;
  return res;
}

ValueCertificate hyperplane_round(const XorGame& game, const std::vector<double>& alice_vectors,
                                  const std::vector<double>& bob_vectors, int rounds,
                                  std::uint64_t seed, unsigned threads) {
  const int n = game.n();
  if (rounds < 1) throw Error(errc::bad_argument, "rounding needs at least one round");
  if (alice_vectors.empty() || alice_vectors.size() % n != 0 ||
      bob_vectors.size() != alice_vectors.size()) {
    throw Error(errc::dimension_mismatch, "vector blocks must be n x rank with matching sizes");
  }
  const int r = static_cast<int>(alice_vectors.size() / n);
  return chunked_reduce<ValueCertificate>(
      static_cast<std::size_t>(rounds), threads,
      [&](std::size_t round) {
        Rng rng(derive_seed(seed, round, 2));
        std::vector<double> dir(r);
        for (double& v : dir) v = rng.gaussian();
        std::vector<std::int8_t> a(n, 1);
        for (int x = 0; x < n; ++x) {
          double dot = 0.0;
          const double* u = alice_vectors.data() + static_cast<std::size_t>(x) * r;
          for (int k = 0; k < r; ++k) dot += u[k] * dir[k];
          a[x] = dot < 0.0 ? -1 : 1;
        }
        return finish_classical(game, std::move(a));
      },
      [](ValueCertificate acc, const ValueCertificate& next) {
        return better_cert(next, acc) ? next : acc;
      });
}

}  // namespace xg
