#include "xg/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>

#include "xg/errors.hpp"
#include "xg/parallel.hpp"
#include "xg/rng.hpp"

namespace xg {

namespace {

void validate_protocol(const XorGame& game, const OneWayProtocol& prot) {
  const int n = game.n();
  if (prot.t < 1) throw Error(errc::bad_argument, "protocol needs at least one message");
  if (static_cast<int>(prot.message_map.size()) != n ||
      static_cast<int>(prot.alice.size()) != n ||
      prot.bob.size() != static_cast<std::size_t>(prot.t) * static_cast<std::size_t>(n)) {
    throw Error(errc::dimension_mismatch, "protocol shape does not match game size");
  }
  for (int m : prot.message_map) {
    if (m < 0 || m >= prot.t) throw Error(errc::index_out_of_range, "message out of range");
  }
  for (std::int8_t s : prot.alice) {
    if (s != 1 && s != -1) throw Error(errc::not_a_sign, "alice entries must be +-1");
  }
  for (std::int8_t s : prot.bob) {
    if (s != 1 && s != -1) throw Error(errc::not_a_sign, "bob entries must be +-1");
  }
}

void validate_partition(const XorGame& game, const RectanglePartition& rect) {
  const int n = game.n();
  std::vector<int> covered(static_cast<std::size_t>(n) * n, 0);
  for (const Rectangle& r : rect) {
    if (r.alice.size() != r.rows.size() || r.bob.size() != r.cols.size()) {
      throw Error(errc::dimension_mismatch, "rectangle sign vectors must align with its sides");
    }
    for (std::int8_t s : r.alice) {
      if (s != 1 && s != -1) throw Error(errc::not_a_sign, "rectangle signs must be +-1");
    }
    for (std::int8_t s : r.bob) {
      if (s != 1 && s != -1) throw Error(errc::not_a_sign, "rectangle signs must be +-1");
    }
    for (int x : r.rows) {
      if (x < 0 || x >= n) throw Error(errc::index_out_of_range, "rectangle row out of range");
      for (int y : r.cols) {
        if (y < 0 || y >= n) throw Error(errc::index_out_of_range, "rectangle col out of range");
        covered[static_cast<std::size_t>(x) * n + y] += 1;
      }
    }
  }
  for (int c : covered) {
    if (c != 1) throw Error(errc::not_a_partition, "rectangles must cover each cell exactly once");
  }
}

}  // namespace

double protocol_value(const XorGame& game, const OneWayProtocol& prot) {
  validate_protocol(game, prot);
  const int n = game.n();
  KahanSum total;
  for (int x = 0; x < n; ++x) {
    const double* row = game.cost_row(x).data();
    const std::int8_t* answers = prot.bob.data() + static_cast<std::size_t>(prot.message_map[x]) * n;
    double ax = prot.alice[x];
    for (int y = 0; y < n; ++y) total.add(ax * answers[y] * row[y]);
  }
  return total.value();
}

OneWayProtocol best_bob_responses(const XorGame& game, const std::vector<int>& message_map,
                                  const std::vector<std::int8_t>& alice) {
  const int n = game.n();
  if (static_cast<int>(message_map.size()) != n || static_cast<int>(alice.size()) != n) {
    throw Error(errc::dimension_mismatch, "message map and alice signs must have one entry per input");
  }
  int t = 1;
  for (int m : message_map) {
    if (m < 0) throw Error(errc::index_out_of_range, "message out of range");
    t = std::max(t, m + 1);
  }
  for (std::int8_t s : alice) {
    if (s != 1 && s != -1) throw Error(errc::not_a_sign, "alice entries must be +-1");
  }
  std::vector<double> agg(static_cast<std::size_t>(t) * n, 0.0);
  for (int x = 0; x < n; ++x) {
    const double* row = game.cost_row(x).data();
    double* dst = agg.data() + static_cast<std::size_t>(message_map[x]) * n;
    for (int y = 0; y < n; ++y) dst[y] += alice[x] * row[y];
  }
  OneWayProtocol prot;
  prot.t = t;
  prot.message_map = message_map;
  prot.alice = alice;
  prot.bob.assign(static_cast<std::size_t>(t) * n, 1);
  for (std::size_t i = 0; i < agg.size(); ++i) {
    if (agg[i] < 0.0) prot.bob[i] = -1;
  }
  return prot;
}

OneWayProtocol enumerate_one_way(const XorGame& game, int c) {
  const int n = game.n();
  if (c < 0) throw Error(errc::bad_argument, "message bits must be nonnegative");
  if (n > 7 || c > 2) {
    throw Error(errc::oracle_cap_exceeded,
                "one-way oracle is capped at n <= 7 and c <= 2, got n = " + std::to_string(n) +
                    ", c = " + std::to_string(c));
  }
  const int t = std::min(1 << c, n);

  std::vector<int> map(n, 0);
  std::vector<std::int8_t> a(n, 1);
  std::vector<double> agg;
  std::vector<double> msum(t, 0.0);

  double best = -1.0;
  std::vector<int> best_map(n, 0);
  std::vector<std::int8_t> best_alice(n, 1);

  const std::uint64_t alice_states = 1ULL << (n - 1);
  while (true) {
    // Fresh aggregation for this message map, Alice all +1.
    std::fill(a.begin(), a.end(), static_cast<std::int8_t>(1));
    agg.assign(static_cast<std::size_t>(t) * n, 0.0);
    for (int x = 0; x < n; ++x) {
      const double* row = game.cost_row(x).data();
      double* dst = agg.data() + static_cast<std::size_t>(map[x]) * n;
      for (int y = 0; y < n; ++y) dst[y] += row[y];
    }
    double value = 0.0;
    for (int i = 0; i < t; ++i) {
      double s = 0.0;
      const double* blk = agg.data() + static_cast<std::size_t>(i) * n;
      for (int y = 0; y < n; ++y) s += std::fabs(blk[y]);
      msum[i] = s;
      value += s;
    }
    if (value > best) {
      best = value;
      best_map = map;
      best_alice = a;
    }
    // Gray walk over Alice signs with input 0 pinned to +1 (a global sign
    // flip never changes the value).
    for (std::uint64_t step = 1; step < alice_states; ++step) {
      const int x = std::countr_zero(step) + 1;
      const int i = map[x];
      double* blk = agg.data() + static_cast<std::size_t>(i) * n;
      const double* row = game.cost_row(x).data();
      const double coef = -2.0 * a[x];
      for (int y = 0; y < n; ++y) blk[y] += coef * row[y];
      a[x] = static_cast<std::int8_t>(-a[x]);
      double s = 0.0;
      for (int y = 0; y < n; ++y) s += std::fabs(blk[y]);
      value += s - msum[i];
      msum[i] = s;
      if (value > best) {
        best = value;
        best_map = map;
        best_alice = a;
      }
    }
    // Odometer increment of the message map, lowest input fastest.
    int pos = 0;
    while (pos < n && ++map[pos] == t) map[pos++] = 0;
    if (pos == n) break;
  }
  return best_bob_responses(game, best_map, best_alice);
}

ValueCertificate naive_classical(const XorGame& game) {
  const int n = game.n();
  if (n > 10) {
    throw Error(errc::oracle_cap_exceeded,
                "classical oracle is capped at n <= 10, got n = " + std::to_string(n));
  }
  std::vector<std::int8_t> a(n, 1);
  std::vector<std::int8_t> b(n, 1);
  std::vector<double> s(n, 0.0);

  double best = -1.0;
  std::vector<std::int8_t> best_alice(n, 1);

  const std::uint64_t alice_states = 1ULL << (n - 1);
  const std::uint64_t bob_states = 1ULL << n;
  for (std::uint64_t am = 0; am < alice_states; ++am) {
    const std::uint64_t gray = am ^ (am >> 1);
    for (int x = 1; x < n; ++x) a[x] = (gray >> (x - 1)) & 1 ? -1 : 1;
    for (int y = 0; y < n; ++y) {
      double col = 0.0;
      for (int x = 0; x < n; ++x) col += a[x] * game.cost(x, y);
      s[y] = col;
    }
    std::fill(b.begin(), b.end(), static_cast<std::int8_t>(1));
    double value = 0.0;
    for (int y = 0; y < n; ++y) value += s[y];
    if (value > best) {
      best = value;
      best_alice = a;
    }
    for (std::uint64_t step = 1; step < bob_states; ++step) {
      const int y = std::countr_zero(step);
      value -= 2.0 * b[y] * s[y];
      b[y] = static_cast<std::int8_t>(-b[y]);
      if (value > best) {
        best = value;
        best_alice = a;
      }
    }
  }

  // Rebuild the certificate from the winning Alice signs with canonical Bob
  // answers (ties to +1); same value, fresh arithmetic.
  ValueCertificate cert;
  cert.alice = best_alice;
  cert.bob.assign(n, 1);
  KahanSum total;
  for (int y = 0; y < n; ++y) {
    double col = 0.0;
    for (int x = 0; x < n; ++x) col += best_alice[x] * game.cost(x, y);
    if (col < 0.0) cert.bob[y] = -1;
    total.add(std::fabs(col));
  }
  cert.value = total.value();
  return cert;
}

double rectangle_value(const XorGame& game, const RectanglePartition& rect) {
  validate_partition(game, rect);
  KahanSum total;
  for (const Rectangle& r : rect) {
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      for (std::size_t j = 0; j < r.cols.size(); ++j) {
        total.add(r.alice[i] * r.bob[j] * game.cost(r.rows[i], r.cols[j]));
      }
    }
  }
  return total.value();
}

OneWayProtocol two_way_to_one_way(const XorGame& game, const RectanglePartition& rect) {
  validate_partition(game, rect);
  const int n = game.n();
  // Sign pattern each input row would produce under the rectangle strategy.
  std::vector<std::vector<std::int8_t>> pattern(n, std::vector<std::int8_t>(n, 1));
  for (const Rectangle& r : rect) {
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      for (std::size_t j = 0; j < r.cols.size(); ++j) {
        pattern[r.rows[i]][r.cols[j]] = static_cast<std::int8_t>(r.alice[i] * r.bob[j]);
      }
    }
  }
  std::map<std::vector<std::int8_t>, int> ids;
  std::vector<int> message_map(n, 0);
  for (int x = 0; x < n; ++x) {
    auto [it, inserted] = ids.emplace(pattern[x], static_cast<int>(ids.size()));
    (void)inserted;
    message_map[x] = it->second;
  }
  // Alice sends only her row pattern; Bob re-optimizes, which can only
  // improve on answering with the pattern itself.
  return best_bob_responses(game, message_map, std::vector<std::int8_t>(n, 1));
}

std::pair<double, double> mixture_value(const XorGame& game, const ProtocolMixture& mix,
                                        int rounds, std::uint64_t seed) {
  if (mix.empty()) throw Error(errc::bad_argument, "mixture must contain at least one protocol");
  if (rounds < 1) throw Error(errc::bad_argument, "mixture estimate needs at least one round");
  KahanSum wsum;
  for (const WeightedProtocol& wp : mix) {
    if (!(wp.weight >= 0.0) || !std::isfinite(wp.weight)) {
      throw Error(errc::bad_argument, "mixture weights must be finite and nonnegative");
    }
    wsum.add(wp.weight);
  }
  if (std::fabs(wsum.value() - 1.0) > 1e-12) {
    throw Error(errc::bad_argument, "mixture weights must sum to 1 within 1e-12");
  }

  std::vector<double> values(mix.size());
  std::vector<double> cumulative(mix.size());
  KahanSum exact;
  double acc = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    values[i] = protocol_value(game, mix[i].protocol);
    exact.add(mix[i].weight * values[i]);
    acc += mix[i].weight;
    cumulative[i] = acc;
  }
  cumulative.back() = 1.0;

  Rng rng(seed);
  KahanSum sampled;
  for (int r = 0; r < rounds; ++r) {
    const double u = rng.uniform();
    std::size_t pick = std::lower_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin();
    if (pick >= values.size()) pick = values.size() - 1;
    sampled.add(values[pick]);
  }
  return {exact.value(), sampled.value() / rounds};
}

void to_json(nlohmann::json& j, const OneWayProtocol& prot) {
  const int n = static_cast<int>(prot.message_map.size());
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < prot.t; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int y = 0; y < n; ++y) row.push_back(static_cast<int>(prot.bob[static_cast<std::size_t>(i) * n + y]));
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{{"t", prot.t}, {"m", prot.message_map},
                     {"a", nlohmann::json::array()}, {"b", std::move(rows)}};
  for (std::int8_t s : prot.alice) j["a"].push_back(static_cast<int>(s));
}

OneWayProtocol protocol_from_json(const nlohmann::json& j) {
  OneWayProtocol prot;
  try {
    prot.t = j.at("t").get<int>();
    prot.message_map = j.at("m").get<std::vector<int>>();
    prot.alice.clear();
    for (const auto& v : j.at("a")) {
      const int s = v.get<int>();
      prot.alice.push_back(static_cast<std::int8_t>(s == 1 ? 1 : (s == -1 ? -1 : 0)));
    }
    prot.bob.clear();
    for (const auto& row : j.at("b")) {
      for (const auto& v : row) {
        const int s = v.get<int>();
        prot.bob.push_back(static_cast<std::int8_t>(s == 1 ? 1 : (s == -1 ? -1 : 0)));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::io_error, std::string("malformed protocol JSON: ") + e.what());
  }
  const std::size_t n = prot.message_map.size();
  if (n == 0 || prot.t < 1 || prot.alice.size() != n ||
      prot.bob.size() != static_cast<std::size_t>(prot.t) * n) {
    throw Error(errc::dimension_mismatch, "protocol JSON has inconsistent shapes");
  }
  for (int m : prot.message_map) {
    if (m < 0 || m >= prot.t) throw Error(errc::index_out_of_range, "message out of range");
  }
  for (std::int8_t s : prot.alice) {
    if (s != 1 && s != -1) throw Error(errc::not_a_sign, "alice entries must be +-1");
  }
  for (std::int8_t s : prot.bob) {
    if (s != 1 && s != -1) throw Error(errc::not_a_sign, "bob entries must be +-1");
  }
  return prot;
}

void save_protocol(const OneWayProtocol& prot, const std::filesystem::path& path) {
  nlohmann::json j;
  to_json(j, prot);
  std::ofstream out(path);
  if (!out) throw Error(errc::io_error, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(errc::io_error, "failed writing " + path.string());
}

OneWayProtocol load_protocol(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::io_error, "cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::io_error, std::string("malformed protocol JSON: ") + e.what());
  }
  return protocol_from_json(j);
}

}  // namespace xg
