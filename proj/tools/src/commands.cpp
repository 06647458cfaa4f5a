#include "xgcli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "xg/bounds.hpp"
#include "xg/constructions.hpp"
#include "xg/errors.hpp"
#include "xg/exact.hpp"
#include "xg/game.hpp"
#include "xg/parallel.hpp"
#include "xg/rng.hpp"
#include "xg/search.hpp"

namespace xg::cli {

namespace {

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error(errc::io_error, "failed writing " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json signs_json(const std::vector<std::int8_t>& signs) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::int8_t s : signs) arr.push_back(static_cast<int>(s));
  return arr;
}

int ceil_log2(int n) {
  int c = 0;
  while ((1LL << c) < n) ++c;
  return c;
}

std::uint64_t require_seed(bool has_seed, std::uint64_t seed, const char* what) {
  if (!has_seed) {
    throw Error(errc::bad_argument, std::string(what) + " is randomized and needs --seed");
  }
  return seed;
}

}  // namespace

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json cmd_solve(const SolveConfig& config) {
  const XorGame game = load_game(config.game_path);
  const int n = game.n();
  ExactOptions opt;
  opt.threads = config.threads;

  std::vector<int> cs = config.cs;
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  for (int c : cs) {
    if (c < 0) throw Error(errc::bad_argument, "message bits must be nonnegative");
  }

  auto needs_dp = [&](int c) { return c < 31 && (1LL << c) < n; };
  bool exact_feasible = n <= opt.classical_cap;
  for (int c : cs) {
    if (needs_dp(c) && n > opt.dp_cap) exact_feasible = false;
  }

  std::string method = config.method;
  if (method == "auto") method = exact_feasible ? "exact" : "heuristic";
  if (method != "exact" && method != "heuristic") {
    throw Error(errc::bad_argument, "method must be exact, heuristic, or auto");
  }

  nlohmann::json report;
  report["n"] = n;
  report["method"] = method;
  report["is_exact"] = method == "exact";

  ValuePair omega;
  nlohmann::json one_way = nlohmann::json::object();
  nlohmann::json sandwich = nlohmann::json::object();

  if (method == "exact") {
    const ValueCertificate cert = classical_value(game, opt);
    omega = ValuePair{cert.value, cert.value};
    report["omega"] = {{"lower", cert.value},
                       {"upper", cert.value},
                       {"alice", signs_json(cert.alice)},
                       {"bob", signs_json(cert.bob)}};

    std::optional<BlockValueTable> table;
    auto ensure_table = [&] {
      if (!table) table = block_value_table(game, opt);
    };
    auto exact_one_way = [&](int c) {
      if (!needs_dp(c)) return one_way_value(game, c, opt);
      ensure_table();
      return one_way_value(game, c, *table, opt);
    };

    for (int c : cs) {
      const PartitionCertificate pc = exact_one_way(c);
      one_way[std::to_string(c)] = {{"lower", pc.value},
                                    {"upper", pc.value},
                                    {"t", pc.t},
                                    {"message_map", pc.message_map},
                                    {"alice", signs_json(pc.alice)}};
      // Row-pattern route: the two-way value at c bits is dominated by the
      // one-way value at 2^c bits.
      std::optional<ValuePair> row_route;
      if (c <= 20) {
        const int bits = 1 << c;
        if (!needs_dp(bits)) {
          row_route = ValuePair{1.0, 1.0};
        } else if (n <= opt.dp_cap) {
          ensure_table();
          const double v = one_way_value(game, bits, *table, opt).value;
          row_route = ValuePair{v, v};
        }
      }
      const BoundReport br =
          two_way_sandwich(n, c, omega, ValuePair{pc.value, pc.value}, row_route);
      nlohmann::json bj;
      to_json(bj, br);
      sandwich[std::to_string(c)] = bj;
    }
  } else {
    require_seed(config.has_seed, config.seed, "heuristic solving");
    SearchParams sp;
    sp.restarts = config.restarts;
    sp.seed = config.seed;
    sp.threads = config.threads;

    const ValueCertificate cert = hill_climb_classical(game, sp);
    omega = ValuePair{cert.value, 1.0};
    report["omega"] = {{"lower", cert.value},
                       {"upper", 1.0},
                       {"alice", signs_json(cert.alice)},
                       {"bob", signs_json(cert.bob)}};

    for (int c : cs) {
      const PartitionCertificate pc = anneal_one_way(game, c, sp);
      one_way[std::to_string(c)] = {{"lower", pc.value},
                                    {"upper", 1.0},
                                    {"t", pc.t},
                                    {"message_map", pc.message_map},
                                    {"alice", signs_json(pc.alice)}};
      const BoundReport br =
          two_way_sandwich(n, c, omega, ValuePair{pc.value, 1.0}, std::nullopt);
      nlohmann::json bj;
      to_json(bj, br);
      sandwich[std::to_string(c)] = bj;
    }
  }

  report["one_way"] = std::move(one_way);
  report["sandwich"] = std::move(sandwich);
  if (!config.out.empty()) write_json(config.out, report);
  return report;
}

nlohmann::json cmd_generate(const GenerateConfig& config) {
  if (config.out.empty()) throw Error(errc::bad_argument, "generate needs --out");
  if (config.kind == "chevet") {
    const XorGame game = chevet_full_game(config.n, config.seed);
    save_game(game, config.out);
    return nlohmann::json{{"kind", "chevet"}, {"n", config.n}, {"seed", config.seed},
                          {"path", config.out}};
  }
  if (config.kind == "chevet-block") {
    const XorGame game = chevet_block_game(config.n, config.c, config.seed);
    save_game(game, config.out);
    return nlohmann::json{{"kind", "chevet-block"}, {"n", config.n}, {"c", config.c},
                          {"seed", config.seed},    {"path", config.out}};
  }
  if (config.kind == "levi") {
    const LeviParams params = config.t > 0 ? levi_params(config.delta, config.t, config.epsilon)
                                           : levi_params_bits(config.delta, config.bits,
                                                              config.epsilon);
    const LeviGameReport report =
        levi_game(params, config.rows, config.samples, config.seed, config.threads);
    save_game(report.game, config.out);
    const std::string sidecar =
        config.report_path.empty() ? config.out + ".report.json" : config.report_path;
    save_levi_report(report, sidecar);
    nlohmann::json j;
    to_json(j, report);
    j.erase("game");  // the game file is the authority; keep the sidecar shape
    j["path"] = config.out;
    j["report_path"] = sidecar;
    return j;
  }
  throw Error(errc::bad_argument, "unknown generator: " + config.kind);
}

std::string cmd_experiment_concentration(const ConcentrationConfig& config) {
  ExactOptions opt;
  if (config.n > opt.classical_cap) {
    throw Error(errc::exact_cap_exceeded,
                "concentration needs exact values; n <= " + std::to_string(opt.classical_cap));
  }
  if (config.samples < 100) throw Error(errc::bad_argument, "need at least 100 samples");
  for (double r : config.rs) {
    if (!(r >= 0.0)) throw Error(errc::bad_argument, "tail radii must be nonnegative");
  }
  if (config.out.empty()) throw Error(errc::bad_argument, "experiment needs --out");

  std::vector<double> omegas(config.samples);
  ExactOptions inner;
  inner.threads = 1;
  for_each_chunk(static_cast<std::size_t>(config.samples), config.threads, [&](std::size_t i) {
    const XorGame game = chevet_full_game(config.n, derive_seed(config.seed, i, 9));
    omegas[i] = classical_value(game, inner).value;
  });

  std::vector<double> sorted = omegas;
  std::sort(sorted.begin(), sorted.end());
  const double median =
      0.5 * (sorted[(sorted.size() - 1) / 2] + sorted[sorted.size() / 2]);

  std::string csv = "kind,index,r,value,bound\n";
  csv += "n,,," + std::to_string(config.n) + ",\n";
  csv += "samples,,," + std::to_string(config.samples) + ",\n";
  csv += "median,,," + g17(median) + ",\n";
  for (int i = 0; i < config.samples; ++i) {
    csv += "sample," + std::to_string(i) + ",," + g17(omegas[i]) + ",\n";
  }
  const double nn = static_cast<double>(config.n) * config.n;
  for (double r : config.rs) {
    int exceed = 0;
    for (double w : omegas) {
      if (std::fabs(w - median) >= r) ++exceed;
    }
    const double tail = static_cast<double>(exceed) / config.samples;
    const double bound = 2.0 * std::exp(-nn * r * r / 2.0);
    csv += "tail,," + g17(r) + "," + g17(tail) + "," + g17(bound) + "\n";
  }
  write_text(config.out, csv);

  if (!config.plot.empty()) {
    write_text(config.plot,
               "#!/usr/bin/env python3\n"
               "\"\"\"Histogram of exact game values plus tail fractions vs the\n"
               "concentration bound, from the CSV emitted alongside this script.\"\"\"\n"
               "import csv\n"
               "import matplotlib\n"
               "matplotlib.use(\"Agg\")\n"
               "import matplotlib.pyplot as plt\n\n"
               "CSV = \"" + config.out + "\"\n\n"
               "samples, tails = [], []\n"
               "median = None\n"
               "with open(CSV) as fh:\n"
               "    for row in csv.DictReader(fh):\n"
               "        if row[\"kind\"] == \"sample\":\n"
               "            samples.append(float(row[\"value\"]))\n"
               "        elif row[\"kind\"] == \"median\":\n"
               "            median = float(row[\"value\"])\n"
               "        elif row[\"kind\"] == \"tail\":\n"
               "            tails.append((float(row[\"r\"]), float(row[\"value\"]),\n"
               "                          float(row[\"bound\"])))\n\n"
               "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))\n"
               "ax1.hist(samples, bins=40)\n"
               "ax1.axvline(median, color=\"k\", linestyle=\"--\", label=\"median\")\n"
               "ax1.set_xlabel(\"exact value\")\n"
               "ax1.legend()\n"
               "rs = [t[0] for t in tails]\n"
               "ax2.semilogy([r for r in rs], [max(t[1], 1e-12) for t in tails],\n"
               "             \"o-\", label=\"empirical tail\")\n"
               "ax2.semilogy(rs, [t[2] for t in tails], \"s--\", label=\"bound\")\n"
               "ax2.set_xlabel(\"r\")\n"
               "ax2.legend()\n"
               "fig.tight_layout()\n"
               "fig.savefig(CSV + \".png\", dpi=150)\n");
  }
  return csv;
}

std::string cmd_experiment_tightness(const TightnessConfig& config) {
  ExactOptions opt;
  if (config.n > opt.dp_cap) {
    throw Error(errc::dp_cap_exceeded,
                "tightness needs exact one-way values; n <= " + std::to_string(opt.dp_cap));
  }
  if (config.games < 1) throw Error(errc::bad_argument, "need at least one game per kind");
  if (config.out.empty()) throw Error(errc::bad_argument, "experiment needs --out");

  const int n = config.n;
  const int cmax = ceil_log2(n);
  const Constants consts;
  ExactOptions inner;
  inner.threads = 1;

  auto make_rows = [&](const char* kind, int c, int seed_index,
                       const PartitionCertificate& pc, double omega) {
    const double ratio = pc.value / omega;
    const double ratio_bound = consts.k_g * std::exp2(0.5 * c);
    const double scaled = pc.value * std::sqrt(static_cast<double>(n)) / std::exp2(0.5 * c);
    const double floor = one_way_floor(n, c, consts);
    const bool pass_a = ratio <= ratio_bound + 1e-12;
    const bool pass_b = pc.value >= floor - 1e-12;
    std::string row = std::string(kind) + "," + std::to_string(n) + "," + std::to_string(c) +
                      "," + std::to_string(seed_index) + "," + g17(omega) + "," + g17(pc.value) +
                      "," + std::to_string(pc.t) + "," + g17(ratio) + "," + g17(ratio_bound) +
                      "," + g17(scaled) + "," + g17(floor) + "," + (pass_a ? "1" : "0") + "," +
                      (pass_b ? "1" : "0") + "\n";
    return row;
  };

  // One slot per seed; each slot emits the full-game rows for every c plus
  // the block-game rows for every feasible block size.
  std::vector<std::string> slots(config.games);
  for_each_chunk(static_cast<std::size_t>(config.games), config.threads, [&](std::size_t s) {
    std::string out;
    {
      const XorGame game = chevet_full_game(n, derive_seed(config.seed, s, 10));
      const double omega = classical_value(game, inner).value;
      const BlockValueTable table = block_value_table(game, inner);
      for (int c = 0; c <= cmax; ++c) {
        const PartitionCertificate pc = one_way_value(game, c, table, inner);
        out += make_rows("chevet", c, static_cast<int>(s), pc, omega);
      }
    }
    for (int c = 0; (1 << c) <= n; ++c) {
      const XorGame game = chevet_block_game(n, c, derive_seed(config.seed, s, 11));
      const double omega = classical_value(game, inner).value;
      const PartitionCertificate pc = one_way_value(game, c, inner);
      out += make_rows("chevet-block", c, static_cast<int>(s), pc, omega);
    }
    slots[s] = std::move(out);
  });

  std::string csv =
      "kind,n,c,seed,omega,one_way,t,ratio,ratio_bound,scaled_one_way,floor,pass_a,pass_b\n";
  for (const std::string& s : slots) csv += s;
  write_text(config.out, csv);

  if (!config.plot.empty()) {
    write_text(config.plot,
               "#!/usr/bin/env python3\n"
               "\"\"\"Ratio of one-way to classical value per message budget, against\n"
               "the Grothendieck-type ceiling, from the CSV next to this script.\"\"\"\n"
               "import csv\n"
               "import matplotlib\n"
               "matplotlib.use(\"Agg\")\n"
               "import matplotlib.pyplot as plt\n\n"
               "CSV = \"" + config.out + "\"\n\n"
               "rows = []\n"
               "with open(CSV) as fh:\n"
               "    rows = list(csv.DictReader(fh))\n\n"
               "fig, ax = plt.subplots(figsize=(6, 4))\n"
               "for kind, marker in ((\"chevet\", \"o\"), (\"chevet-block\", \"s\")):\n"
               "    cs = [int(r[\"c\"]) for r in rows if r[\"kind\"] == kind]\n"
               "    ratios = [float(r[\"ratio\"]) for r in rows if r[\"kind\"] == kind]\n"
               "    ax.scatter(cs, ratios, marker=marker, alpha=0.4, label=kind)\n"
               "bounds = sorted({(int(r[\"c\"]), float(r[\"ratio_bound\"])) for r in rows})\n"
               "ax.plot([b[0] for b in bounds], [b[1] for b in bounds], \"k--\",\n"
               "        label=\"K_G 2^{c/2}\")\n"
               "ax.set_xlabel(\"message bits c\")\n"
               "ax.set_ylabel(\"one_way / omega\")\n"
               "ax.legend()\n"
               "fig.tight_layout()\n"
               "fig.savefig(CSV + \".png\", dpi=150)\n");
  }
  return csv;
}

std::string cmd_experiment_chevet(const ChevetConfig& config) {
  ExactOptions opt;
  for (int n : config.ns) {
    if (n < 1) throw Error(errc::bad_argument, "game sizes must be positive");
    if (n > opt.classical_cap) {
      throw Error(errc::exact_cap_exceeded,
                  "chevet experiment needs exact values; n <= " +
                      std::to_string(opt.classical_cap));
    }
  }
  if (config.samples < 100) throw Error(errc::bad_argument, "need at least 100 samples");
  if (config.out.empty()) throw Error(errc::bad_argument, "experiment needs --out");

  const Constants consts;
  ExactOptions inner;
  inner.threads = 1;
  std::string csv = "n,samples,mean_raw_max,std_error,bound,margin,mean_omega\n";
  for (int n : config.ns) {
    std::vector<double> omegas(config.samples);
    for_each_chunk(static_cast<std::size_t>(config.samples), config.threads, [&](std::size_t i) {
      const XorGame game = chevet_full_game(n, derive_seed(config.seed, i, 1000 + n));
      omegas[i] = classical_value(game, inner).value;
    });
    const double nn = static_cast<double>(n) * n;
    KahanSum mean_sum;
    for (double w : omegas) mean_sum.add(nn * w);
    const double mean = mean_sum.value() / config.samples;
    KahanSum var_sum;
    for (double w : omegas) {
      const double d = nn * w - mean;
      var_sum.add(d * d);
    }
    const double se = std::sqrt(var_sum.value() / (config.samples - 1)) /
                      std::sqrt(static_cast<double>(config.samples));
    const double bound = 2.0 * consts.chevet_b * std::pow(static_cast<double>(n), 1.5);
    KahanSum omega_sum;
    for (double w : omegas) omega_sum.add(w);
    csv += std::to_string(n) + "," + std::to_string(config.samples) + "," + g17(mean) + "," +
           g17(se) + "," + g17(bound) + "," + g17(bound - mean) + "," +
           g17(omega_sum.value() / config.samples) + "\n";
  }
  write_text(config.out, csv);

  if (!config.plot.empty()) {
    write_text(config.plot,
               "#!/usr/bin/env python3\n"
               "\"\"\"Mean raw bilinear maximum vs the sqrt(pi/2) ceiling on a log-log\n"
               "scale, from the CSV next to this script.\"\"\"\n"
               "import csv\n"
               "import matplotlib\n"
               "matplotlib.use(\"Agg\")\n"
               "import matplotlib.pyplot as plt\n\n"
               "CSV = \"" + config.out + "\"\n\n"
               "with open(CSV) as fh:\n"
               "    rows = list(csv.DictReader(fh))\n\n"
               "ns = [int(r[\"n\"]) for r in rows]\n"
               "means = [float(r[\"mean_raw_max\"]) for r in rows]\n"
               "bounds = [float(r[\"bound\"]) for r in rows]\n"
               "fig, ax = plt.subplots(figsize=(6, 4))\n"
               "ax.loglog(ns, means, \"o-\", label=\"mean raw max\")\n"
               "ax.loglog(ns, bounds, \"s--\", label=\"2 sqrt(pi/2) n^{3/2}\")\n"
               "ax.set_xlabel(\"n\")\n"
               "ax.legend()\n"
               "fig.tight_layout()\n"
               "fig.savefig(CSV + \".png\", dpi=150)\n");
  }
  return csv;
}

nlohmann::json cmd_experiment_bell(const BellConfig& config) {
  if (config.rows > 8192) {
    throw Error(errc::bad_dimensions, "rows > 8192 exceeds the memory budget for a full game");
  }
  const std::int64_t t =
      config.t > 0 ? config.t
                   : (config.bits >= 0 && config.bits <= 5
                          ? std::int64_t{1} << (1 << config.bits)
                          : throw Error(errc::bad_argument, "bits must lie in [0,5]"));
  const LeviParams params = levi_params(config.delta, t, config.epsilon);
  const LeviGameReport report =
      levi_game(params, config.rows, config.samples, config.seed, config.threads);

  SearchParams sp;
  sp.restarts = config.restarts;
  sp.seed = derive_seed(config.seed, 2, 8);
  sp.threads = config.threads;
  const ValueCertificate hc = hill_climb_classical(report.game, sp);

  ValuePair one_way_c{report.omega_interval.lower, 1.0};
  std::optional<ValuePair> row_route;
  if (config.bits >= 0 && config.bits <= 5 && t >= (std::int64_t{1} << (1 << config.bits))) {
    row_route = report.one_way_interval;
  }
  const BoundReport sandwich = two_way_sandwich(config.rows, config.bits,
                                                report.omega_interval, one_way_c, row_route);

  const double widen = report.distortion.upper / report.distortion.lower;
  auto contains = [widen](const ValuePair& iv, double v) {
    return v >= iv.lower / widen - 1e-12 && v <= iv.upper * widen + 1e-12;
  };

  nlohmann::json j;
  j["delta"] = config.delta;
  j["bits"] = config.bits;
  j["t"] = t;
  j["epsilon"] = config.epsilon;
  j["rows"] = config.rows;
  j["samples"] = config.samples;
  j["seed"] = config.seed;
  j["restarts"] = config.restarts;
  to_json(j["params"], report.params);
  to_json(j["distortion"], report.distortion);
  j["pi1_of_T"] = report.pi1_of_T;
  j["omega_interval"] = {report.omega_interval.lower, report.omega_interval.upper};
  j["one_way_interval"] = {report.one_way_interval.lower, report.one_way_interval.upper};
  j["two_way_interval"] = {sandwich.two_way_lower, sandwich.two_way_upper};
  j["heuristic_omega"] = hc.value;
  j["heuristic_in_omega_interval"] = hc.value >= report.omega_interval.lower - 1e-9 &&
                                     hc.value <= report.omega_interval.upper + 1e-9;
  j["widen_ratio"] = widen;
  j["delta_in_omega"] = contains(report.omega_interval, config.delta);
  j["delta_in_one_way"] = contains(report.one_way_interval, config.delta);
  j["delta_in_two_way"] =
      contains(ValuePair{sandwich.two_way_lower, sandwich.two_way_upper}, config.delta);
  if (!config.out.empty()) write_json(config.out, j);
  return j;
}

}  // namespace xg::cli
