#include "xg/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "xg/errors.hpp"

namespace xg {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double pow2(int c) { return std::ldexp(1.0, c); }

}  // namespace

double discrepancy_upper(double omega, int c) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw Error(errc::bad_argument, "discrepancy_upper: omega outside [0,1]");
  if (c < 0) throw Error(errc::bad_argument, "discrepancy_upper: c must be >= 0");
  return std::min(1.0, pow2(c) * omega);
}

double grothendieck_one_way_upper(double omega, int c, const Constants& consts) {
  if (!(omega >= 0.0 && omega <= 1.0))
    throw Error(errc::bad_argument, "grothendieck_one_way_upper: omega outside [0,1]");
  if (c < 0) throw Error(errc::bad_argument, "grothendieck_one_way_upper: c must be >= 0");
  return std::min(1.0, consts.k_g * std::exp2(0.5 * c) * omega);
}

double one_way_floor(int n, int c, const Constants& consts) {
  if (n < 1) throw Error(errc::bad_argument, "one_way_floor: n must be >= 1");
  if (c < 0) throw Error(errc::bad_argument, "one_way_floor: c must be >= 0");
  const bool divides = c < 31 && n % (1 << std::min(c, 30)) == 0;
  double floor = std::exp2(0.5 * c) / (consts.k_g * std::sqrt(static_cast<double>(n)));
  if (!divides) floor *= 0.5;
  return std::min(1.0, floor);
}

BoundReport two_way_sandwich(int n, int c, ValuePair omega, ValuePair one_way_c,
                             std::optional<ValuePair> one_way_pow_c, const Constants& consts) {
  if (c < 0) throw Error(errc::bad_argument, "two_way_sandwich: c must be >= 0");
  BoundReport r;
  r.c = c;
  r.omega = omega.upper;
  r.omega_one_way = one_way_c.upper;
  r.discrepancy_upper = discrepancy_upper(clip01(omega.upper), c);
  r.grothendieck_one_way_upper = grothendieck_one_way_upper(clip01(omega.upper), c, consts);
  r.one_way_floor = one_way_floor(n, c, consts);
  r.block_size_exact = c < 31 && n % (1 << std::min(c, 30)) == 0;

  r.two_way_lower = clip01(one_way_c.lower);
  double upper = std::min(pow2(c) * one_way_c.upper, pow2(c) * omega.upper);
  if (one_way_pow_c) upper = std::min(upper, one_way_pow_c->upper);
  r.two_way_upper = clip01(upper);

  if (r.two_way_lower > r.two_way_upper + 1e-9)
    throw Error(errc::inconsistent_inputs,
                "two_way_sandwich: lower bound exceeds upper bound");
  r.two_way_lower = std::min(r.two_way_lower, r.two_way_upper);
  return r;
}

void to_json(nlohmann::json& j, const BoundReport& r) {
  j = nlohmann::json{{"c", r.c},
                     {"omega", r.omega},
                     {"omega_one_way", r.omega_one_way},
                     {"discrepancy_upper", r.discrepancy_upper},
                     {"grothendieck_one_way_upper", r.grothendieck_one_way_upper},
                     {"one_way_floor", r.one_way_floor},
                     {"two_way_lower", r.two_way_lower},
                     {"two_way_upper", r.two_way_upper},
                     {"block_size_exact", r.block_size_exact}};
}

}  // namespace xg
