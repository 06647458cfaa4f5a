#include <cmath>
#include <numbers>

#include <doctest.h>

#include "helpers.hpp"
#include "xg/bounds.hpp"

using xg::errc;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("frozen constants match their closed forms") {
  const xg::Constants consts;
  const double krivine = std::numbers::pi / (2.0 * std::log(1.0 + std::numbers::sqrt2));
  CHECK(consts.k_g == doctest::Approx(krivine).epsilon(1e-15));
  CHECK(consts.k_g == doctest::Approx(1.7822139781913693).epsilon(1e-15));
  CHECK(consts.chevet_b == std::sqrt(std::numbers::pi / 2.0));
}

TEST_CASE("discrepancy ceiling") {
  CHECK(xg::discrepancy_upper(0.1, 2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(xg::discrepancy_upper(0.2, 0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(xg::discrepancy_upper(0.3, 2) == 1.0);  // clipped
  CHECK(xg::discrepancy_upper(1.0, 30) == 1.0);
  CHECK(xgtest::thrown_code([] { xg::discrepancy_upper(1.5, 1); }) == errc::bad_argument);
  CHECK(xgtest::thrown_code([] { xg::discrepancy_upper(0.5, -1); }) == errc::bad_argument);
}

TEST_CASE("one-way ceiling in terms of the classical value") {
  const xg::Constants consts;
  CHECK(xg::grothendieck_one_way_upper(0.1, 0) ==
        doctest::Approx(0.17822139781913694).epsilon(1e-15));
  CHECK(xg::grothendieck_one_way_upper(0.1, 2) ==
        doctest::Approx(2.0 * consts.k_g * 0.1).epsilon(1e-15));
  CHECK(xg::grothendieck_one_way_upper(0.9, 4) == 1.0);  // clipped
  CHECK(xgtest::thrown_code([] { xg::grothendieck_one_way_upper(-0.1, 1); }) ==
        errc::bad_argument);
}

TEST_CASE("universal one-way floor") {
  const xg::Constants consts;
  // frozen reference points, checked against the formula 2^{c/2}/(K_G sqrt n)
  CHECK(xg::one_way_floor(2, 0) == doctest::Approx(0.3967575105118047).epsilon(1e-15));
  CHECK(xg::one_way_floor(2, 1) == doctest::Approx(0.56109985233918).epsilon(1e-14));
  CHECK(xg::one_way_floor(2, 1) ==
        doctest::Approx(1.0 / consts.k_g).epsilon(1e-15));  // sqrt2 cancels
  // 2 does not divide 3, so the floor halves
  CHECK(xg::one_way_floor(3, 1) ==
        doctest::Approx(0.5 * std::numbers::sqrt2 / (consts.k_g * std::sqrt(3.0)))
            .epsilon(1e-15));
  CHECK(xg::one_way_floor(1, 4) == 1.0);  // capped

  SUBCASE("decreasing in n at fixed c, increasing in c at fixed n") {
    for (int c : {0, 1, 2}) {
      double prev = 1.0;
      for (int n = 1 << c; n <= 64; n += 1 << c) {
        const double f = xg::one_way_floor(n, c);
        CHECK(f <= prev + 1e-15);
        prev = f;
      }
    }
    for (int n : {16, 64}) {
      double prev = 0.0;
      for (int c = 0; (1 << c) <= n; ++c) {
        const double f = xg::one_way_floor(n, c);
        CHECK(f >= prev - 1e-15);
        prev = f;
      }
    }
  }
  CHECK(xgtest::thrown_code([] { xg::one_way_floor(0, 0); }) == errc::bad_argument);
}

TEST_CASE("two-way sandwich assembly") {
  SUBCASE("exact inputs, both routes") {
    // omega known exactly, one-way at c=1 known exactly, and the one-way
    // value at 2 bits equal to 1 (the row-pattern route).
    const xg::BoundReport r = xg::two_way_sandwich(
        2, 1, xg::ValuePair{0.5, 0.5}, xg::ValuePair{1.0, 1.0}, xg::ValuePair{1.0, 1.0});
    CHECK(r.two_way_lower == 1.0);
    CHECK(r.two_way_upper == 1.0);
    CHECK(r.block_size_exact);
    CHECK(r.discrepancy_upper == 1.0);
  }
  SUBCASE("discrepancy route tightens the ceiling") {
    const xg::BoundReport r =
        xg::two_way_sandwich(8, 1, xg::ValuePair{0.2, 0.2}, xg::ValuePair{0.25, 0.25});
    CHECK(r.two_way_lower == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(r.two_way_upper == doctest::Approx(0.4).epsilon(1e-15));  // 2^c omega
  }
  SUBCASE("row-pattern route tightens further") {
    const xg::BoundReport r = xg::two_way_sandwich(
        8, 1, xg::ValuePair{0.2, 0.2}, xg::ValuePair{0.25, 0.25}, xg::ValuePair{0.3, 0.3});
    CHECK(r.two_way_upper == doctest::Approx(0.3).epsilon(1e-15));
  }
  SUBCASE("heuristic inputs keep a safe upper bound") {
    const xg::BoundReport r =
        xg::two_way_sandwich(16, 2, xg::ValuePair{0.3, 1.0}, xg::ValuePair{0.4, 1.0});
    CHECK(r.two_way_lower == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.two_way_upper == 1.0);
  }
  SUBCASE("inconsistent enclosures are rejected") {
    CHECK(xgtest::thrown_code([] {
            xg::two_way_sandwich(4, 1, xg::ValuePair{0.1, 0.1}, xg::ValuePair{0.9, 0.9},
                                 xg::ValuePair{0.2, 0.2});
          }) == errc::inconsistent_inputs);
  }
  SUBCASE("fp dust inside the tolerance is absorbed") {
    const xg::BoundReport r = xg::two_way_sandwich(
        4, 0, xg::ValuePair{0.5, 0.5}, xg::ValuePair{0.5 + 5e-10, 0.5 + 5e-10},
        xg::ValuePair{0.5, 0.5});
    CHECK(r.two_way_lower == r.two_way_upper);
  }
}

TEST_SUITE_END();
