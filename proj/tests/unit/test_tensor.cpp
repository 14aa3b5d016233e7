#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cavesim/tensor.hpp"
#include "../support/oracles.hpp"

using namespace cavesim;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("lame parameters from E and nu") {
  const LameParameters rock = lame_parameters(2.9e10, 0.3);
  CHECK(rock.lambda == doctest::Approx(1.67308e10).epsilon(1e-5));
  CHECK(rock.mu == doctest::Approx(1.11538e10).epsilon(1e-5));

  const LameParameters nu0 = lame_parameters(7.0, 0.0);
  CHECK(nu0.lambda == 0.0);
  CHECK(nu0.mu == 3.5);

  const LameParameters quarter = lame_parameters(1.0, 0.25);
  CHECK(quarter.lambda == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(quarter.mu == doctest::Approx(0.4).epsilon(1e-14));

  CHECK_THROWS_AS(lame_parameters(0.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(lame_parameters(-1.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(lame_parameters(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lame_parameters(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("spherical/deviatoric split") {
  const SphDev2 id = sph_dev_split(SymTensor2::identity());
  CHECK(id.spherical.xx == 1.0);
  CHECK(id.deviatoric.norm2() == 0.0);

  const SymTensor2 shear{0.0, 0.0, 0.7};
  const SphDev2 sh = sph_dev_split(shear);
  CHECK(sh.spherical.norm2() == 0.0);
  CHECK(sh.deviatoric.xy == 0.7);

  std::mt19937 rng(101);
  for (int i = 0; i < 100; ++i) {
    const SymTensor2 t2 = testing::random_sym2(rng, 3.0);
    const SphDev2 sd2 = sph_dev_split(t2);
    CHECK(std::abs(sd2.spherical.ddot(sd2.deviatoric)) <= 1e-12 * std::max(t2.norm2(), 1.0));
    const SymTensor2 sum2 = sd2.spherical + sd2.deviatoric;
    CHECK(sum2.xx == doctest::Approx(t2.xx).epsilon(1e-15));
    CHECK(sum2.xy == t2.xy);
    CHECK(std::abs(sd2.deviatoric.trace()) <= 1e-15 * std::max(1.0, std::abs(t2.trace())));

    const SymTensor3 t3 = testing::random_sym3(rng, 3.0);
    const SphDev3 sd3 = sph_dev_split(t3);
    CHECK(std::abs(sd3.spherical.ddot(sd3.deviatoric)) <= 1e-12 * std::max(t3.norm2(), 1.0));
    const SymTensor3 sum3 = sd3.spherical + sd3.deviatoric;
    CHECK(sum3.yy == doctest::Approx(t3.yy).epsilon(1e-15));
  }
}

TEST_CASE("principal stresses 2d") {
  const auto diag = principal_stresses(SymTensor2{2.0, 0.0, 0.0});
  CHECK(diag[0] == 2.0);
  CHECK(diag[1] == 0.0);

  const auto shear = principal_stresses(SymTensor2{0.0, 0.0, 1.5});
  CHECK(shear[0] == doctest::Approx(1.5));
  CHECK(shear[1] == doctest::Approx(-1.5));

  std::mt19937 rng(102);
  for (int i = 0; i < 500; ++i) {
    const SymTensor2 s = testing::random_sym2(rng, 10.0);
    const auto [l1, l2] = principal_stresses(s);
    CHECK(l1 >= l2);
    CHECK(l1 + l2 == doctest::Approx(s.trace()).epsilon(1e-12));
    CHECK(l1 * l2 == doctest::Approx(s.det()).epsilon(1e-12).scale(std::max(1.0, s.norm2())));
  }
}

TEST_CASE("principal stresses 3d") {
  auto sorted = principal_stresses(SymTensor3{3.0, 2.0, 1.0, 0.0, 0.0, 0.0});
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sorted[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(sorted[2] == doctest::Approx(3.0).epsilon(1e-12));

  const auto hydro = principal_stresses(5.0 * SymTensor3::identity());
  CHECK(hydro[0] == 5.0);
  CHECK(hydro[1] == 5.0);
  CHECK(hydro[2] == 5.0);

  std::mt19937 rng(103);
  for (int i = 0; i < 1000; ++i) {
    const SymTensor3 s = testing::random_sym3(rng, 10.0);
    auto mine = principal_stresses(s);
    std::sort(mine.begin(), mine.end());
    const auto ref = testing::characteristic_roots(s);
    const double scale = std::sqrt(s.norm2());
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(mine[k] - ref[k]) <= 1e-9 * scale);
    }
    // Invariants reproduced.
    CHECK(mine[0] + mine[1] + mine[2] == doctest::Approx(s.trace()).epsilon(1e-12).scale(scale));
    CHECK(mine[0] * mine[1] * mine[2] ==
          doctest::Approx(s.det()).epsilon(1e-11).scale(std::max(1.0, scale * scale * scale)));
  }
}

TEST_CASE("max shear") {
  CHECK(max_shear(3.0 * SymTensor2::identity()) == 0.0);
  CHECK(max_shear(-2.0 * SymTensor3::identity()) == doctest::Approx(0.0));
  CHECK(max_shear(SymTensor2{0.0, 0.0, -0.4}) == doctest::Approx(0.4));

  std::mt19937 rng(104);
  for (int i = 0; i < 200; ++i) {
    const SymTensor2 s2 = testing::random_sym2(rng, 5.0);
    const auto [l1, l2] = principal_stresses(s2);
    CHECK(max_shear(s2) == doctest::Approx(0.5 * (l1 - l2)).epsilon(1e-12));
  }

  // 3D: sqrt(3p) is the Mohr-circle radius bound. It equals half the largest
  // eigenvalue gap exactly for spectra symmetric about their mean, and brackets
  // it within a factor sqrt(3)/2 in general.
  for (int i = 0; i < 200; ++i) {
    std::uniform_real_distribution<double> u(0.1, 5.0);
    const double sv = u(rng);
    const SymTensor3 balanced = testing::random_rotate(
        rng, SymTensor3{sv, 0.0, -sv, 0.0, 0.0, 0.0});
    auto lb = principal_stresses(balanced);
    std::sort(lb.begin(), lb.end());
    CHECK(max_shear(balanced) == doctest::Approx(0.5 * (lb[2] - lb[0])).epsilon(1e-9));

    const SymTensor3 general = testing::random_sym3(rng, 5.0);
    auto lg = principal_stresses(general);
    std::sort(lg.begin(), lg.end());
    const double half_gap = 0.5 * (lg[2] - lg[0]);
    const double bound = max_shear(general);
    CHECK(half_gap <= bound * (1.0 + 1e-12));
    CHECK(half_gap >= bound * (std::sqrt(3.0) / 2.0 - 1e-12));
  }
}

TEST_CASE("shear-compression measure") {
  // Pure compression never triggers in either dimension: -c n p^2.
  const double p = 3.7;
  const double kappa = 1.3;
  CHECK(shear_compression_measure(-p * SymTensor2::identity(), kappa) ==
        doctest::Approx(-kappa * 2.0 * p * p).epsilon(1e-14));
  CHECK(shear_compression_measure(SymTensor2{0.0, 0.0, 2.0}, kappa) ==
        doctest::Approx(8.0).epsilon(1e-14));  // 2 s^2

  const double m = -4.2;
  CHECK(shear_compression_measure(m * SymTensor3::identity(), 1.0) ==
        doctest::Approx(-2.0 * m * m).epsilon(1e-14));

  std::mt19937 rng(105);
  for (int i = 0; i < 200; ++i) {
    const SymTensor2 s2 = testing::random_sym2(rng, 4.0);
    const double v2 = shear_compression_measure(s2, kappa);
    const double r2 = shear_compression_measure(testing::random_rotate(rng, s2), kappa);
    CHECK(r2 == doctest::Approx(v2).epsilon(1e-9).scale(std::max(1.0, s2.norm2())));

    const SymTensor3 s3 = testing::random_sym3(rng, 4.0);
    const double v3 = shear_compression_measure(s3, kappa);
    const double r3 = shear_compression_measure(testing::random_rotate(rng, s3), kappa);
    CHECK(r3 == doctest::Approx(v3).epsilon(1e-9).scale(std::max(1.0, s3.norm2())));

    // Quadratic scaling under s -> t s.
    const double t = 2.5;
    CHECK(shear_compression_measure(t * s2, kappa) ==
          doctest::Approx(t * t * v2).epsilon(1e-12).scale(std::max(1.0, s2.norm2())));
  }
}

TEST_SUITE_END();
