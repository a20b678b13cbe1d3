#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "errexp/channel.hpp"
#include "errexp/errors.hpp"
#include "errexp/gallager.hpp"

using namespace errexp;

namespace {
const double kLn2 = std::log(2.0);
}

TEST_CASE("exponent kernel anchors") {
    const DiscreteChannel ch = make_bsc(0.1);
    const InputDistribution u = InputDistribution::uniform(2);
    CHECK(gallager_e0(ch, u, 0.0) == doctest::Approx(0.0).epsilon(1e-14));
    // closed form at unit parameter: -ln sum_y (sum_x Q sqrt(P))^2
    CHECK(gallager_e0(ch, u, 1.0) == doctest::Approx(0.2231435513142097).epsilon(1e-12));
    // concave increasing in rho on [0, 1]
    double prev = 0.0;
    for (double rho : {0.25, 0.5, 0.75, 1.0}) {
        const double e = gallager_e0(ch, u, rho);
        CHECK(e > prev);
        prev = e;
    }
    // slope at zero equals the mutual information (nats)
    const double slope = gallager_e0(ch, u, 1e-6) / 1e-6;
    CHECK(slope == doctest::Approx(mutual_information(ch, u) * kLn2).epsilon(1e-4));
}

TEST_CASE("critical rates for the reference channel") {
    const auto [rc, rb] = critical_rates(make_bsc(0.1));
    CHECK(rc == doctest::Approx(0.5310044064107188).epsilon(1e-9));
    CHECK(rb == doctest::Approx(0.18872187527816042).epsilon(1e-7));
    CHECK(rb < rc);
}

TEST_CASE("random coding exponent closed forms") {
    const DiscreteChannel ch = make_bsc(0.1);
    const auto [rc, rb] = critical_rates(ch);
    const double e01 = gallager_e0(ch, InputDistribution::uniform(2), 1.0);
    // low-rate branch: the optimizer saturates and the exponent is affine
    for (double r : {0.02, 0.08, 0.15}) {
        const ExponentResult e = random_coding_exponent(r, ch);
        CHECK(e.value == doctest::Approx(e01 - r * kLn2).epsilon(1e-10));
        CHECK(e.at_boundary);
        CHECK(e.rho_star == doctest::Approx(1.0));
    }
    // interior branch: positive, decreasing, interior optimizer
    double prev = 1e9;
    for (double r : {0.25, 0.35, 0.45}) {
        const ExponentResult e = random_coding_exponent(r, ch);
        CHECK(e.value > 0.0);
        CHECK(e.value < prev);
        CHECK_FALSE(e.at_boundary);
        CHECK(e.rho_star < 1.0);
        CHECK(e.rho_star > 0.0);
        prev = e.value;
    }
    // above capacity the bound carries no information
    for (double r : {rc, 0.7, 0.95}) CHECK(random_coding_exponent(r, ch).value == doctest::Approx(0.0).epsilon(1e-10));
    // continuity across the form change
    const double below = random_coding_exponent(rb - 1e-7, ch).value;
    const double above = random_coding_exponent(rb + 1e-7, ch).value;
    CHECK(below == doctest::Approx(above).epsilon(1e-5));
}

TEST_CASE("input optimization") {
    CHECK(input_symmetric(make_bsc(0.1)));
    const InputDistribution q = optimize_e0_input(make_bsc(0.1), 0.7);
    CHECK(q.q(0) == doctest::Approx(0.5).epsilon(1e-8));

    const DiscreteChannel z(2, 2, {0.98, 0.02, 0.4, 0.6});
    CHECK_FALSE(input_symmetric(z));
    // at unit parameter the binary kernel is symmetric in the input swap, so
    // probe the asymmetry away from it
    const InputDistribution qz = optimize_e0_input(z, 0.5);
    const InputDistribution uz = InputDistribution::uniform(2);
    CHECK(gallager_e0(z, qz, 0.5) >= gallager_e0(z, uz, 0.5) - 1e-12);
    CHECK(qz.q(0) > 0.51);  // known biased optimum near 0.526
    CHECK(qz.q(0) < 0.54);
    // no coarse grid point beats the ascent
    for (double g = 0.05; g <= 0.951; g += 0.01) {
        const InputDistribution qg(std::vector<double>{g, 1.0 - g});
        CHECK(gallager_e0(z, qz, 0.5) >= gallager_e0(z, qg, 0.5) - 1e-9);
    }
}

TEST_CASE("free-parameter variant exceeds the capped curve at low rate") {
    const DiscreteChannel ch = make_bsc(0.1);
    const InputDistribution u = InputDistribution::uniform(2);
    const auto [rc, rb] = critical_rates(ch);
    // without the unit cap the low-rate exponent is strictly larger ...
    const double free_low = unrestricted_rs1_exponent(0.02, ch, u);
    const double capped_low = random_coding_exponent(0.02, ch).value;
    CHECK(free_low > capped_low + 1e-3);
    // ... and approaches the known zero-rate value
    CHECK(unrestricted_rs1_exponent(1e-6, ch, u) ==
          doctest::Approx(-std::log(2.0 * std::sqrt(0.1 * 0.9))).epsilon(4e-3));
    // at rates past the form change the cap is inactive and the curves agree
    for (double r : {rb + 0.05, 0.3, 0.45})
        CHECK(unrestricted_rs1_exponent(r, ch, u) ==
              doctest::Approx(random_coding_exponent(r, ch).value).epsilon(1e-7));
    CHECK(rc > 0.0);
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(random_coding_exponent(-0.1, make_bsc(0.1)), DomainError);
    CHECK_THROWS_AS(random_coding_exponent(1.1, make_bsc(0.1)), DomainError);
    CHECK_THROWS_AS(gallager_e0(make_bsc(0.1), InputDistribution::uniform(2), -0.5), DomainError);
}
