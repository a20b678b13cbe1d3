#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "errexp/channel.hpp"
#include "errexp/errors.hpp"
#include "errexp/threshold.hpp"

using namespace errexp;

TEST_CASE("method names round trip") {
    for (ThresholdMethod m :
         {ThresholdMethod::jensen1, ThresholdMethod::jensen2, ThresholdMethod::replica})
        CHECK(parse_method(method_name(m)) == m);
    CHECK_THROWS_AS(parse_method("bogus"), DomainError);
}

TEST_CASE("flip rate matching a target rate") {
    // binary entropy of the returned flip rate complements the rate
    for (double r : {0.5, 0.4, 1.0 / 3.0, 0.6}) {
        const double p = shannon_p(r);
        const double h = -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
        CHECK(1.0 - h == doctest::Approx(r).epsilon(1e-9));
    }
    CHECK(shannon_p(0.5) == doctest::Approx(0.110028).epsilon(1e-4));
    CHECK(shannon_p(1.0 / 3.0) == doctest::Approx(0.174009).epsilon(1e-4));
}

TEST_CASE("stability margin of the certain state") {
    // sign flips exactly at (k-1) * 2 sqrt(p(1-p)) = 1 for the two-edge ensembles
    const LdpcEnsemble e32 = make_ensemble(3, 2);
    CHECK(trivial_stability_margin(e32, make_bsc(0.06)) > 0.0);
    CHECK(trivial_stability_margin(e32, make_bsc(0.075)) < 0.0);
    double lo = 0.05, hi = 0.08;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        (trivial_stability_margin(e32, make_bsc(mid)) > 0.0 ? lo : hi) = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(0.066987).epsilon(1e-4));

    const LdpcEnsemble e42 = make_ensemble(4, 2);
    lo = 0.02;
    hi = 0.04;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        (trivial_stability_margin(e42, make_bsc(mid)) > 0.0 ? lo : hi) = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(0.028595).epsilon(1e-4));
}

TEST_CASE("deterministic thresholds for the rate-half ensemble") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const ThresholdResult t1 = error_threshold(ens, ThresholdMethod::jensen1);
    CHECK(std::abs(t1.p_c - 0.0678) < 1e-3);
    CHECK(t1.bracket_lo < t1.p_c);
    CHECK(t1.bracket_hi > t1.p_c);
    CHECK(t1.bracket_hi - t1.bracket_lo <= 2.0 * 4e-4 + 1e-12);
    CHECK(!t1.trace.empty());

    const ThresholdResult t2 = error_threshold(ens, ThresholdMethod::jensen2);
    CHECK(std::abs(t2.p_c - 0.0915) < 1e-3);
    CHECK(t2.p_c > t1.p_c);  // freeing the tilt can only widen the positive region
}

TEST_CASE("free-tilt methods hit the stability boundary on two-edge ensembles") {
    const LdpcEnsemble ens = make_ensemble(3, 2);
    const ThresholdResult t2 = error_threshold(ens, ThresholdMethod::jensen2);
    const ThresholdResult tr = error_threshold(ens, ThresholdMethod::replica);
    CHECK(std::abs(t2.p_c - 0.0670) < 1e-3);
    CHECK(t2.p_c == doctest::Approx(tr.p_c).epsilon(1e-10));  // same boundary, same bisection
    REQUIRE(!t2.trace.empty());
    CHECK(t2.trace.front().tag == "stability_boundary");

    const ThresholdResult t1 = error_threshold(ens, ThresholdMethod::jensen1);
    CHECK(t1.p_c == 0.0);
    CHECK(t1.note == "non_bracketing");
}

TEST_CASE("replica threshold at reduced effort brackets the target") {
    ThresholdOptions opts;
    opts.tol = 2e-3;
    opts.slope_tuples = 2000000;
    opts.pop.population_size = 60000;
    opts.pop.sweeps = 220;
    opts.pop.burn_in = 110;
    const ThresholdResult tr = error_threshold(make_ensemble(6, 3), ThresholdMethod::replica, opts);
    CHECK(tr.p_c > 0.0948);
    CHECK(tr.p_c < 0.1048);  // production tolerance is tighter; this is a smoke bound
    REQUIRE(!tr.trace.empty());
    bool saw_slope = false;
    for (const auto& tp : tr.trace)
        if (tp.tag.rfind("slope_criterion", 0) == 0) saw_slope = true;
    CHECK(saw_slope);
}

TEST_CASE("threshold options validate") {
    ThresholdOptions opts;
    opts.tol = 0.0;
    CHECK_THROWS_AS(error_threshold(make_ensemble(6, 3), ThresholdMethod::jensen1, opts),
                    DomainError);
    ThresholdOptions opts2;
    opts2.bracket_lo = 0.6;
    CHECK_THROWS_AS(error_threshold(make_ensemble(6, 3), ThresholdMethod::jensen1, opts2),
                    DomainError);
}

TEST_CASE("pointwise exponent maximization stays inside the box") {
    OptimizeOptions box;
    box.pop.population_size = 4000;
    box.pop.sweeps = 120;
    box.pop.burn_in = 60;
    box.pop.eval_tuples = 40000;
    const OptimizeResult best =
        maximize_exponent(make_ensemble(6, 3), make_bsc(0.07), ThresholdMethod::jensen2, box);
    CHECK(best.rho >= box.rho_min);
    CHECK(best.rho <= box.rho_max);
    CHECK(best.lambda >= box.lambda_min);
    CHECK(best.lambda <= box.lambda_max);
    // a known positive pocket: the optimized value must see it
    CHECK(best.value > 0.0);
}
