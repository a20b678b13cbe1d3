#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "errexp/channel.hpp"
#include "errexp/errors.hpp"
#include "errexp/parallel.hpp"
#include "errexp/saddle.hpp"

using namespace errexp;

namespace {

PopulationConfig small_cfg() {
    PopulationConfig cfg;
    cfg.population_size = 4000;
    cfg.sweeps = 200;
    cfg.burn_in = 100;
    cfg.eval_tuples = 40000;
    return cfg;
}

// mean variable-to-check message of the tilted channel, the natural start
double matched_start(const DiscreteChannel& ch, double lam) {
    const BinaryView bv = binary_view(ch);
    double u0 = 0.0;
    for (std::size_t y = 0; y < bv.p0.size(); ++y) {
        const double a = std::pow(bv.p0[y], lam), b = std::pow(bv.p1[y], lam);
        u0 += bv.p0[y] * (a - b) / (a + b);
    }
    return u0;
}

}  // namespace

TEST_CASE("scalar fixed point at tiny noise") {
    // at vanishing noise the dominant fixed point hugs the certain message
    const SlopeEstimate s = jensen_smallrho_slope(make_ensemble(3, 2), make_bsc(1e-4), 1.0);
    REQUIRE(s.has_fixed_point);
    CHECK(s.u == doctest::Approx(0.990048).epsilon(1e-4));
    CHECK(s.uh == doctest::Approx(s.u * s.u).epsilon(1e-3));  // uh = u^(k-1)
    CHECK(s.slope == doctest::Approx(-1.932e-5).epsilon(2e-3));
    CHECK(s.std_error == 0.0);
}

TEST_CASE("scalar stationarity conditions hold at reported points") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.07);
    const auto pts = scalar_stationary_points(ens, ch, 0.2, 1.0 / 1.2);
    REQUIRE(!pts.empty());
    for (const auto& p : pts) {
        CHECK(p.uh == doctest::Approx(std::pow(p.u, ens.k - 1)).epsilon(1e-9));
        // value must be reproduced by the exponent evaluator at (u, uh)
        const auto single = scalar_stationary_points(ens, ch, 0.2, 1.0 / 1.2, {p.u});
        REQUIRE(!single.empty());
        CHECK(single.front().exponent == doctest::Approx(p.exponent).epsilon(1e-10));
    }
}

TEST_CASE("positive-exponent pocket at moderate reweighting") {
    // a known window where the scalar bound exponent is positive
    const ExponentEstimate e = jensen_exponent(make_ensemble(6, 3), make_bsc(0.07), 0.2, 1.0 / 1.2);
    CHECK_FALSE(e.trivial_collapsed);
    CHECK(e.value == doctest::Approx(0.00138).epsilon(2e-2));
    CHECK(e.value > 0.0);
}

TEST_CASE("scalar solver collapses to the certain state in light noise") {
    // below the appearance point every start is pulled to u = uh = 1
    const ExponentEstimate lo = jensen_exponent(make_ensemble(6, 3), make_bsc(0.02), 0.5, 1.0 / 1.5);
    CHECK(lo.trivial_collapsed);
    CHECK(lo.value == 0.0);
    // in heavy noise a nontrivial negative-exponent point survives
    const ExponentEstimate hi = jensen_exponent(make_ensemble(6, 3), make_bsc(0.4), 0.5, 1.0 / 1.5);
    CHECK_FALSE(hi.trivial_collapsed);
    CHECK(hi.value < 0.0);
}

TEST_CASE("population collapses to the scalar value at one replica") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.06);
    const ExponentEstimate pop = rs_population_exponent(ens, ch, 1.0, 0.5, small_cfg());
    const ExponentEstimate sc = jensen_exponent(ens, ch, 1.0, 0.5, {matched_start(ch, 0.5)});
    REQUIRE_FALSE(pop.trivial_collapsed);
    REQUIRE_FALSE(sc.trivial_collapsed);
    CHECK(std::abs(pop.value - sc.value) < 4.0 * pop.std_error + 1e-4);
    CHECK(pop.value == doctest::Approx(-0.0432).epsilon(2e-2));
}

TEST_CASE("population matches the two-moment closure at two replicas") {
    // the rho = 2 update closes on the first two moments; the population must agree
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.05);
    const ExponentEstimate pop = rs_population_exponent(ens, ch, 2.0, 0.25, small_cfg());
    CHECK(pop.value == doctest::Approx(-0.24491).epsilon(5e-3));
}

TEST_CASE("runs are reproducible and thread-count independent") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.08);
    PopulationConfig cfg = small_cfg();
    cfg.population_size = 2000;
    cfg.sweeps = 60;
    cfg.burn_in = 30;
    set_parallel_enabled(false);
    const ExponentEstimate a = rs_population_exponent(ens, ch, 1.0, 0.5, cfg);
    const ExponentEstimate b = rs_population_exponent(ens, ch, 1.0, 0.5, cfg);
    CHECK(a.value == b.value);  // bit-identical
    CHECK(a.std_error == b.std_error);
    set_parallel_enabled(true);
    set_worker_count(3);
    const ExponentEstimate c = rs_population_exponent(ens, ch, 1.0, 0.5, cfg);
    CHECK(a.value == c.value);  // random stream is partition-invariant
    CHECK(a.std_error == c.std_error);
    set_parallel_enabled(true);
    set_worker_count(0);
    cfg.seed += 1;
    const ExponentEstimate d = rs_population_exponent(ens, ch, 1.0, 0.5, cfg);
    CHECK(a.value != d.value);  // the seed matters
}

TEST_CASE("stationarity residual stays small on converged runs") {
    const ExponentEstimate e =
        rs_population_exponent(make_ensemble(6, 3), make_bsc(0.06), 1.0, 0.5, small_cfg());
    CHECK(e.stationarity_residual < 3.0);
    CHECK(e.std_error > 0.0);
    CHECK(e.std_error < 0.01);
}

TEST_CASE("population collapse in the stable phase is detected exactly") {
    // below the spinodal the certain state attracts the whole cloud
    PopulationConfig cfg = small_cfg();
    const ExponentEstimate e =
        rs_population_exponent(make_ensemble(6, 3), make_bsc(0.05), 0.0, 1.0, cfg);
    CHECK(e.trivial_collapsed);
    CHECK(e.value == 0.0);
    CHECK(e.std_error == 0.0);
}

TEST_CASE("message populations expose their state") {
    const PopulationRun run =
        rs_population_run(make_ensemble(6, 3), make_bsc(0.06), 1.0, 0.5, small_cfg());
    CHECK(run.pi.kind() == MessageKind::variable_to_check);
    CHECK(run.pi_hat.kind() == MessageKind::check_to_variable);
    CHECK(run.pi.size() == 4000);
    CHECK(run.pi.mean() > -1.0);
    CHECK(run.pi.mean() < 1.0);
    CHECK(run.pi.mean_abs_dev_from_one() > 0.0);
    CHECK(!run.pi.histogram().empty());
    for (double s : run.pi.samples()) {
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
    }
}

TEST_CASE("distributional small-rho slope changes sign at the threshold") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    PopulationConfig cfg;
    cfg.population_size = 50000;
    cfg.sweeps = 200;
    cfg.burn_in = 100;
    cfg.eval_tuples = 1000000;
    const SlopeEstimate below = rs_smallrho_slope(ens, make_bsc(0.095), 1.0, cfg);
    REQUIRE(below.has_fixed_point);
    CHECK(below.slope > 0.0);
    CHECK(below.slope > 2.0 * below.std_error);
    const SlopeEstimate above = rs_smallrho_slope(ens, make_bsc(0.105), 1.0, cfg);
    REQUIRE(above.has_fixed_point);
    CHECK(above.slope < 0.0);
    CHECK(-above.slope > 2.0 * above.std_error);
    // below the spinodal the unweighted evolution has no nontrivial fixed point
    const SlopeEstimate none = rs_smallrho_slope(ens, make_bsc(0.07), 1.0, cfg);
    CHECK_FALSE(none.has_fixed_point);
}

TEST_CASE("configuration validation") {
    PopulationConfig cfg = small_cfg();
    cfg.burn_in = cfg.sweeps;  // nothing left to measure
    CHECK_FALSE(cfg.validate());
    CHECK_THROWS_AS(rs_population_exponent(make_ensemble(6, 3), make_bsc(0.06), 1.0, 0.5, cfg),
                    DomainError);
    PopulationConfig tiny;
    tiny.population_size = 1;
    CHECK_FALSE(tiny.validate());
    // channels with zero transitions cannot be tilted with negative powers
    const DiscreteChannel z(2, 2, {1.0, 0.0, 0.5, 0.5});
    CHECK_THROWS_AS(rs_population_exponent(make_ensemble(6, 3), z, 1.0, 0.5, small_cfg()),
                    DomainError);
}
