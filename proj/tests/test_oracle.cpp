#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "errexp/channel.hpp"
#include "errexp/errors.hpp"
#include "errexp/ldpc.hpp"
#include "errexp/oracle.hpp"
#include "errexp/saddle.hpp"

using namespace errexp;

namespace {

SmallCode random_codebook(int K, int N, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> bit(0, 1);
    SmallCode code;
    code.n = N;
    code.words.resize(std::size_t(1) << K);
    for (auto& w : code.words) {
        w.resize(N);
        for (int i = 0; i < N; ++i) w[i] = bit(rng);
    }
    return code;
}

}  // namespace

TEST_CASE("codebook from parity checks") {
    CodeInstance tri;
    tri.n = 3;
    tri.checks = {{0, 1}, {0, 2}, {1, 2}};
    const SmallCode cb = codebook_from_parity(tri);
    REQUIRE(cb.words.size() == 2);
    CHECK(cb.words[0] == std::vector<int>{0, 0, 0});
    CHECK(cb.words[1] == std::vector<int>{1, 1, 1});
}

TEST_CASE("exact decoding error closed forms") {
    // binary repetition over three uses: error iff two or more flips
    CodeInstance rep;
    rep.n = 3;
    rep.checks = {{0, 1}, {1, 2}};  // rank 2 -> codewords 000, 111
    const SmallCode cb = codebook_from_parity(rep);
    REQUIRE(cb.words.size() == 2);
    const double p = 0.1;
    const double expect = p * p * p + 3.0 * p * p * (1.0 - p);
    CHECK(exact_ml_error(cb, make_bsc(p)) == doctest::Approx(expect).epsilon(1e-12));

    // two uses: the tie at one flip counts as an error
    SmallCode two;
    two.n = 2;
    two.words = {{0, 0}, {1, 1}};
    const double expect2 = 2.0 * p * (1.0 - p) + p * p;
    CHECK(exact_ml_error(two, make_bsc(p)) == doctest::Approx(expect2).epsilon(1e-12));
}

TEST_CASE("two-parameter bound dominates the exact error") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> lam_d(0.2, 1.5), rho_d(0.1, 1.5), p_d(0.05, 0.3);
    int violations = 0;
    for (int t = 0; t < 200; ++t) {
        const int K = 1 + (t % 4);           // 2..16 words
        const int N = 4 + (t % 7);           // block length up to 10
        const SmallCode code = random_codebook(K, N, rng);
        const DiscreteChannel ch = make_bsc(p_d(rng));
        const double pe = exact_ml_error(code, ch);
        const double bound = chernoff_rhs_exact(code, ch, lam_d(rng), rho_d(rng));
        if (!(pe <= bound + 1e-15)) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("partition weights resolve the replica sum exactly") {
    for (int K : {2, 3, 4}) {
        for (int rho = 1; rho <= 5; ++rho) {
            double total = 0.0;
            for (const auto& occ : enumerate_occupations(rho)) {
                CHECK(occ.replicas() == rho);
                total += partition_weight(occ, K, rho);
            }
            CHECK(total == std::pow(std::pow(2.0, K) - 1.0, rho));  // exact in double
        }
    }
    // occupied() counts distinct words; patterns needing more words than exist weigh zero
    for (const auto& occ : enumerate_occupations(5)) {
        if (occ.occupied() > 3)  // K = 2 has only 3 wrong words
            CHECK(partition_weight(occ, 2, 5) == 0.0);
    }
}

TEST_CASE("ensemble average at one replica reduces to the matched-tilt form") {
    const DiscreteChannel ch = make_bsc(0.1);
    const InputDistribution q = InputDistribution::uniform(2);
    for (int N : {2, 4, 6}) {
        const double a = ensemble_average_integer_rho(2, N, q, ch, 0.5, 1);
        const double b = chernoff_rhs_exact(2, N, q, ch, 1.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("exact integer-replica averages match Monte Carlo") {
    const DiscreteChannel ch = make_bsc(0.1);
    const InputDistribution q = InputDistribution::uniform(2);
    for (int rho : {1, 2}) {
        const double lam = 1.0 / (1.0 + rho);
        const double exact = ensemble_average_integer_rho(2, 4, q, ch, lam, rho);
        const MonteCarloAverage mc = mc_ensemble_average(2, 4, q, ch, lam, rho, 1000000, 20230117);
        CHECK(std::abs(mc.mean - exact) < 3.0 * mc.std_error);
        CHECK(mc.std_error > 0.0);
    }
}

TEST_CASE("two-moment closure is stationary and matches the population") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const DiscreteChannel ch = make_bsc(0.05);
    const MomentClosureResult mc = moment_closure_rho2(ens, ch, 0.25);
    CHECK(mc.iterations > 0);
    CHECK(mc.exponent == doctest::Approx(-0.24491).epsilon(1e-3));
    CHECK(mc.second_moment >= mc.mean * mc.mean - 1e-12);

    PopulationConfig cfg;
    cfg.population_size = 4000;
    cfg.sweeps = 200;
    cfg.burn_in = 100;
    cfg.eval_tuples = 40000;
    const ExponentEstimate pop = rs_population_exponent(ens, ch, 2.0, 0.25, cfg);
    CHECK(std::abs(pop.value - mc.exponent) < 3.0 * pop.std_error + 1e-4);
}

TEST_CASE("code counting: exact, asymptotic, and the saddle behind it") {
    // matchings: counts known in closed form
    CHECK(std::exp(code_count_exact_ln(2, 1, 4)) == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(std::exp(code_count_exact_ln(2, 1, 6)) == doctest::Approx(15.0).epsilon(1e-10));
    // the asymptotic count's relative gap shrinks monotonically
    double prev_gap = 1e9;
    for (int n : {4, 6, 8, 10, 12}) {
        const double ex = code_count_exact_ln(2, 1, n);
        const double as = code_count_asymptotic_ln(2, 1, n);
        const double gap = std::abs(as - ex) / ex;
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    // the count's saddle point satisfies its stationarity equations
    const auto [r1, r2] = code_count_saddle_residuals(6, 3, 1200);
    CHECK(std::abs(r1) < 1e-8);
    CHECK(std::abs(r2) < 1e-8);
}

TEST_CASE("enumerated ensemble average equals the analytic one on a tiny ensemble") {
    // average the exact per-code bound over all (2,1) matchings on 4 symbols-
    // the uniform ensemble average is just the mean over the 3 codes
    const DiscreteChannel ch = make_bsc(0.1);
    const auto codes = enumerate_regular_codes(make_ensemble(2, 1), 4);
    REQUIRE(codes.size() == 3);
    double acc = 0.0;
    for (const auto& c : codes) {
        const SmallCode cb = codebook_from_parity(c);
        CHECK(cb.words.size() == 4);  // 4 symbols, 2 independent checks
        acc += exact_ml_error(cb, ch);
    }
    CHECK(acc / 3.0 > 0.0);
    CHECK(acc / 3.0 < 1.0);
}

TEST_CASE("oracle guard rails") {
    CHECK_THROWS_AS(enumerate_occupations(9), DomainError);   // factorial growth
    CHECK_THROWS_AS(partition_weight(enumerate_occupations(2).front(), 7, 2), DomainError);
    SmallCode big;
    big.n = 24;  // output space 2^24 exceeds the enumeration guard
    big.words = {std::vector<int>(24, 0), std::vector<int>(24, 1)};
    CHECK_THROWS_AS(exact_ml_error(big, make_bsc(0.1)), ResourceError);
    CHECK_THROWS_AS(chernoff_rhs_exact(big, make_bsc(0.1), 0.5, 1.0), ResourceError);
}
