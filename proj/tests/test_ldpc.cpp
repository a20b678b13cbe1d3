#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "errexp/errors.hpp"
#include "errexp/ldpc.hpp"

using namespace errexp;

namespace {

void check_degrees(const CodeInstance& code, const LdpcEnsemble& ens) {
    std::vector<int> deg(code.n, 0);
    for (const auto& c : code.checks) {
        REQUIRE(static_cast<int>(c.size()) == ens.k);
        std::set<int> uniq(c.begin(), c.end());
        CHECK(static_cast<int>(uniq.size()) == ens.k);  // no repeats inside a check
        for (int i : c) {
            REQUIRE(i >= 0);
            REQUIRE(i < code.n);
            ++deg[i];
        }
    }
    for (int d : deg) CHECK(d == ens.j);
}

}  // namespace

TEST_CASE("ensemble construction and rate") {
    const LdpcEnsemble e63 = make_ensemble(6, 3);
    CHECK(e63.rate_bits() == doctest::Approx(0.5));
    CHECK(make_ensemble(6, 4).rate_bits() == doctest::Approx(1.0 / 3.0));
    CHECK(make_ensemble(3, 2).rate_bits() == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(make_ensemble(1, 1), DomainError);
    CHECK_THROWS_AS(make_ensemble(3, 3), DomainError);  // rate zero
    CHECK_THROWS_AS(make_ensemble(3, 0), DomainError);
}

TEST_CASE("sampled codes satisfy the degree profile") {
    const LdpcEnsemble ens = make_ensemble(6, 3);
    const CodeInstance code = sample_code(ens, 24, 7);
    CHECK(code.n == 24);
    CHECK(code.checks.size() == 12);  // n * j / k
    check_degrees(code, ens);
    // deterministic per seed, different across seeds
    const CodeInstance again = sample_code(ens, 24, 7);
    CHECK(code.checks == again.checks);
    const CodeInstance other = sample_code(ens, 24, 8);
    CHECK(code.checks != other.checks);
    // n must divide into whole checks
    CHECK_THROWS_AS(sample_code(ens, 25, 7), DomainError);
}

TEST_CASE("parity indicator on the triangle code") {
    CodeInstance tri;
    tri.n = 3;
    tri.checks = {{0, 1}, {0, 2}, {1, 2}};
    // codewords: 000 and 111
    CHECK(parity_indicator(0u, tri) == 1);
    CHECK(parity_indicator(7u, tri) == 1);
    for (uint32_t x : {1u, 2u, 3u, 4u, 5u, 6u}) CHECK(parity_indicator(x, tri) == 0);
    // vector overload agrees with the bit-packed one
    for (uint32_t x = 0; x < 8; ++x) {
        std::vector<int> bits = {int(x & 1), int((x >> 1) & 1), int((x >> 2) & 1)};
        CHECK(parity_indicator(bits, tri) == parity_indicator(x, tri));
    }
}

TEST_CASE("exhaustive enumeration of tiny ensembles") {
    // size-2 checks with every symbol in one check = perfect matchings; 3 on 4 points
    const auto matchings = enumerate_regular_codes(make_ensemble(2, 1), 4);
    CHECK(matchings.size() == 3);
    for (const auto& c : matchings) check_degrees(c, make_ensemble(2, 1));
    // all three pairs of a triangle, forced (rate-zero profile, enumeration only)
    const auto tri = enumerate_regular_codes(LdpcEnsemble{2, 2}, 3);
    CHECK(tri.size() == 1);
    auto tri_checks = tri[0].checks;
    std::sort(tri_checks.begin(), tri_checks.end());
    CHECK(tri_checks == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});
    // no duplicate instances
    const auto many = enumerate_regular_codes(make_ensemble(2, 1), 6);
    CHECK(many.size() == 15);  // (6-1)!! = 15
    std::set<std::string> seen;
    for (const auto& c : many) seen.insert(serialize_code(c));
    CHECK(seen.size() == many.size());
}

TEST_CASE("serialization round trip") {
    const LdpcEnsemble ens = make_ensemble(4, 2);
    const CodeInstance code = sample_code(ens, 16, 99);
    const std::string text = serialize_code(code);
    const CodeInstance back = parse_code(text, 16);
    CHECK(back.n == code.n);
    CHECK(back.checks == code.checks);
    CHECK_THROWS_AS(parse_code("1 2 banana\n", 4), DomainError);
    CHECK_THROWS_AS(parse_code("1 2 9\n", 4), DomainError);  // index out of range
}
