#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "fjrw/model.hpp"

using namespace fjrw;

namespace {
const ModelSpec quintic(5, {1, 1, 1, 1, 1});
const ModelSpec rspin5(5, {1});
const ModelSpec mixed6(6, {1, 2, 3});
} // namespace

TEST_CASE("model validation") {
    CHECK(quintic.is_calabi_yau());
    CHECK(quintic.total_charge() == Rational(1));
    CHECK(rspin5.total_charge() == Rational(1, 5));
    CHECK(mixed6.total_charge() == Rational(1, 6) + Rational(2, 6) + Rational(3, 6));
    CHECK_THROWS(ModelSpec(5, {}));
    CHECK_THROWS(ModelSpec(5, {5}));  // r / w must be >= 2
    CHECK_THROWS(ModelSpec(6, {4})); // w must divide r
}

TEST_CASE("canonical state representative lies in 1..r") {
    for (long v : {-12L, -5L, -1L, 0L, 1L, 5L, 6L, 23L}) {
        int k = quintic.canonical_state(v);
        CHECK(k >= 1);
        CHECK(k <= 5);
        CHECK((v - k) % 5 == 0);
    }
    CHECK(quintic.canonical_state(0) == 5);
    CHECK(quintic.canonical_state(5) == 5);
    CHECK(quintic.canonical_state(-2) == 3);
}

TEST_CASE("narrow/broad classification and pairing") {
    // For the one-variable r = 5 model, only a = 5 is broad.
    for (int a = 1; a <= 4; ++a) CHECK(classify_state(rspin5, a) == StateClass::Narrow);
    CHECK(classify_state(rspin5, 5) == StateClass::Broad);
    // mixed6: broad iff some w_alpha * a is divisible by 6
    CHECK(classify_state(mixed6, 1) == StateClass::Narrow);
    CHECK(classify_state(mixed6, 2) == StateClass::Broad); // w=3: 6|6
    CHECK(classify_state(mixed6, 3) == StateClass::Broad); // w=2: 6|6
    CHECK(classify_state(mixed6, 6) == StateClass::Broad);
    // the pairing a + a' = 0 mod r preserves the classification
    for (const ModelSpec& m : {quintic, rspin5, mixed6})
        for (int a = 1; a <= m.r; ++a) {
            int ap = pairing_partner(m, a);
            CHECK(pairing_partner(m, ap) == a);
            CHECK(classify_state(m, a) == classify_state(m, ap));
        }
}

TEST_CASE("gamma parsing") {
    GammaType g = parse_gamma(quintic, "g=1;|2,2,2,2,2");
    CHECK(g.genus == 1);
    CHECK(g.m() == 0);
    CHECK(g.n() == 5);
    GammaType g2 = parse_gamma(quintic, "g=2;3,4|1");
    CHECK(g2.genus == 2);
    CHECK(g2.heavy == std::vector<int>({3, 4}));
    CHECK(g2.light == std::vector<int>({1}));
    GammaType g3 = parse_gamma(quintic, "1,2|"); // default genus 0, empty lights
    CHECK(g3.genus == 0);
    CHECK(g3.n() == 0);
    // out-of-range entries are canonicalized mod r into 1..r
    CHECK(parse_gamma(quintic, "g=1;|7").light == std::vector<int>({2}));
    CHECK_THROWS(parse_gamma(quintic, "g=1;2,2"));
}

TEST_CASE("selection rule and permutation invariance") {
    CHECK(selection_rule(quintic, parse_gamma(quintic, "g=1;|2,2,2,2,2")));
    CHECK(!selection_rule(quintic, parse_gamma(quintic, "g=1;|2,2,2,2,3")));
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> st(1, 6);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> heavy{st(rng), st(rng)}, light{st(rng), st(rng), st(rng)};
        GammaType a(mixed6, 1, heavy, light);
        std::shuffle(heavy.begin(), heavy.end(), rng);
        std::shuffle(light.begin(), light.end(), rng);
        GammaType b(mixed6, 1, heavy, light);
        CHECK(selection_rule(mixed6, a) == selection_rule(mixed6, b));
    }
}

TEST_CASE("virtual dimension: quintic genus-1 example") {
    GammaType g = parse_gamma(quintic, "g=1;|2,2,2,2,2");
    CHECK(virtual_dimension(quintic, g, false) == 0);
    CHECK(virtual_dimension(quintic, g, true) == 1);
}

TEST_CASE("master-space dimension exceeds the ordinary one by exactly 1") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> st(1, 5), cnt(0, 3), gen(0, 3);
    int tested = 0;
    while (tested < 60) {
        std::vector<int> heavy, light;
        int m = cnt(rng), n = cnt(rng), g = gen(rng);
        for (int i = 0; i < m; ++i) heavy.push_back(st(rng));
        for (int i = 0; i < n; ++i) light.push_back(st(rng));
        long acc = 2 * g - 2;
        for (int a : heavy) acc += 1 - a;
        for (int b : light) acc += 1 - b;
        light.push_back(quintic.canonical_state(1 + acc));
        GammaType gamma(quintic, g, heavy, light);
        REQUIRE(selection_rule(quintic, gamma));
        CHECK(virtual_dimension(quintic, gamma, true) -
                  virtual_dimension(quintic, gamma, false) ==
              1);
        ++tested;
    }
}

TEST_CASE("epsilon factor: quintic genus-1 example and the square identity") {
    GammaType g = parse_gamma(quintic, "g=1;|2,2,2,2,2");
    CHECK(epsilon_gamma(quintic, g) == Rational(-1));
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> st(1, 5), cnt(0, 3), gen(0, 3);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<int> heavy, light;
        int m = cnt(rng), n = cnt(rng), gg = gen(rng);
        for (int i = 0; i < m; ++i) heavy.push_back(st(rng));
        for (int i = 0; i < n; ++i) light.push_back(st(rng));
        long acc = 2 * gg - 2;
        for (int a : heavy) acc += 1 - a;
        for (int b : light) acc += 1 - b;
        light.push_back(rspin5.canonical_state(1 + acc));
        GammaType gamma(rspin5, gg, heavy, light);
        Rational eps = epsilon_gamma(rspin5, gamma);
        CHECK(eps * eps == rational_pow(Rational(5), 2 - 2 * gg));
    }
}

TEST_CASE("rational helpers") {
    CHECK(frac_part(Rational(7, 5)) == Rational(2, 5));
    CHECK(frac_part(Rational(-1, 5)) == Rational(4, 5));
    CHECK(frac_part(Rational(3)) == 0);
    CHECK(floor_int(Rational(-7, 5)) == -2);
    CHECK(factorial(5) == 120);
    CHECK(rational_pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK(rational_to_string(Rational(-3, 7)) == "-3/7");
    CHECK(rational_to_string(Rational(4)) == "4");
}
