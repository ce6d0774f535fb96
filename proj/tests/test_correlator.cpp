#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fjrw/correlator.hpp"

using namespace fjrw;

namespace {

const ModelSpec quintic(5, {1, 1, 1, 1, 1});
const ModelSpec rspin3(3, {1});

std::vector<int> all_states(const ModelSpec& m) {
    std::vector<int> v;
    for (int b = 1; b <= m.r; ++b) v.push_back(b);
    return v;
}

} // namespace

TEST_CASE("unstable symbols collapse to zero") {
    CHECK(!make_symbol(0, {}).has_value());
    CHECK(!make_symbol(0, {Insertion{0, 1}}).has_value());
    CHECK(!make_symbol(0, {Insertion{0, 1}, Insertion{0, 2}}).has_value());
    CHECK(make_symbol(0, {Insertion{0, 1}, Insertion{0, 2}, Insertion{0, 3}}).has_value());
    CHECK(!make_symbol(1, {}).has_value());
    CHECK(make_symbol(1, {Insertion{1, 1}}).has_value());
    CHECK(make_symbol(2, {}).has_value());
}

TEST_CASE("symbol insertions are order-insensitive") {
    auto a = make_symbol(1, {Insertion{0, 2}, Insertion{1, 3}});
    auto b = make_symbol(1, {Insertion{1, 3}, Insertion{0, 2}});
    REQUIRE(a.has_value());
    CHECK(*a == *b);
}

TEST_CASE("multiset expansion reproduces exponential coefficients") {
    // With a single slot carrying coefficient c*t, the genus-2 expansion is
    // sum_m (c t)^m / m! < slot^m >_{2,m}.
    TruncationPolicy pol{4, 0, -2, 2, 0};
    SlotMap slots;
    TruncatedSeries ct = TruncatedSeries::generator(pol, t_gen(1)) * Rational(3);
    merge_slot(slots, Insertion{0, 1}, ct);
    CorrelatorExpr ex = expand_F_infinity(2, slots, pol);
    for (int m = 0; m <= 4; ++m) {
        auto sym = make_symbol(2, std::vector<Insertion>(m, Insertion{0, 1}));
        REQUIRE(sym.has_value());
        auto it = ex.terms.find(*sym);
        REQUIRE(it != ex.terms.end());
        Monomial tm = Monomial::of(t_gen(1), m);
        Rational expect = rational_pow(Rational(3), m) / Rational(factorial(m));
        auto found = it->second.terms().find(tm);
        REQUIRE(found != it->second.terms().end());
        CHECK(found->second == expect);
    }
}

TEST_CASE("dilaton reduction: closed-form factors") {
    TruncationPolicy pol{2, 0, -2, 2, 0};
    TruncatedSeries one = TruncatedSeries::constant(pol, Rational(1));
    // <psi phi_1, phi_2>_{2,2} -> (2*2-2+1) <phi_2>_{2,1}
    CorrelatorExpr in;
    in.add(*make_symbol(2, {Insertion{1, 1}, Insertion{0, 2}}), one);
    CorrelatorExpr out = dilaton_reduce(in);
    CorrelatorExpr expect;
    expect.add(*make_symbol(2, {Insertion{0, 2}}), one * Rational(3));
    CHECK(out == expect);
    // triple dilaton insertion at genus 1 terminates at the leftover symbol
    CorrelatorExpr in2;
    in2.add(*make_symbol(1, {Insertion{1, 1}, Insertion{1, 1}, Insertion{1, 1}}), one);
    CorrelatorExpr out2 = dilaton_reduce(in2);
    CorrelatorExpr expect2;
    expect2.add(*make_symbol(1, {Insertion{1, 1}}), one * Rational(2));
    CHECK(out2 == expect2);
    // reduction is idempotent once no dilaton insertions remain
    CHECK(dilaton_reduce(out) == out);
}

TEST_CASE("dilaton reduction is linear") {
    TruncationPolicy pol{2, 0, -2, 2, 0};
    TruncatedSeries t = TruncatedSeries::generator(pol, t_gen(1));
    CorrelatorExpr a, b;
    a.add(*make_symbol(2, {Insertion{1, 1}, Insertion{0, 3}}), t);
    b.add(*make_symbol(1, {Insertion{1, 1}, Insertion{1, 1}}), t * Rational(5));
    CorrelatorExpr sum = a;
    sum += b;
    CorrelatorExpr lhs = dilaton_reduce(sum);
    CorrelatorExpr rhs = dilaton_reduce(a);
    rhs += dilaton_reduce(b);
    CHECK(lhs == rhs);
}

TEST_CASE("block insertion implements the truncated substitution") {
    // r-spin r=3, block (3,3): mu has z-exponent -1+ell_total; with d = 0
    // the block dies unless the shifted exponent is >= 0.
    TruncationPolicy pol{4, 0, -6, 3, 0};
    SequenceData sd = sequence_data(rspin3, {3, 3});
    auto ins = block_insertion(rspin3, {LightMark{0, 3}, LightMark{0, 3}}, pol);
    // k = 2, ell = <1/3*2>+<1/3*2> floor = 1, exponent 1-2+1 = 0: alive
    REQUIRE(sd.k == 2);
    REQUIRE(sd.ell_total == 1);
    REQUIRE(ins.has_value());
    CHECK(ins->first.b == 2);
    CHECK(ins->first.c == 0);
    // sign (-1)^{z-exponent} = +1 here, value = mu coefficient
    TruncatedSeries mu = mu_coefficient(rspin3, {3, 3}, pol);
    CHECK(ins->second == mu.terms().begin()->second);
}

TEST_CASE("wall-crossing identity at small bounds, with negative control") {
    TruncationPolicy pol{3, 1, -4, 2, 0};
    for (int g : {0, 1, 2}) {
        CheckReport rep = check_wallcrossing_identity(rspin3, g, all_states(rspin3), pol,
                                                      /*g0_mask=*/g == 0);
        INFO("genus ", g, ": ", rep.detail, " ", rep.symbol);
        CHECK(rep.ok);
    }
    MuPerturbation bad{to_multiset(std::vector<int>{2, 2}), Rational(1, 3)};
    CheckReport rep = check_wallcrossing_identity(rspin3, 1, all_states(rspin3), pol, false,
                                                  BroadMode::AsWritten, &bad);
    CHECK(!rep.ok);
}

TEST_CASE("genus-0 wall-crossing with the u-linear comparison mask") {
    TruncationPolicy pol{3, 1, -4, 2, 0};
    CheckReport masked =
        check_wallcrossing_identity(rspin3, 0, all_states(rspin3), pol, true);
    CHECK(masked.ok);
    CheckReport quintic_masked =
        check_wallcrossing_identity(quintic, 0, all_states(quintic), pol, true);
    CHECK(quintic_masked.ok);
}

TEST_CASE("scalar dilaton identity: sum (1-I0)^m/m! [a]_m = I0^{-a}") {
    TruncationPolicy pol{8, 0, 0, 0, 0};
    IFunctions ifn = extract_I_functions(quintic, pol);
    TruncatedSeries one = TruncatedSeries::constant(pol, Rational(1));
    for (int a : {1, 2, 3}) {
        TruncatedSeries lhs = TruncatedSeries::zero(pol);
        TruncatedSeries pw = one;
        for (unsigned m = 0; m <= 8; ++m) {
            lhs += pw * (pochhammer(Rational(a), m) / Rational(factorial(m)));
            pw = pw * (one - ifn.I0);
        }
        TruncatedSeries rhs = series_int_pow(series_inverse(ifn.I0), a);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("closed-form dilaton reduction for the quintic") {
    TruncationPolicy pol{6, 0, -2, 2, 0};
    for (int g : {1, 2}) {
        CheckReport rep = check_dilaton_closed_form(quintic, g, pol);
        INFO("genus ", g, ": ", rep.detail);
        CHECK(rep.ok);
    }
}
