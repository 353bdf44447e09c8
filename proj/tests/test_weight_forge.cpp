#include "moserlab/errors.hpp"
#include "moserlab/weight_forge.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace moserlab;
using namespace moserlab::weights;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Doubling ratio with v_k cancelled by hand, in 50-digit floating point.
Big ratio_oracle(int N, int k) {
    const Big kk = boost::multiprecision::pow(Big(k), 4 * k);
    const Big twoN = boost::multiprecision::pow(Big(2), N);
    const Big num = (twoN - 1) * kk + 1;
    const Big den = 1 + twoN * kk * (Big(1) / (k * k) + Big(8) / (k * k * k)) + twoN;
    return num / den;
}

}  // namespace

TEST_CASE("LogScalar arithmetic against doubles") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> mag(-30, 30);
    std::uniform_int_distribution<int> sgn(0, 1);
    for (int i = 0; i < 2000; ++i) {
        const double a = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
        const double b = (sgn(rng) ? 1 : -1) * std::exp(mag(rng));
        const auto A = LogScalar::from_double(a), B = LogScalar::from_double(b);
        CHECK((A * B).to_double() == doctest::Approx(a * b).epsilon(1e-12));
        CHECK((A / B).to_double() == doctest::Approx(a / b).epsilon(1e-12));
        const double s = a + b;
        CHECK((A + B).to_double() == doctest::Approx(s).epsilon(1e-9).scale(std::max(std::fabs(a), std::fabs(b))));
        CHECK(((A < B)) == (a < b));
    }
    const auto x = LogScalar::from_double(3.5);
    CHECK((x - x).sign() == 0);
    CHECK((x + LogScalar::zero()) == x);
    CHECK(LogScalar::from_double(0.0).to_double() == 0.0);

    // Exponents far outside the double range stay exact.
    const BigInt e = boost::multiprecision::pow(BigInt(5), 40);
    const auto tiny = LogScalar::pow2(BigInt(-1) * e);
    CHECK(tiny.to_double() == 0.0);
    CHECK(tiny.sign() == 1);
    CHECK((tiny / tiny).to_double() == 1.0);
    CHECK(((tiny + tiny) / tiny).to_double() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK((tiny + LogScalar::from_double(1.0)).to_double() == 1.0);
    CHECK(tiny < LogScalar::pow2(-1000.0));
}

TEST_CASE("doubling ratio of the annular weight") {
    AnnularWeightSpec spec;  // N = 2, beta = 2, K = 10
    auto r5 = doubling_report(spec, 5);
    REQUIRE(r5.closed_lower_bound);
    CHECK(*r5.closed_lower_bound == doctest::Approx(3.0 / (4 * (1.0 / 25 + 8.0 / 125 + 2 * std::pow(5.0, -20)))));
    CHECK(std::round(*r5.closed_lower_bound * 1e4) / 1e4 == doctest::Approx(7.2115));
    CHECK(r5.log_r.log2_integer_part() == BigInt(-1) * boost::multiprecision::pow(BigInt(5), 40));

    double prev = 0.0;
    for (int k = 5; k <= 10; ++k) {
        auto r = doubling_report(spec, k);
        CHECK(r.ratio_dominates);
        const double ratio = r.ratio.to_double();
        CHECK(r.ratio_exact >= *r.closed_lower_bound_exact);
        CHECK(r.ratio_exact > *r.closed_lower_bound_exact);
        CHECK(ratio == doctest::Approx(ratio_oracle(2, k).convert_to<double>()).epsilon(1e-10));
        CHECK(to_double(r.ratio_exact) == doctest::Approx(ratio_oracle(2, k).convert_to<double>()).epsilon(1e-15));
        CHECK(ratio > prev);
        prev = ratio;
    }
    CHECK_THROWS_AS(doubling_report(spec, 4), DomainError);
    CHECK_THROWS_AS(doubling_report(spec, 11), DomainError);

    for (int beta = 2; beta <= 4; ++beta) {
        for (int N = 2; N <= 3; ++N) {
            AnnularWeightSpec s{N, beta, 12};
            for (int k = 5; k <= 12; ++k) {
                auto r = doubling_report(s, k);
                CHECK(std::isfinite(r.ratio.to_double()));
                CHECK(r.ratio.to_double() > 0.0);
                CHECK(r.ratio_dominates);
                CHECK(lbeta_mass_check(s, k).pass);
            }
        }
    }

    AnnularWeightSpec empty;
    empty.empty = true;
    auto re = doubling_report(empty, 7);
    CHECK(re.ratio == LogScalar::pow2(BigInt(2)));
    CHECK(re.ratio.to_double() == 4.0);
    CHECK(re.ratio_exact == 4);
    CHECK_FALSE(re.closed_lower_bound);
}

TEST_CASE("L^beta mass bound") {
    AnnularWeightSpec spec;
    auto m = lbeta_mass_check(spec, 5);
    CHECK(m.pass);
    // log2(lhs) = 40 log2 5 + 2 + log2 sigma_2 - 2 * 5^40.
    const double small = 40 * std::log2(5.0) + 2 + std::log2(std::numbers::pi);
    const BigInt big = BigInt(-2) * boost::multiprecision::pow(BigInt(5), 40);
    const double fl = std::floor(small);
    CHECK(m.lhs.log2_integer_part() == big + BigInt(static_cast<long long>(fl)));
    CHECK(m.lhs.log2_fraction() == doctest::Approx(small - fl).epsilon(1e-12));
    // log2(rhs) = 2 + log2 sigma_2 - 5.
    CHECK(m.rhs.log2_magnitude() == doctest::Approx(2 + std::log2(std::numbers::pi) - 5));

    LogScalar prev = m.margin;
    for (int k = 6; k <= 10; ++k) {
        auto mk = lbeta_mass_check(spec, k);
        CHECK(mk.pass);
        CHECK(prev < mk.margin);
        prev = mk.margin;
    }
    AnnularWeightSpec bad;
    bad.beta = 1;
    CHECK_THROWS_AS(lbeta_mass_check(bad, 5), DomainError);
    bad.beta = 2;
    bad.K = 4;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("rasterized annular weight") {
    grid::Grid g(grid::Domain{}, 128, 1);
    AnnularWeightSpec toy;
    toy.schedule = Schedule::toy;
    toy.K = 6;
    auto bbar = rasterize_annular(toy, g);
    const auto centers = toy.centers();
    std::size_t on = 0;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            const double v = bbar[g.index(i, j)];
            CHECK(v >= 1.0);
            const auto c = g.center(i, j);
            const double d5 = std::hypot(c[0] - centers[0][0], c[1] - centers[0][1]);
            const double d6 = std::hypot(c[0] - centers[1][0], c[1] - centers[1][1]);
            const bool in5 = d5 >= 1.0 / 32 && d5 < 2.0 / 32, in6 = d6 >= 1.0 / 64 && d6 < 2.0 / 64;
            if (!in5 && !in6) CHECK(v == 1.0);
            if (in5 || in6) ++on;
        }
    }
    CHECK(on > 0);
    auto full = rasterize_annular(AnnularWeightSpec{}, g);
    for (double v : full) CHECK(v == 1.0);
}

TEST_CASE("distance weight") {
    grid::Grid g(grid::Domain{}, 9, 1);
    auto w = build_distance_weight({0.5}, g);
    CHECK(w.b[g.index(4, 4)] == doctest::Approx(std::sqrt(0.5)));
    CHECK(w.b[g.index(0, 4)] == doctest::Approx(std::pow(g.h() / 2, 0.5)));
    CHECK(w.b[g.index(0, 4)] > 0.0);
    CHECK(w.b22[g.index(0, 4)] == 1.0);
    CHECK(grid::check_sandwich(g, w).pass);
    auto w0 = build_distance_weight({1e-9}, g);
    for (std::size_t c = 0; c < g.cells(); ++c) CHECK(w0.b[c] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(build_distance_weight({1.0}, g), DomainError);
    CHECK_THROWS_AS(build_distance_weight({0.0}, g), DomainError);
}

TEST_CASE("inverse integrability") {
    const auto p16 = grid::derive_params(2, 1.6, 0.5);
    grid::Grid g(grid::Domain{}, 32, 1);
    auto one = check_inverse_integrability(g, grid::WeightField::identity(g), p16);
    CHECK(one.pass);
    CHECK(one.integral == doctest::Approx(1.0));

    auto mild = check_inverse_integrability(g, build_distance_weight({0.1}, g), p16, 0.1);
    CHECK(mild.exponent * 0.1 == doctest::Approx(0.4));
    CHECK(mild.pass);
    grid::Grid fine(grid::Domain{}, 64, 1);
    auto mild2 = check_inverse_integrability(fine, build_distance_weight({0.1}, fine), p16, 0.1);
    CHECK(mild2.integral == doctest::Approx(mild.integral).epsilon(0.05));

    const auto p19 = grid::derive_params(2, 1.9, 0.5);
    auto harsh = check_inverse_integrability(g, build_distance_weight({0.9}, g), p19, 0.9);
    REQUIRE(harsh.analytic_pass);
    CHECK_FALSE(*harsh.analytic_pass);
    CHECK_FALSE(harsh.pass);
    CHECK(0.9 * harsh.exponent == doctest::Approx(17.1));
    auto harsh2 = check_inverse_integrability(fine, build_distance_weight({0.9}, fine), p19, 0.9);
    CHECK(harsh2.integral > 100 * harsh.integral);

    auto zero = grid::WeightField::identity(g);
    zero.b[g.index(3, 7)] = 0.0;
    auto z = check_inverse_integrability(g, zero, p16);
    CHECK_FALSE(z.pass);
    CHECK(z.zero_cell == g.index(3, 7));
}
