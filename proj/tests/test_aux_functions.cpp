#include <doctest.h>

#include "moserlab/aux_functions.hpp"
#include "moserlab/errors.hpp"
#include "moserlab/sexpr.hpp"

#include <cmath>
#include <random>

using namespace moserlab;
using namespace moserlab::aux;
using moserlab::poly::Expr;

namespace {

// Sum of absolute term magnitudes: the natural floating-point scale of an expression.
double term_scale(const Expr& e, double s, double t) {
    double sum = 0.0;
    for (const auto& [k, c] : e.terms()) {
        sum += std::fabs(c.eval(s)) * std::pow(std::fabs(t), to_double(k.a) * s + to_double(k.q));
    }
    return std::max(sum, 1e-300);
}

void check_close(double numeric, const Expr& symbolic, double s, double t, double rel = 1e-12) {
    const double exact = symbolic.evaluate(s, t);
    CHECK(std::fabs(numeric - exact) <= rel * term_scale(symbolic, s, t));
}

Expr outer_branch(const SLParams& p) {
    return Expr::constant(from_double_exact(p.eta())) + Expr::constant(from_double_exact(p.a())) * Expr::abs_t() +
           Expr::constant(from_double_exact(p.b())) * Expr::abs_pow(0, -1);
}

}  // namespace

TEST_CASE("large-s family at the documented points") {
    const SLParams p(2.0, 3.0);
    CHECK(eval_sl(SLFunction::F, p, 2.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(eval_sl(SLFunction::F, p, 6.0) == doctest::Approx(31.5).epsilon(1e-14));
    CHECK(eval_sl(SLFunction::F, p, 3.0) == doctest::Approx(9.0).epsilon(1e-15));
    CHECK(p.eta() + p.a() * 3.0 + p.b() / 3.0 == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(eval_sl(SLFunction::G, p, 2.0) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK_THROWS_AS(eval_sl(SLFunction::d2F, SLParams(1.5, 3.0), 0.0), DomainError);
    CHECK(eval_sl(SLFunction::d2F, p, 0.0) == 2.0);
    CHECK_THROWS_AS(SLParams(1.0, 3.0), DomainError);
    CHECK_THROWS_AS(SLParams(2.0, 2.5), DomainError);
}

TEST_CASE("small-s family at the documented points") {
    const SmallSParams one(1.0);
    CHECK(eval_small_s(SmallSFunction::theta, one, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_small_s(SmallSFunction::Fbar, one, 0.5) == 0.0);
    CHECK(std::fabs(eval_small_s(SmallSFunction::dtheta, one, 1.0)) < 1e-15);
    CHECK(std::fabs(eval_small_s(SmallSFunction::d2theta, one, 1.0)) < 1e-15);
    CHECK(eval_small_s(SmallSFunction::dGs, one, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_small_s(SmallSFunction::dGs, SmallSParams(0.7), 0.0) == 0.0);
    CHECK_THROWS_AS(eval_small_s(SmallSFunction::dtheta, one, 0.0), DomainError);
    CHECK_THROWS_AS(SmallSParams(0.5), DomainError);
    CHECK_THROWS_AS(SmallSParams(1.2), DomainError);
}

TEST_CASE("constants come from their defining formulas") {
    const auto& c = constants();
    CHECK(c.delta_exact == make_rational(1, 1000000));
    CHECK(c.alpha0_exact == make_rational(99999999, 100000000));
    CHECK(c.c0_exact == Rational(100000000));
    CHECK(c.k0_exact == make_rational(49, 4));
    CHECK(c.c0 == 1e8);
}

TEST_CASE("numeric evaluators agree with symbolic expressions") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> sdist(1.01, 4.0);
    std::uniform_real_distribution<double> ldist(3.0, 12.0);
    std::uniform_real_distribution<double> udist(-1.0, 1.0);
    const Expr inner = Expr::abs_pow(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double s = sdist(rng);
        const double l = ldist(rng);
        const SLParams p(s, l);
        double t = udist(rng) * 5.0 * l;
        if (std::fabs(t) < 1e-3) t = 1e-3;
        const bool in = std::fabs(t) <= l;
        const Expr F = in ? inner : outer_branch(p);
        const Expr dF = poly::differentiate(F);
        const Expr d2F = poly::differentiate(dF);
        const Expr G = F * dF;
        const Expr dG = poly::differentiate(G);
        check_close(eval_sl(SLFunction::F, p, t), F, s, t);
        check_close(eval_sl(SLFunction::dF, p, t), dF, s, t);
        check_close(eval_sl(SLFunction::d2F, p, t), d2F, s, t);
        check_close(eval_sl(SLFunction::G, p, t), G, s, t);
        check_close(eval_sl(SLFunction::dG, p, t), dG, s, t);
    }

    const Expr theta = poly::parse_expr("(* 3/8 (abspow 0 1/2) (+ (^ t 2) (* -10/3 (abs t)) 5))");
    const Expr Fs_in = theta * Expr::abs_pow(1, 0);
    const Expr Fs_out = Expr::abs_pow(1, 0);
    std::uniform_real_distribution<double> smalls(0.5001, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double s = smalls(rng);
        const SmallSParams p(s);
        double t = udist(rng) * 3.0;
        if (std::fabs(t) < 1e-3) t = 1e-3;
        const bool in = std::fabs(t) <= 1.0;
        const Expr Fs = in ? Fs_in : Fs_out;
        const Expr th = in ? theta : Expr::constant(1);
        check_close(eval_small_s(SmallSFunction::theta, p, t), th, s, t);
        check_close(eval_small_s(SmallSFunction::dtheta, p, t), poly::differentiate(th), s, t);
        check_close(eval_small_s(SmallSFunction::d2theta, p, t), poly::differentiate(poly::differentiate(th)), s, t);
        check_close(eval_small_s(SmallSFunction::Fs, p, t), Fs, s, t);
        check_close(eval_small_s(SmallSFunction::dFs, p, t), poly::differentiate(Fs), s, t);
        const Expr Gs = Fs * poly::differentiate(Fs);
        check_close(eval_small_s(SmallSFunction::Gs, p, t), Gs, s, t);
        check_close(eval_small_s(SmallSFunction::dGs, p, t), poly::differentiate(Gs), s, t);
    }
}

TEST_CASE("junction continuity") {
    for (double s : {1.1, 1.5, 2.0, 3.0}) {
        for (double l : {3.0, 5.0, 10.0}) {
            const SLParams p(s, l);
            for (auto f : {SLFunction::F, SLFunction::dF, SLFunction::d2F, SLFunction::G, SLFunction::dG}) {
                double prev = HUGE_VAL;
                for (double eps : {1e-3, 1e-5, 1e-7}) {
                    const double jump = std::fabs(eval_sl(f, p, l + eps) - eval_sl(f, p, l - eps));
                    const double scale = 1.0 + std::fabs(eval_sl(f, p, l));
                    CHECK(jump <= 1e-2 * scale * eps / 1e-3);
                    CHECK(jump <= prev);
                    prev = jump;
                }
            }
        }
    }
    for (double s : {0.55, 0.7, 1.0}) {
        const SmallSParams p(s);
        for (auto f : {SmallSFunction::theta, SmallSFunction::dtheta, SmallSFunction::d2theta, SmallSFunction::Fs,
                       SmallSFunction::dFs, SmallSFunction::Gs, SmallSFunction::dGs}) {
            const double jump = std::fabs(eval_small_s(f, p, 1.0 + 1e-7) - eval_small_s(f, p, 1.0 - 1e-7));
            CHECK(jump < 1e-5);
        }
    }
}

TEST_CASE("parity") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> tdist(0.01, 30.0);
    for (int i = 0; i < 300; ++i) {
        const double t = tdist(rng);
        const SLParams p(1.7, 4.0);
        CHECK(eval_sl(SLFunction::F, p, -t) == eval_sl(SLFunction::F, p, t));
        CHECK(eval_sl(SLFunction::dG, p, -t) == eval_sl(SLFunction::dG, p, t));
        CHECK(eval_sl(SLFunction::G, p, -t) == -eval_sl(SLFunction::G, p, t));
        CHECK(eval_sl(SLFunction::dF, p, -t) == -eval_sl(SLFunction::dF, p, t));
        const SmallSParams q(0.8);
        CHECK(eval_small_s(SmallSFunction::Fs, q, -t) == eval_small_s(SmallSFunction::Fs, q, t));
        CHECK(eval_small_s(SmallSFunction::Fbar, q, -t) == eval_small_s(SmallSFunction::Fbar, q, t));
        CHECK(eval_small_s(SmallSFunction::dGs, q, -t) == eval_small_s(SmallSFunction::dGs, q, t));
        CHECK(eval_small_s(SmallSFunction::Gs, q, -t) == -eval_small_s(SmallSFunction::Gs, q, t));
    }
}

TEST_CASE("k_s estimation") {
    // At s = 1 the ratio is |F_1'|; brute force over the same grid is the oracle.
    const SmallSParams one(1.0);
    double brute = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        brute = std::max(brute, std::fabs(eval_small_s(SmallSFunction::dFs, one, i / 1000.0)));
    }
    CHECK(estimate_k_s(1.0, 1000, 1.1) == doctest::Approx(1.1 * brute).epsilon(1e-12));
    CHECK(std::fabs(eval_small_s(SmallSFunction::Gs, one, 1.0)) / eval_small_s(SmallSFunction::Fs, one, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-14));
    for (double s : {0.6, 0.7, 0.85, 1.0}) {
        const double coarse = estimate_k_s(s, 10000, 1.1);
        const double fine = estimate_k_s(s, 100000, 1.1);
        CHECK(std::fabs(coarse - fine) <= 0.05 * fine);
    }
    CHECK_THROWS_AS(estimate_k_s(0.8, 999, 1.1), DomainError);
    CHECK_THROWS_AS(estimate_k_s(0.8, 1000, 1.0), DomainError);
}
