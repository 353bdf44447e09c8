#include "moserlab/errors.hpp"
#include "moserlab/kernels.hpp"
#include "moserlab/spaces_grid.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace moserlab;
using namespace moserlab::grid;

namespace {

Domain square(unsigned A = face_all) { return Domain{2, Shape::unit_square, A, 1.0}; }

}  // namespace

TEST_CASE("parameter chain") {
    auto p = derive_params(2, 1.6, 0.5);
    CHECK(p.r == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(p.tstar == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(p.rbar == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(tbar_lower_exact(2) == make_rational(10, 7));
    CHECK_THROWS_AS(derive_params(2, 1.3, 0.5), DomainError);
    CHECK_THROWS_AS(derive_params(2, 2.0, 0.5), DomainError);
    CHECK_THROWS_AS(derive_params(2, 1.6, 1.0), DomainError);
    CHECK_THROWS_AS(derive_params(1, 1.6, 0.5), DomainError);

    auto e = exact_chain(2, make_rational(8, 5));
    CHECK(e.r == 7);
    CHECK(e.tstar == 8);
    CHECK(e.ordered);
    CHECK_FALSE(exact_chain(3, Rational(2)).ordered);
    CHECK_THROWS_AS(exact_chain(2, Rational(2)), DomainError);
}

TEST_CASE("chain ordering holds exactly for random admissible tbar") {
    std::mt19937_64 rng(17);
    for (int N = 2; N <= 5; ++N) {
        const double lo = tbar_lower(N);
        std::uniform_real_distribution<double> dist(lo, 2.0);
        for (int k = 0; k < 100; ++k) {
            double t = dist(rng);
            if (t <= lo) continue;
            const Rational tb = from_double_exact(t);
            REQUIRE(tb > tbar_lower_exact(N));
            auto c = exact_chain(N, tb);
            CHECK(c.ordered);
            auto p = derive_params(N, t, 0.5);
            CHECK(1 < p.tbar);
            CHECK(p.tbar < 2);
            CHECK(2 < p.rbar);
            CHECK(p.rbar < p.r);
            CHECK(p.r < p.tstar);
        }
    }
}

TEST_CASE("domains and grid geometry") {
    CHECK(parse_shape("L-shape") == Shape::l_shape);
    CHECK_THROWS_AS(parse_shape("torus"), ConfigError);
    CHECK(parse_faces("left, top") == (face_left | face_top));
    CHECK(parse_faces("all") == face_all);
    CHECK_THROWS_AS(parse_faces("front"), ConfigError);
    CHECK(faces_to_string(face_left | face_bottom) == "left,bottom");
    CHECK_THROWS_AS(Grid(square(0), 8, 4), ConfigError);
    CHECK_THROWS_AS(Grid(Domain{2, Shape::unit_ball, face_left, 1.0}, 8, 4), ConfigError);
    CHECK_THROWS_AS(Grid(Domain{2, Shape::l_shape, face_all, 1.0}, 7, 4), DomainError);

    Grid sq(square(), 16, 4);
    CHECK(sq.measure() == doctest::Approx(1.0));
    CHECK(sq.h() == doctest::Approx(1.0 / 16));
    CHECK(sq.dt() == doctest::Approx(0.25));
    CHECK(sq.distance_to_A(0.5, 0.5) == doctest::Approx(0.5));
    Grid open_left(square(face_all & ~face_left), 16, 4);
    CHECK(open_left.distance_to_A(0.1, 0.5) == doctest::Approx(0.5));
    CHECK_FALSE(open_left.dirichlet_face(0, 5, 0));
    CHECK(open_left.dirichlet_face(15, 5, 1));
    CHECK(open_left.distance_to_boundary(0.1, 0.5) == doctest::Approx(0.1));

    Grid L(Domain{2, Shape::l_shape, face_all, 1.0}, 16, 4);
    CHECK(L.measure() == doctest::Approx(0.75));
    CHECK_FALSE(L.active(12, 12));
    CHECK(L.dirichlet_face(7, 12, 1));  // reentrant side x = 1/2
    CHECK(L.distance_to_A(0.45, 0.75) == doctest::Approx(0.05));

    Grid ball(Domain{2, Shape::unit_ball, face_all, 1.0}, 64, 4);
    CHECK(ball.measure() == doctest::Approx(std::numbers::pi).epsilon(0.02));
    CHECK(ball.distance_to_A(0.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("weighted norms") {
    Grid g(square(), 32, 10);
    const auto I = WeightField::identity(g);
    auto zero = GridFunction(g);
    auto n0 = weighted_norms(g, zero, I, {2.0, 5.0});
    CHECK(n0.b_norm == 0.0);
    CHECK(n0.B_norm == 0.0);
    CHECK(n0.V_norm == 0.0);
    CHECK(n0.lp[1].second == 0.0);

    auto x1 = GridFunction::sample(g, [](double x, double, double) { return x; });
    auto n1 = weighted_norms(g, x1, I);
    CHECK(n1.B_norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n1.dt_L2 == doctest::Approx(0.0));

    auto n2 = weighted_norms(g, x1, WeightField::scaled_identity(g, 2.0));
    CHECK(n2.B_norm == doctest::Approx(std::sqrt(2.0) * n1.B_norm).epsilon(1e-12));

    // u = t on Q: ||u_t||_{L^2} = 1, ||u||_{L^2(Q)} uses levels 1..nt.
    auto tt = GridFunction::sample(g, [](double, double, double t) { return t; });
    auto n3 = weighted_norms(g, tt, I, {2.0});
    CHECK(n3.dt_L2 == doctest::Approx(1.0).epsilon(1e-12));
    double oracle = 0.0;
    for (int k = 1; k <= 10; ++k) oracle += 0.1 * (0.1 * k) * (0.1 * k);
    CHECK(n3.lp[0].second == doctest::Approx(std::sqrt(oracle)).epsilon(1e-12));
    CHECK(lp_norm_Q(g, tt, INFINITY) == doctest::Approx(1.0));

    Grid other(square(), 16, 10);
    CHECK_THROWS_AS(weighted_norms(other, x1, I), DomainError);
}

TEST_CASE("b-norm never exceeds B-norm under the sandwich") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    Grid g(Domain{2, Shape::l_shape, face_all, 0.5}, 16, 5);
    for (int trial = 0; trial < 50; ++trial) {
        WeightField w = WeightField::identity(g);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            w.b11[c] = 0.1 + 2 * U(rng);
            w.b22[c] = 0.1 + 2 * U(rng);
            w.b12[c] = (U(rng) - 0.5) * 0.1;
            auto ev = sym2_eigenvalues(w.b11[c], w.b12[c], w.b22[c]);
            w.b[c] = ev[0] * U(rng);
            w.bbar[c] = ev[1] * (1 + U(rng));
        }
        REQUIRE(check_sandwich(g, w).pass);
        const double a = U(rng), b = U(rng);
        auto u = GridFunction::sample(g, [&](double x, double y, double t) { return t * std::sin(3 * a * x + b * y * y); });
        auto n = weighted_norms(g, u, w);
        CHECK(n.b_norm <= n.B_norm * (1 + 1e-12));
    }
}

TEST_CASE("sandwich check") {
    Grid g(square(), 4, 1);
    auto w = WeightField::diagonal(std::vector<double>(16, 0.3), std::vector<double>(16, 2.0));
    CHECK(check_sandwich(g, w).pass);

    auto bad = WeightField::identity(g);
    for (auto& v : bad.b) v = 2.0;
    for (auto& v : bad.bbar) v = 3.0;
    auto r = check_sandwich(g, bad);
    CHECK_FALSE(r.pass);
    CHECK(r.failing_cell == std::size_t{0});

    auto off = WeightField::identity(g);
    for (auto& v : off.b12) v = 0.5;
    for (auto& v : off.b) v = 0.4;
    for (auto& v : off.bbar) v = 1.6;
    auto ro = check_sandwich(g, off);
    CHECK(ro.pass);
    CHECK(ro.lambda_min == doctest::Approx(0.5));
    CHECK(ro.lambda_max == doctest::Approx(1.5));
}

TEST_CASE("admissibility estimation") {
    const auto p = derive_params(2, 1.6, 0.5);
    Grid g(square(), 64, 1);
    SpatialFunction sinsin = [](double x, double y) { return std::sin(std::numbers::pi * x) * std::sin(std::numbers::pi * y); };

    // Closed form of ||sin sin||_{L^r}; the gradient norm by an independent fine midpoint rule.
    const double r = p.r;
    const double Ir = std::tgamma((r + 1) / 2) / (std::sqrt(std::numbers::pi) * std::tgamma(r / 2 + 1));
    const double vr = std::pow(Ir, 2.0 / r);
    const int M = 1500;
    double gsum = 0.0;
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            const double x = (i + 0.5) / M, y = (j + 0.5) / M, pi = std::numbers::pi;
            const double gx = pi * std::cos(pi * x) * std::sin(pi * y), gy = pi * std::sin(pi * x) * std::cos(pi * y);
            gsum += std::pow(std::hypot(gx, gy), p.tbar);
        }
    }
    const double closed = vr / std::pow(gsum / (double(M) * M), 1.0 / p.tbar);
    auto discrete = admissibility_ratio(g, p, sinsin);
    REQUIRE(discrete);
    CHECK(*discrete == doctest::Approx(closed).epsilon(0.02));

    auto e = estimate_admissibility(g, p, 100, 5, {sinsin});
    CHECK(e.C_est >= *discrete);
    CHECK(e.used + e.skipped == 101);
    for (double q : e.ratios) {
        if (!std::isnan(q)) CHECK(q <= e.C_est);
    }
    auto e2 = estimate_admissibility(g, p, 200, 5, {sinsin});
    CHECK(e2.C_est >= e.C_est);
    auto serial = estimate_admissibility(g, p, 100, 5, {sinsin}, false);
    CHECK(serial.C_est == e.C_est);

    CHECK_THROWS_AS(estimate_admissibility(g, p, 10, 5), DomainError);
    std::vector<SpatialFunction> zeros(3, [](double, double) { return 0.0; });
    CHECK_THROWS_AS(estimate_admissibility(g, p, zeros), DomainError);
    zeros.push_back(sinsin);
    auto mixed = estimate_admissibility(g, p, zeros);
    CHECK(mixed.skipped == 3);
    CHECK(mixed.argmax == 3);

    // Candidates vanish on A.
    Grid open(square(face_all & ~face_left), 32, 1);
    auto f = random_candidate(open, 9, 0);
    CHECK(f(1.0, 0.3) == 0.0);
    CHECK(f(0.5, 0.0) == 0.0);
}

TEST_CASE("space-time constant dominates the sampled family") {
    const auto p = derive_params(2, 1.6, 0.5);
    Grid g(square(), 32, 8);
    auto w = WeightField::identity(g);
    auto e = estimate_spacetime_constant(g, w, p, 100, 11);
    CHECK(e.C_est > 0.0);
    CHECK(e.used == 100);
    // Direct check of the chain ||w||_{L^r(Q)} <= C ||w||_{b,T} on an explicit product function.
    auto v = random_candidate(g, 11, 3);
    auto prod = GridFunction::sample(g, [&](double x, double y, double t) { return v(x, y) * t; });
    auto n = weighted_norms(g, prod, w, {p.r});
    CHECK(n.lp[0].second <= 2 * e.C_est * n.b_norm);
    // Degenerate weights shrink the b-norm, so the constant cannot decrease.
    auto thin = WeightField::scaled_identity(g, 0.25);
    CHECK(estimate_spacetime_constant(g, thin, p, 100, 11).C_est == doctest::Approx(2 * e.C_est));
}

TEST_CASE("kernels: serial and parallel agree, CG solves, L^p is overflow-safe") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int n = 24;
    kernels::Stencil s;
    s.n = n;
    s.diag.assign(n * n, 0.0);
    s.ex.assign(n * n, 0.0);
    s.ny.assign(n * n, 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int p = j * n + i;
            if (i + 1 < n) s.ex[p] = 0.5 + U(rng);
            if (j + 1 < n) s.ny[p] = 0.5 + U(rng);
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int p = j * n + i;
            double d = 0.1;
            if (i + 1 < n) d += s.ex[p];
            if (i > 0) d += s.ex[p - 1];
            if (j + 1 < n) d += s.ny[p];
            if (j > 0) d += s.ny[p - n];
            s.diag[p] = d;
        }
    }
    std::vector<double> x(n * n), y1, y2;
    for (auto& v : x) v = U(rng) - 0.5;
    kernels::serial::apply(s, x, y1);
    kernels::omp::apply(s, x, y2);
    CHECK(y1 == y2);
    CHECK(kernels::serial::dot(x, y1) == doctest::Approx(kernels::omp::dot(x, y1)).epsilon(1e-13));
    CHECK(kernels::serial::dot(x, y1) > 0.0);

    std::vector<double> sol;
    auto r = kernels::pcg(s, y1, sol, 1e-12, 1000, true);
    CHECK(r.converged);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(sol[i] == doctest::Approx(x[i]).epsilon(1e-9));

    std::vector<double> w(x.size(), 1.0 / x.size());
    double naive = 0.0;
    for (double v : x) naive += std::pow(std::fabs(v), 3.0) / x.size();
    CHECK(kernels::lp_norm(x, w, 3.0) == doctest::Approx(std::cbrt(naive)).epsilon(1e-12));
    std::vector<double> big(x.size(), 1e200);
    CHECK(kernels::lp_norm(big, w, 50.0) == doctest::Approx(1e200).epsilon(1e-12));
    CHECK(kernels::lp_norm(big, w, 50.0, true) == doctest::Approx(1e200).epsilon(1e-12));
}
