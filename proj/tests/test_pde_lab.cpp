#include "moserlab/errors.hpp"
#include "moserlab/pde_lab.hpp"
#include "moserlab/weight_forge.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace moserlab;
using namespace moserlab::pde;

namespace {

constexpr double pi = std::numbers::pi;

ParabolicProblem heat(const grid::Grid& g, SourceFn f) {
    ParabolicProblem p;
    p.name = "heat";
    p.weights = grid::WeightField::identity(g);
    p.f = std::move(f);
    return p;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
    grid::Grid g(grid::Domain{}, 16, 5);
    const auto sol = assemble_and_solve(heat(g, [](double, double, double) { return 0.0; }), g);
    CHECK(max_abs(sol.u.values()) == 0.0);
    ParabolicProblem none;
    none.weights = grid::WeightField::identity(g);
    CHECK(max_abs(assemble_and_solve(none, g).u.values()) == 0.0);
}

TEST_CASE("stiffness stencil") {
    grid::Grid g(grid::Domain{}, 12, 1);
    const auto K = stiffness(g, grid::WeightField::identity(g));
    // Cell-centred sin(pi x) sin(pi y) is an exact eigenvector: the ghost value mirrors with a sign flip.
    std::vector<double> s(g.cells()), y;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            const auto c = g.center(i, j);
            s[g.index(i, j)] = std::sin(pi * c[0]) * std::sin(pi * c[1]);
        }
    }
    kernels::serial::apply(K, s, y);
    const double lam = 8 * std::pow(std::sin(pi * g.h() / 2), 2);
    for (std::size_t c = 0; c < g.cells(); ++c) CHECK(y[c] == doctest::Approx(lam * s[c]).epsilon(1e-12));

    // Pure Neumann box: constants are in the kernel.
    grid::Domain neumann;
    neumann.A = grid::face_left;
    grid::Grid gn(neumann, 8, 1);
    const auto Kn = stiffness(gn, grid::WeightField::scaled_identity(gn, 3.0));
    std::vector<double> one(gn.cells(), 1.0), z;
    kernels::serial::apply(Kn, one, z);
    for (int j = 0; j < gn.n(); ++j) {
        for (int i = 0; i < gn.n(); ++i) CHECK(z[gn.index(i, j)] == doctest::Approx(i == 0 ? 6.0 : 0.0));
    }
    // Face coefficients are arithmetic means.
    auto w = grid::WeightField::diagonal(std::vector<double>(gn.cells(), 1.0), std::vector<double>(gn.cells(), 1.0));
    w.b11[gn.index(2, 2)] = 5.0;
    w.bbar[gn.index(2, 2)] = 5.0;
    const auto Kw = stiffness(gn, w);
    CHECK(Kw.ex[gn.index(2, 2)] == doctest::Approx(3.0));
    CHECK(Kw.ex[gn.index(1, 2)] == doctest::Approx(3.0));
    CHECK(Kw.ny[gn.index(2, 2)] == doctest::Approx(1.0));

    auto bad = grid::WeightField::identity(g);
    bad.b12[0] = 0.1;
    CHECK_THROWS_AS(stiffness(g, bad), DomainError);
}

TEST_CASE("manufactured convergence") {
    const auto space = manufactured_convergence("heat-smooth", {16, 32, 64});
    MESSAGE("spatial order " << space.order);
    CHECK(space.monotone);
    CHECK(space.order >= 1.8);
    CHECK(space.order <= 2.2);

    const auto time = manufactured_convergence("heat-time", {10, 20, 40, 80}, Refinement::time);
    MESSAGE("time order " << time.order);
    CHECK(time.monotone);
    CHECK(time.order == doctest::Approx(1.0).epsilon(0.1));

    const auto degenerate = manufactured_convergence("degenerate-0.5", {16, 32, 64});
    MESSAGE("degenerate order " << degenerate.order);
    for (double e : degenerate.errors) CHECK(std::isfinite(e));

    CHECK_THROWS_AS(manufactured_convergence("heat-smooth", {16, 32}), DomainError);
    CHECK_THROWS_AS(manufactured_case("nope"), ConfigError);
}

TEST_CASE("weak residual") {
    grid::Grid g(grid::Domain{}, 24, 12);
    const auto p = heat(g, [](double x, double y, double t) { return (1 + t) * std::exp(-10 * ((x - 0.4) * (x - 0.4) + y * y)); });
    const auto sol = assemble_and_solve(p, g);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto phi = random_test_function(g, 17, i);
        const double scale = grid::weighted_norms(g, phi, p.weights).V_norm;
        REQUIRE(scale > 0.0);
        CHECK(weak_residual(sol.u, p, g, phi) <= 1e-8 * scale);
    }
    CHECK(weak_residual(sol.u, p, g, grid::GridFunction(g)) == 0.0);

    // Perturbing u at one interior node against the indicator of that node moves the defect by
    // the diagonal of the step operator, dt (h^2/dt + K_PP).
    const std::size_t level = 5, P = g.index(10, 11);
    grid::GridFunction ind(g);
    ind.at(level, P) = 1.0;
    auto bumped = sol.u;
    bumped.at(level, P) += 1.0;
    const double jump = weak_defect(bumped, p, g, ind) - weak_defect(sol.u, p, g, ind);
    CHECK(jump == doctest::Approx(g.h() * g.h() + g.dt() * 4.0).epsilon(1e-9));

    auto bad = random_test_function(g, 17, 0);
    bad.at(0, P) = 1.0;
    CHECK_THROWS_AS(weak_residual(sol.u, p, g, bad), DomainError);
    auto edge = random_test_function(g, 17, 0);
    edge.at(3, g.index(0, 5)) = 1.0;
    CHECK_THROWS_AS(weak_residual(sol.u, p, g, edge), DomainError);
}

TEST_CASE("solver options") {
    grid::Grid g(grid::Domain{}, 20, 4);
    const auto p = heat(g, [](double x, double, double) { return x; });
    const auto a = assemble_and_solve(p, g);
    SolveOptions par;
    par.parallel = true;
    const auto b = assemble_and_solve(p, g, par);
    for (std::size_t i = 0; i < a.u.values().size(); ++i) CHECK(a.u.values()[i] == doctest::Approx(b.u.values()[i]).epsilon(1e-10));
    CHECK(a.stats.steps == 4);
    CHECK(a.stats.max_residual <= 1e-12);
    SolveOptions starved;
    starved.max_iter = 1;
    CHECK_THROWS_AS(assemble_and_solve(p, g, starved), SolverError);

    auto broken = p;
    broken.weights.b[3] = 2.0;  // b above B
    CHECK_THROWS_AS(assemble_and_solve(broken, g), DomainError);
}

TEST_CASE("maximum principle and degenerate weights") {
    for (const auto& e : default_battery()) {
        grid::Grid g(e.domain, 24, 8);
        const auto p = e.make(g);
        const auto sol = assemble_and_solve(p, g);
        const auto F = source_values(p, g);
        double fmin = INFINITY;
        for (std::size_t k = 1; k < g.levels(); ++k) {
            for (std::size_t c = 0; c < g.cells(); ++c) {
                if (g.active(c)) fmin = std::min(fmin, F.at(k, c));
            }
        }
        const double scale = std::max(1.0, max_abs(sol.u.values()));
        if (fmin >= 0.0) CHECK(min_value(g, sol.u) >= -1e-9 * scale);
        CHECK(std::isfinite(max_abs(sol.u.values())));
    }
    grid::Grid g(grid::Domain{}, 32, 10);
    ParabolicProblem p;
    p.weights = weights::build_distance_weight({0.2}, g);
    p.f = [](double, double, double) { return 1.0; };
    const auto sol = assemble_and_solve(p, g);
    const double sup = grid::lp_norm_Q(g, sol.u, INFINITY);
    MESSAGE("degenerate gamma = 0.2 sup " << sup);
    CHECK(sup > 0.0);
    CHECK(std::isfinite(sup));
}

TEST_CASE("chain rule on a smooth field") {
    double prev = INFINITY;
    for (int n : {16, 32, 64}) {
        grid::Grid g(grid::Domain{}, n, 1);
        std::vector<double> u(g.cells());
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const auto c = g.center(i, j);
                u[g.index(i, j)] = std::sin(2 * pi * c[0]) * std::sin(pi * c[1]) + 0.2;
            }
        }
        for (double s : {2.0, 3.0}) {
            const auto r = chain_rule_check(g, u, s, 3.0);
            CHECK(r.pass);
            CHECK(r.defect > 0.0);
            if (s == 2.0) {
                CHECK(r.defect < prev);
                prev = r.defect;
            }
        }
    }
    grid::Grid g(grid::Domain{}, 8, 1);
    CHECK_THROWS_AS(chain_rule_check(g, std::vector<double>(g.cells(), 0.0), 1.5, 3.0), DomainError);
}

TEST_CASE("structure checks") {
    grid::Grid g(grid::Domain{}, 16, 4);
    const auto p = heat(g, [](double x, double y, double) { return std::cos(3 * x) - y; });
    const auto st = structure_of(p, g);
    CHECK(check_cc8(g, p.weights, st));
    const auto sol = assemble_and_solve(p, g);
    const auto F = source_values(p, g);
    CHECK(check_elz(g, sol.u, F, st).pass);
    auto tight = st;
    for (double& v : tight.a2) v *= 0.5;
    CHECK_FALSE(check_elz(g, sol.u, F, tight).pass);
    auto over = st;
    over.a0.assign(g.cells(), 1.0);
    CHECK_FALSE(check_cc8(g, p.weights, over));
}

TEST_CASE("bound consistency on single problems") {
    grid::Grid g(grid::Domain{}, 24, 10);
    ConsistencyOptions o;
    o.chain = grid::derive_params(2, 1.6, 0.5);
    for (double alpha : {9.0, 3.6}) {
        o.alpha = alpha;
        const auto r = bound_consistency(heat(g, [](double x, double y, double) { return 10 * x * y; }), g, o);
        CHECK(r.asserted);
        CHECK(r.pass);
        CHECK(r.ladder.bound.case_id == (alpha > 4.5 ? 1 : 2));
        CHECK(r.sup_norm > 0.0);
        CHECK(r.log10_slack > 0.0);
        CHECK(r.energy.pass);
        CHECK(r.ladder.rungs.size() == 9);
    }
    o.alpha = 9.0;
    const auto zero = bound_consistency(heat(g, [](double, double, double) { return 0.0; }), g, o);
    CHECK(zero.sup_norm == 0.0);
    CHECK(zero.pass);
    CHECK(zero.ladder.bound.log10_bound >= 0.0);
}

TEST_CASE("CSV export") {
    grid::Domain ell;
    ell.shape = grid::Shape::l_shape;
    grid::Grid g(ell, 4, 2);
    auto u = grid::GridFunction::sample(g, [](double x, double y, double t) { return x + 10 * y + 100 * t; });
    std::ostringstream os;
    write_level_csv(os, g, u, 1);
    std::istringstream in(os.str());
    std::string line;
    int header = 0;
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) ++header;
        else rows.push_back(line);
    }
    CHECK(header == 6);
    REQUIRE(rows.size() == 4);
    CHECK(std::count(rows[0].begin(), rows[0].end(), ',') == 3);
    CHECK(rows[0].rfind("51.375,", 0) == 0);
    // The upper-right quadrant of the L-shape is empty.
    CHECK(rows[3].substr(rows[3].size() - 2) == ",,");
    CHECK_THROWS_AS(write_level_csv(os, g, u, 3), DomainError);
}

TEST_CASE("bound battery") {
    const auto battery = default_battery();
    CHECK(battery.size() == 12);
    ConsistencyOptions o;
    o.chain = grid::derive_params(2, 1.6, 0.5);
    const auto reports = run_battery(battery, {9.0, 3.6}, o);
    REQUIRE(reports.size() == 24);
    int embedded = 0;
    for (const auto& r : reports) embedded += r.energy.embedding_ok;
    MESSAGE("embedding link holds with the sampled C in " << embedded << " of " << reports.size() << " runs");
    for (const auto& r : reports) {
        INFO(r.name << " alpha " << r.alpha);
        CHECK(r.asserted);
        CHECK(r.pass);
        CHECK(r.ladder.recursion_ok);
        CHECK(r.energy.pass);
        CHECK(r.energy.energy_ok);
        CHECK(r.sup_norm > 0.0);
        CHECK(std::isfinite(r.ladder.bound.log10_bound));
    }
}
