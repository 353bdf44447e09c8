// One pass/fail line per acceptance criterion. Exit 0 iff every line passes.

#include "moserlab/aux_functions.hpp"
#include "moserlab/lemma_verifier.hpp"
#include "moserlab/moser_bound.hpp"
#include "moserlab/pde_lab.hpp"
#include "moserlab/rational.hpp"
#include "moserlab/spaces_grid.hpp"
#include "moserlab/weight_forge.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace moserlab;

namespace {

constexpr std::uint64_t seed = 20240611;

struct Line {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Runs the registry subset of one kind; every required label must be present and pass.
Line run_kind(verify::ClaimKind kind, const std::vector<std::string>& required, double limit_s) {
    const auto all = verify::default_registry(seed);
    verify::Registry reg;
    for (const auto& [label, e] : all.entries()) {
        if (e.kind == kind) reg.add(e);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep = verify::run_all(reg, true, seed);
    const double t = seconds_since(t0);
    Line l;
    std::set<std::string> passed;
    for (const auto& o : rep.outcomes) {
        if (o.status == verify::ClaimStatus::pass) passed.insert(o.label);
    }
    std::vector<std::string> missing;
    for (const auto& r : required) {
        if (!passed.count(r)) missing.push_back(r);
    }
    l.pass = rep.all_passed() && missing.empty() && t < limit_s;
    std::ostringstream ss;
    ss << passed.size() << "/" << rep.outcomes.size() << " pass, " << required.size() - missing.size() << "/"
       << required.size() << " required labels, " << fmt("%.2f", t) << " s (limit " << limit_s << " s)";
    for (const auto& m : missing) ss << " missing:" << m;
    for (const auto& f : rep.failing_labels()) ss << " failed:" << f;
    l.detail = ss.str();
    return l;
}

Line criterion1() {
    auto l = run_kind(verify::ClaimKind::exact_identity,
                      {"0z", "0zazb", "0zazb-sum", "h23", "h23-decomposition", "f8", "f9", "f10", "fs9z", "fs10z",
                       "fs11z", "lem42-f1", "fs7zbb", "fs12zb"},
                      5.0);
    // The decomposition's remainder term.
    const auto& suite = verify::embedded_suite();
    const bool remainder = std::any_of(suite.identities.begin(), suite.identities.end(), [](const auto& c) {
        return c.label == "0zazb";
    }) && verify::verify_identity(suite, "0zazb").pass;
    l.pass = l.pass && remainder;
    return l;
}

Line criterion2() {
    auto l = run_kind(verify::ClaimKind::certified_positivity, {"wwzb", "0z-floor", "kprime-upper"}, 5.0);
    const auto& suite = verify::embedded_suite();
    int depth = 0;
    bool ok = true;
    for (const char* label : {"wwzb", "0z-floor", "kprime-upper"}) {
        const auto o = verify::verify_positivity(suite, label, 32);
        ok = ok && o.status == verify::ClaimStatus::pass && o.depth <= 32;
        depth = std::max(depth, o.depth);
    }
    // Exact floor of the quartic: threshold 3 plus margin 5/9.
    const auto floor = verify::verify_positivity(suite, "0z-floor", 32);
    const bool exact_floor = floor.margin && *floor.margin + 3 == make_rational(32, 9);
    l.pass = l.pass && ok && exact_floor;
    l.detail += ", max depth " + std::to_string(depth) + " (limit 32), floor " +
                (floor.margin ? to_string(*floor.margin + 3) : std::string("none"));
    return l;
}

Line criterion3() {
    Line l;
    l.pass = true;
    std::ostringstream ss;
    const auto large = verify::large_s_spec(seed), small = verify::small_s_spec(seed);
    const bool grids = large.s == std::vector<double>{1.1, 1.5, 2, 3} && large.l == std::vector<double>{3, 5, 10} &&
                       large.t.size() == 1000 && *std::min_element(large.t.begin(), large.t.end()) >= -100 &&
                       *std::max_element(large.t.begin(), large.t.end()) <= 100 && small.s.size() == 20 &&
                       small.t.size() == 1000 && large.rel_tol == 1e-9 && small.rel_tol == 1e-9 &&
                       std::all_of(small.s.begin(), small.s.end(),
                                   [](double s) { return s > 2.0 / 3 - 1e-6 && s <= 1.0; });
    l.pass = grids;
    std::size_t evals = 0;
    for (const char* label : {"ss1", "ss2", "ss3", "ss4"}) {
        const auto o = verify::check_inequality(label, large);
        evals += o.evaluations;
        if (!o.pass) {
            l.pass = false;
            ss << " violated:" << label << (o.witness ? "@" + *o.witness : "");
        }
    }
    for (const char* label : {"sss1", "sss2", "sss3", "sss4"}) {
        const auto o = verify::check_inequality(label, small);
        evals += o.evaluations;
        if (!o.pass) {
            l.pass = false;
            ss << " violated:" << label << (o.witness ? "@" + *o.witness : "");
        }
    }
    const bool c0 = aux::constants().c0 == 1e8;
    l.pass = l.pass && c0;
    l.detail = "ss1-ss4 on 4 s x 3 l x 1000 t, sss1-sss4 on 20 s x 1000 t, " + std::to_string(evals) +
               " evaluations, rel tol 1e-9, c0 = " + fmt("%.0e", aux::constants().c0) + ss.str() +
               (grids ? "" : " sample grid mismatch");
    return l;
}

Line criterion4() {
    const auto& c = aux::constants();
    // Defining formulas, evaluated here independently.
    const Rational delta = make_rational(1, 1000000);
    const Rational alpha0 = 1 - make_rational(1, 100000000);
    const Rational inv = 1 / (1 - alpha0);
    const Rational c0 = inv > 2 ? inv : Rational(2);
    const Rational inner = make_rational(3, 8) * (1 + make_rational(10, 3) + 5);
    const Rational k0 = inner * inner;
    const bool constants_ok = c.delta_exact == delta && c.alpha0_exact == alpha0 && c.c0_exact == c0 &&
                              c.k0_exact == k0 && k0 == make_rational(49, 4) && c0 == 100000000 && c.k0 == 12.25;
    double worst = 0.0;
    for (double kappa : {1.0 + 1.0 / 13, 4.0 / 3, 14.0 / 9, 2.0, 3.0}) {
        for (int j0 : {0, 1, 6}) {
            const auto closed = bound::tail_sums(kappa, j0);
            const auto partial = bound::partial_tail_sums(kappa, j0, 1000);
            worst = std::max({worst, std::fabs(closed.sum1 - partial.sum1) / std::fabs(partial.sum1),
                              std::fabs(closed.sum2 - partial.sum2) / std::max(std::fabs(partial.sum2), 1e-300)});
        }
    }
    Line l;
    l.pass = constants_ok && worst <= 1e-12;
    l.detail = "delta " + to_string(c.delta_exact) + ", alpha0 " + to_string(c.alpha0_exact) + ", c0 " +
               to_string(c.c0_exact) + ", k0 " + to_string(c.k0_exact) + "; tail sums vs 1000 terms max rel dev " +
               fmt("%.2e", worst) + " (tol 1e-12)";
    return l;
}

Line criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    weights::AnnularWeightSpec spec;
    spec.N = 2;
    spec.beta = 2;
    spec.K = 10;
    bool dominates = true, increasing = true, mass = true;
    std::optional<Rational> prev;
    double lb5 = 0.0;
    for (int k = 5; k <= 10; ++k) {
        const auto d = weights::doubling_report(spec, k);
        dominates = dominates && d.ratio_dominates && d.closed_lower_bound_exact &&
                    d.ratio_exact >= *d.closed_lower_bound_exact;
        if (prev) increasing = increasing && *prev < d.ratio_exact;
        prev = d.ratio_exact;
        if (k == 5) lb5 = d.closed_lower_bound.value_or(0.0);
        mass = mass && weights::lbeta_mass_check(spec, k).pass;
    }
    const double t = seconds_since(t0);
    const bool digits = std::fabs(lb5 - 7.2115) <= 5e-4;
    Line l;
    l.pass = dominates && increasing && mass && digits && t < 1.0;
    l.detail = std::string("ratio >= bound for k=5..10: ") + (dominates ? "yes" : "no") +
               ", strictly increasing: " + (increasing ? "yes" : "no") + ", k=5 bound " + fmt("%.6f", lb5) +
               " (want 7.2115 to 4 digits), mass bound: " + (mass ? "yes" : "no") + ", " + fmt("%.3f", t) +
               " s (limit 1 s)";
    return l;
}

Line criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto conv = pde::manufactured_convergence("heat-smooth", {16, 32, 64}, pde::Refinement::space);
    const grid::Grid g(grid::Domain{}, 32, 16);
    pde::ParabolicProblem p;
    p.name = "weak";
    p.weights = grid::WeightField::identity(g);
    p.f = pde::named_source("bump");
    const auto sol = pde::assemble_and_solve(p, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto phi = pde::random_test_function(g, seed, i);
        const double scale = grid::weighted_norms(g, phi, p.weights).V_norm;
        worst = std::max(worst, pde::weak_residual(sol.u, p, g, phi) / scale);
    }
    const double t = seconds_since(t0);
    Line l;
    l.pass = conv.order >= 1.8 && conv.order <= 2.2 && worst <= 1e-8 && t < 60.0;
    l.detail = "spatial order " + fmt("%.4f", conv.order) + " over h = 1/16,1/32,1/64 (want [1.8, 2.2]), max weak residual / ||phi||_V " +
               fmt("%.2e", worst) + " over 10 test functions (tol 1e-8), " + fmt("%.1f", t) + " s (limit 60 s)";
    return l;
}

Line criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto battery = pde::default_battery();
    pde::ConsistencyOptions o;
    o.chain = grid::derive_params(2, 1.6, 0.5);
    o.seed = seed;
    o.m_max = 8;
    const auto runs = pde::run_battery(battery, {9.0, 3.6}, o, true);
    const double t = seconds_since(t0);
    int pass = 0, degenerate = 0, rungs = 0;
    bool both_cases = false;
    std::set<int> cases;
    std::string failing;
    for (const auto& r : runs) {
        const bool ok = r.asserted && r.pass && r.ladder.recursion_ok &&
                        std::all_of(r.ladder.rungs.begin(), r.ladder.rungs.end(), [](const auto& g) { return g.ok; }) &&
                        static_cast<int>(r.ladder.rungs.size()) == o.m_max + 1;
        pass += ok;
        rungs += static_cast<int>(r.ladder.rungs.size());
        if (!ok) failing += " " + r.name + "@" + fmt("%g", r.alpha);
        if (r.name.rfind("degenerate", 0) == 0) ++degenerate;
        cases.insert(r.ladder.bound.case_id);
    }
    both_cases = cases.size() == 2;
    Line l;
    l.pass = battery.size() >= 7 && degenerate > 0 && pass == static_cast<int>(runs.size()) && t < 300.0;
    l.detail = std::to_string(battery.size()) + " problems x 2 alphas: " + std::to_string(pass) + "/" +
               std::to_string(runs.size()) + " runs with sup <= bound and " + std::to_string(rungs) +
               " rungs (m <= 8) on the recursion, cases " + (both_cases ? "1 and 2" : "one only") + ", " +
               fmt("%.1f", t) + " s (limit 300 s)" + failing;
    return l;
}

Line criterion8() {
    std::mt19937_64 rng(seed);
    const BigInt q = 1000000007;
    int ordered = 0, total = 0;
    for (int N = 2; N <= 5; ++N) {
        const Rational lo = grid::tbar_lower_exact(N);
        std::uniform_int_distribution<long long> pick(1, 1000000006);
        for (int i = 0; i < 100; ++i) {
            const Rational u(BigInt(pick(rng)), q);
            const Rational tbar = lo + (2 - lo) * u;
            const auto ex = grid::exact_chain(N, tbar);
            const bool ok = ex.ordered && 1 < ex.tbar && ex.tbar < 2 && 2 < ex.r && ex.r < ex.tstar;
            ordered += ok;
            ++total;
        }
    }
    Line l;
    l.pass = ordered == total && total == 400;
    l.detail = std::to_string(ordered) + "/" + std::to_string(total) +
               " random tbar (100 per N = 2..5) with 1 < tbar < 2 < r < tstar exactly";
    return l;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Line()>>> criteria = {
        {"exact identities", criterion1},       {"certified positivity", criterion2},
        {"inequality suite", criterion3},       {"constants and tail sums", criterion4},
        {"non-doubling weight", criterion5},    {"solver order and weak residual", criterion6},
        {"end-to-end bound battery", criterion7}, {"parameter chain", criterion8},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Line l;
        try {
            l = criteria[i].second();
        } catch (const std::exception& e) {
            l.pass = false;
            l.detail = std::string("exception: ") + e.what();
        }
        failed += !l.pass;
        std::printf("[%s] %zu %s: %s\n", l.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, l.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
