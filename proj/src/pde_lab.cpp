#include "moserlab/pde_lab.hpp"

#include "moserlab/aux_functions.hpp"
#include "moserlab/errors.hpp"
#include "moserlab/weight_forge.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

namespace moserlab::pde {

namespace {

constexpr double pi = std::numbers::pi;

void check_weights(const grid::Grid& g, const grid::WeightField& w) {
    if (w.b.size() != g.cells() || w.b11.size() != g.cells() || w.b22.size() != g.cells()) {
        throw DomainError("weight field does not match the grid");
    }
    if (!w.is_diagonal()) throw DomainError("the solver handles diagonal B only");
}

void check_shape(const grid::Grid& g, const grid::GridFunction& u) {
    if (u.cells() != g.cells() || u.levels() != g.levels()) throw DomainError("grid function does not match the grid");
}

double mass(const grid::Grid& g) { return g.h() * g.h() / g.dt(); }

std::vector<double> apply(const kernels::Stencil& s, const std::vector<double>& x) {
    std::vector<double> y;
    kernels::serial::apply(s, x, y);
    return y;
}

double dist_to_square_boundary(double x, double y, double& ddx) {
    const double c[4] = {x, 1 - x, y, 1 - y};
    int k = 0;
    for (int i = 1; i < 4; ++i) {
        if (c[i] < c[k]) k = i;
    }
    ddx = k == 0 ? 1.0 : (k == 1 ? -1.0 : 0.0);
    return c[k];
}

}  // namespace

grid::GridFunction source_values(const ParabolicProblem& p, const grid::Grid& g) {
    grid::GridFunction f(g);
    if (!p.f) return f;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const double t = g.time(k);
        for (int j = 0; j < g.n(); ++j) {
            for (int i = 0; i < g.n(); ++i) {
                if (!g.active(i, j)) continue;
                const auto c = g.center(i, j);
                f.at(k, g.index(i, j)) = p.f(c[0], c[1], t);
            }
        }
    }
    return f;
}

Structure structure_of(const ParabolicProblem& p, const grid::Grid& g) {
    if (p.structure) {
        const auto& s = *p.structure;
        for (const auto* v : {&s.a0, &s.a1, &s.a2, &s.a}) {
            if (v->size() != g.cells()) throw DomainError("structure functions do not match the grid");
        }
        return s;
    }
    if (!(p.structure_eps > 0.0)) throw DomainError("structure_eps must be positive");
    const auto f = source_values(p, g);
    double sup = 0.0;
    for (double v : f.values()) sup = std::max(sup, std::fabs(v));
    Structure s;
    s.a0.assign(g.cells(), 0.0);
    s.a1.assign(g.cells(), 0.0);
    s.a2.assign(g.cells(), sup);
    s.a.assign(g.cells(), sup + p.structure_eps);
    return s;
}

kernels::Stencil stiffness(const grid::Grid& g, const grid::WeightField& w) {
    check_weights(g, w);
    const int n = g.n();
    kernels::Stencil s;
    s.n = n;
    s.diag.assign(g.cells(), 0.0);
    s.ex.assign(g.cells(), 0.0);
    s.ny.assign(g.cells(), 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!g.active(i, j)) continue;
            const std::size_t P = g.index(i, j);
            if (w.b11[P] < 0.0 || w.b22[P] < 0.0) throw DomainError("B must be nonnegative");
            for (int d = 0; d < 4; ++d) {
                const double kp = d < 2 ? w.b11[P] : w.b22[P];
                if (g.has_neighbor(i, j, d)) {
                    const std::size_t Q = g.index(i + (d == 0 ? -1 : d == 1 ? 1 : 0), j + (d == 2 ? -1 : d == 3 ? 1 : 0));
                    const double kq = d < 2 ? w.b11[Q] : w.b22[Q];
                    const double kf = 0.5 * (kp + kq);
                    s.diag[P] += kf;
                    if (d == 1) s.ex[P] = kf;
                    if (d == 3) s.ny[P] = kf;
                } else if (g.dirichlet_face(i, j, d)) {
                    s.diag[P] += 2.0 * kp;
                }
            }
        }
    }
    return s;
}

Solution assemble_and_solve(const ParabolicProblem& p, const grid::Grid& g, const SolveOptions& o) {
    check_weights(g, p.weights);
    const auto sw = grid::check_sandwich(g, p.weights);
    if (!sw.pass) throw DomainError("weights fail the b <= B <= bbar sandwich");
    auto S = stiffness(g, p.weights);
    const double m = mass(g);
    for (double& d : S.diag) d += m;
    const auto F = source_values(p, g);
    const double h2 = g.h() * g.h();
    const int max_iter = o.max_iter > 0 ? o.max_iter : static_cast<int>(20 * g.cells());

    Solution sol{grid::GridFunction(g), {}};
    std::vector<double> prev(g.cells(), 0.0), rhs(g.cells()), x(g.cells(), 0.0);
    for (std::size_t k = 1; k < g.levels(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c) rhs[c] = g.active(c) ? m * prev[c] + h2 * F.at(k, c) : 0.0;
        x = prev;
        const auto res = kernels::pcg(S, rhs, x, o.rel_tol, max_iter, o.parallel);
        if (!res.converged) {
            throw SolverError("CG did not converge at step " + std::to_string(k), res.relative_residual);
        }
        sol.stats.steps = static_cast<int>(k);
        sol.stats.max_iterations = std::max(sol.stats.max_iterations, res.iterations);
        sol.stats.max_residual = std::max(sol.stats.max_residual, res.relative_residual);
        sol.u.set_level(k, x);
        prev = x;
    }
    return sol;
}

double weak_defect(const grid::GridFunction& u, const ParabolicProblem& p, const grid::Grid& g,
                   const grid::GridFunction& phi) {
    check_shape(g, u);
    check_shape(g, phi);
    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (phi.at(0, c) != 0.0) throw DomainError("test function must vanish at t = 0");
    }
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.touches_A(i, j)) continue;
            for (std::size_t k = 0; k < g.levels(); ++k) {
                if (phi.at(k, g.index(i, j)) != 0.0) throw DomainError("test function must vanish on A");
            }
        }
    }
    const auto K = stiffness(g, p.weights);
    const auto F = source_values(p, g);
    const double m = mass(g), h2 = g.h() * g.h();
    double total = 0.0;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const auto uk = u.level(k);
        const auto Ku = apply(K, uk);
        double step = 0.0;
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            step += phi.at(k, c) * (m * (uk[c] - u.at(k - 1, c)) + Ku[c] - h2 * F.at(k, c));
        }
        total += g.dt() * step;
    }
    return total;
}

double weak_residual(const grid::GridFunction& u, const ParabolicProblem& p, const grid::Grid& g,
                     const grid::GridFunction& phi) {
    return std::fabs(weak_defect(u, p, g, phi));
}

grid::GridFunction random_test_function(const grid::Grid& g, std::uint64_t seed, std::size_t i) {
    const auto v = grid::random_candidate(g, seed, i);
    std::seed_seq sq{seed, static_cast<std::uint64_t>(i), std::uint64_t{0x7e57}};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double amp = 0.25 + unit(rng), freq = 1 + std::floor(4 * unit(rng));
    const double T = g.domain().T;
    grid::GridFunction phi(g);
    for (int j = 0; j < g.n(); ++j) {
        for (int ii = 0; ii < g.n(); ++ii) {
            if (!g.active(ii, j) || g.touches_A(ii, j)) continue;
            const auto c = g.center(ii, j);
            const double vx = v(c[0], c[1]);
            for (std::size_t k = 1; k < g.levels(); ++k) {
                const double t = g.time(k) / T;
                phi.at(k, g.index(ii, j)) = vx * t * (1 + amp * std::sin(freq * pi * t));
            }
        }
    }
    return phi;
}

// ---------------------------------------------------------------- convergence

ManufacturedCase manufactured_case(const std::string& id) {
    auto S = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    ManufacturedCase mc;
    mc.id = id;
    if (id == "heat-smooth") {
        mc.domain.T = 0.25;
        mc.weights = [](const grid::Grid& g) { return grid::WeightField::identity(g); };
        mc.exact = [S](double x, double y, double t) { return t * S(x, y); };
        mc.source = [S](const grid::Grid&) -> SourceFn {
            return [S](double x, double y, double t) { return (1 + 2 * pi * pi * t) * S(x, y); };
        };
    } else if (id == "heat-time") {
        mc.domain.T = 0.5;
        mc.weights = [](const grid::Grid& g) { return grid::WeightField::identity(g); };
        mc.exact = [S](double x, double y, double t) { return std::sin(2 * pi * t) * S(x, y); };
        mc.source = [S](const grid::Grid& g) -> SourceFn {
            const double s = std::sin(pi * g.h() / 2);
            const double lambda = 8 * s * s / (g.h() * g.h());
            return [S, lambda](double x, double y, double t) {
                return (2 * pi * std::cos(2 * pi * t) + lambda * std::sin(2 * pi * t)) * S(x, y);
            };
        };
    } else if (id == "degenerate-0.5") {
        constexpr double gamma = 0.5;
        mc.domain.T = 0.25;
        mc.weights = [](const grid::Grid& g) { return weights::build_distance_weight({gamma}, g); };
        mc.exact = [S](double x, double y, double t) { return t * S(x, y); };
        mc.source = [S](const grid::Grid&) -> SourceFn {
            return [S](double x, double y, double t) {
                double ddx = 0.0;
                const double d = dist_to_square_boundary(x, y, ddx);
                const double Sx = pi * std::cos(pi * x) * std::sin(pi * y);
                const double Sxx = -pi * pi * S(x, y), Syy = Sxx;
                const double div = gamma * std::pow(d, gamma - 1) * ddx * Sx + std::pow(d, gamma) * Sxx + Syy;
                return S(x, y) - t * div;
            };
        };
    } else {
        throw ConfigError("unknown manufactured case '" + id + "'");
    }
    return mc;
}

ConvergenceResult manufactured_convergence(const std::string& id, const std::vector<int>& resolutions,
                                           Refinement mode) {
    if (resolutions.size() < 3) throw DomainError("convergence needs at least 3 resolutions");
    const auto mc = manufactured_case(id);
    ConvergenceResult r;
    r.id = id;
    r.mode = mode;
    for (int res : resolutions) {
        int n = 16, nt = res;
        if (mode == Refinement::space) {
            n = res;
            nt = static_cast<int>(std::ceil(mc.domain.T * n * n));
        }
        grid::Grid g(mc.domain, n, nt);
        ParabolicProblem p;
        p.name = id;
        p.weights = mc.weights(g);
        p.f = mc.source(g);
        const auto sol = assemble_and_solve(p, g);
        double err = 0.0;
        for (std::size_t k = 1; k < g.levels(); ++k) {
            double e2 = 0.0;
            for (int j = 0; j < g.n(); ++j) {
                for (int i = 0; i < g.n(); ++i) {
                    if (!g.active(i, j)) continue;
                    const auto c = g.center(i, j);
                    const double d = sol.u.at(k, g.index(i, j)) - mc.exact(c[0], c[1], g.time(k));
                    e2 += g.area()[g.index(i, j)] * d * d;
                }
            }
            err = std::max(err, std::sqrt(e2));
        }
        r.steps.push_back(mode == Refinement::space ? g.h() : g.dt());
        r.errors.push_back(err);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(r.steps.size());
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const double x = std::log(r.steps[i]), y = std::log(r.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        if (i > 0 && (r.steps[i] < r.steps[i - 1]) != (r.errors[i] < r.errors[i - 1])) r.monotone = false;
    }
    r.order = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    return r;
}

// ---------------------------------------------------------------- checks on solver output

bool check_cc8(const grid::Grid& g, const grid::WeightField& w, const Structure& s) {
    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c)) continue;
        if (s.a0[c] < 0 || s.a1[c] < 0 || s.a2[c] < 0 || !(s.a[c] > 0)) return false;
        double lhs = s.a1[c] + s.a2[c];
        if (s.a0[c] > 0) lhs += w.b[c] > 0 ? s.a0[c] * s.a0[c] / w.b[c] : INFINITY;
        if (lhs > s.a[c]) return false;
    }
    return true;
}

ElzCheck check_elz(const grid::Grid& g, const grid::GridFunction& u, const grid::GridFunction& f, const Structure& s) {
    check_shape(g, u);
    check_shape(g, f);
    ElzCheck r;
    r.margin = INFINITY;
    std::vector<double> gx, gy;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const auto lv = u.level(k);
        grid::gradient(g, lv, gx, gy);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            const double cap = s.a0[c] * std::hypot(gx[c], gy[c]) + s.a1[c] * std::fabs(lv[c]) + s.a2[c];
            const double fv = std::fabs(f.at(k, c));
            const double m = cap - fv;
            r.margin = std::min(r.margin, m);
            if (m < -1e-12 * std::max(1.0, fv)) r.pass = false;
        }
    }
    return r;
}

double min_value(const grid::Grid& g, const grid::GridFunction& u) {
    check_shape(g, u);
    double m = INFINITY;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (g.active(c)) m = std::min(m, u.at(k, c));
        }
    }
    return m;
}

ChainRuleCheck chain_rule_check(const grid::Grid& g, const std::vector<double>& u, double s, double l) {
    if (u.size() != g.cells()) throw DomainError("level does not match the grid");
    if (s < 2.0) throw DomainError("chain-rule check needs s >= 2");
    const aux::SLParams p(s, l);
    std::vector<double> w(g.cells(), 0.0), v(g.cells(), 0.0);
    double wmax = 0.0;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c)) continue;
        w[c] = std::max(0.0, u[c]);
        v[c] = aux::eval_sl(aux::SLFunction::F, p, w[c]);
        wmax = std::max(wmax, w[c]);
    }
    double L = 0.0;
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.active(i, j)) continue;
            const std::size_t P = g.index(i, j);
            if (g.has_neighbor(i, j, 1)) L = std::max(L, std::fabs(w[g.index(i + 1, j)] - w[P]) / g.h());
            if (g.has_neighbor(i, j, 3)) L = std::max(L, std::fabs(w[g.index(i, j + 1)] - w[P]) / g.h());
        }
    }
    double F2 = 0.0;
    constexpr int samples = 10000;
    for (int i = 0; i <= samples; ++i) {
        F2 = std::max(F2, std::fabs(aux::eval_sl(aux::SLFunction::d2F, p, wmax * i / samples)));
    }
    std::vector<double> vx, vy, wx, wy;
    grid::gradient(g, v, vx, vy);
    grid::gradient(g, w, wx, wy);
    ChainRuleCheck r;
    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c)) continue;
        const double dF = aux::eval_sl(aux::SLFunction::dF, p, w[c]);
        r.defect = std::max(r.defect, std::hypot(vx[c] - dF * wx[c], vy[c] - dF * wy[c]));
    }
    // Per component the Taylor remainder is at most sup|F''| (h L)^2 / (2h).
    r.bound = g.h() * F2 * L * L / std::numbers::sqrt2;
    r.pass = r.defect <= r.bound * (1 + 1e-9) + 1e-300;
    return r;
}

EnergyCheck energy_check(const grid::Grid& g, const grid::GridFunction& u, const grid::WeightField& w,
                         const Structure& st, const grid::ParamChain& chain, double C, double s) {
    check_shape(g, u);
    check_weights(g, w);
    const aux::SmallSParams p(s);
    const double c0 = aux::constants().c0;
    grid::GridFunction v(g);
    double grad_b = 0.0, grad_B = 0.0, source = 0.0;
    std::vector<double> vl(g.cells()), gx, gy, vx, vy;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const auto ul = u.level(k);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            vl[c] = g.active(c) ? aux::eval_small_s(aux::SmallSFunction::Fs, p, std::max(0.0, ul[c])) : 0.0;
        }
        v.set_level(k, vl);
        grid::gradient(g, vl, vx, vy);
        grid::gradient(g, ul, gx, gy);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            const double dA = g.area()[c] * g.dt();
            grad_b += dA * w.b[c] * (vx[c] * vx[c] + vy[c] * vy[c]);
            grad_B += dA * (w.b11[c] * vx[c] * vx[c] + w.b22[c] * vy[c] * vy[c]);
            const double phi = aux::eval_small_s(aux::SmallSFunction::Gs, p, std::max(0.0, ul[c]));
            source += dA * (st.a0[c] * std::hypot(gx[c], gy[c]) + st.a1[c] * std::fabs(ul[c]) + st.a2[c]) * phi;
        }
    }
    EnergyCheck r;
    const double vr = grid::lp_norm_Q(g, v, chain.r);
    r.lhs = vr * vr;
    r.middle = C * C * grad_b;
    r.rhs = C * C * c0 * source;
    r.embedding_ok = r.lhs <= r.middle * (1 + 1e-12);
    r.energy_ok = grad_B <= c0 * source * (1 + 1e-12);
    r.pass = r.lhs <= r.rhs * (1 + 1e-12);
    return r;
}

// ---------------------------------------------------------------- bound consistency

ConsistencyReport bound_consistency(const ParabolicProblem& p, const grid::Grid& g, const ConsistencyOptions& o,
                                    const SolveOptions& so) {
    ConsistencyReport r;
    r.name = p.name;
    r.alpha = o.alpha;
    const auto sol = assemble_and_solve(p, g, so);
    r.solve = sol.stats;
    const auto& u = sol.u;
    const auto F = source_values(p, g);
    const auto st = structure_of(p, g);
    r.cc8_ok = check_cc8(g, p.weights, st);
    r.elz = check_elz(g, u, F, st);
    r.asserted = r.cc8_ok && r.elz.pass;
    r.sup_norm = grid::lp_norm_Q(g, u, INFINITY);
    r.min_u = min_value(g, u);

    r.C_est = grid::estimate_spacetime_constant(g, p.weights, o.chain, o.C_samples, o.seed, false).C_est;
    r.C_used = o.C_safety * r.C_est;
    grid::GridFunction a(g);
    for (std::size_t k = 1; k < g.levels(); ++k) a.set_level(k, st.a);
    r.a_norm = grid::lp_norm_Q(g, a, o.chain.rbar / (o.chain.rbar - 2));

    bound::ProblemData d;
    d.chain = o.chain;
    d.Q_measure = g.spacetime_measure();
    d.C = r.C_used;
    d.a_norm = r.a_norm;
    d.alpha = o.alpha;
    r.ladder = bound::empirical_iteration(g, u, d, o.m_max);
    r.u_alpha_norm = r.ladder.u_alpha_norm;
    const auto& b = r.ladder.bound;
    const double ceiling = std::min(b.log10_bound, b.log10_bound_from_recursion);
    r.log10_slack = r.sup_norm > 0 ? b.log10_bound - std::log10(r.sup_norm) : INFINITY;
    const bool sup_ok = r.sup_norm == 0.0 || std::log10(r.sup_norm) <= ceiling;
    r.energy = energy_check(g, u, p.weights, st, o.chain, r.C_used, o.energy_s);
    r.pass = sup_ok && r.ladder.recursion_ok && r.ladder.bound_ok;
    return r;
}

SourceFn named_source(const std::string& name) {
    if (name == "const") return [](double, double, double) { return 1.0; };
    if (name == "sinsin") return [](double x, double y, double) { return std::sin(pi * x) * std::sin(pi * y); };
    if (name == "bump") {
        return [](double x, double y, double) {
            return 5 * std::exp(-((x - 0.3) * (x - 0.3) + (y - 0.3) * (y - 0.3)) / 0.02);
        };
    }
    if (name == "oscillating") {
        return [](double x, double y, double t) { return std::cos(2 * pi * x) * std::cos(2 * pi * y) * (1 + t); };
    }
    if (name == "ramp") return [](double x, double y, double t) { return 4 * t * (x + y); };
    throw ConfigError("unknown source '" + name + "'");
}

std::vector<std::string> source_names() { return {"const", "sinsin", "bump", "oscillating", "ramp"}; }

std::vector<BatteryEntry> default_battery() {
    std::vector<BatteryEntry> out;
    grid::Domain square;
    grid::Domain ell;
    ell.shape = grid::Shape::l_shape;
    ell.A = grid::face_left | grid::face_bottom;
    for (const auto& [dom, tag] : {std::pair{square, "square"}, std::pair{ell, "L"}}) {
        for (const auto& src : source_names()) {
            BatteryEntry e;
            e.name = "heat-" + src + "-" + tag;
            e.domain = dom;
            e.make = [f = named_source(src), name = e.name](const grid::Grid& g) {
                ParabolicProblem p;
                p.name = name;
                p.weights = grid::WeightField::identity(g);
                p.f = f;
                return p;
            };
            out.push_back(std::move(e));
        }
    }
    for (double gamma : {0.1, 0.2}) {
        BatteryEntry e;
        e.name = "degenerate-gamma-" + std::string(gamma == 0.1 ? "0.1" : "0.2");
        e.domain = square;
        e.make = [gamma, name = e.name](const grid::Grid& g) {
            ParabolicProblem p;
            p.name = name;
            p.weights = weights::build_distance_weight({gamma}, g);
            p.f = [](double, double, double) { return 1.0; };
            return p;
        };
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<ConsistencyReport> run_battery(const std::vector<BatteryEntry>& entries, const std::vector<double>& alphas,
                                           const ConsistencyOptions& base, bool parallel) {
    const std::size_t total = entries.size() * alphas.size();
    std::vector<ConsistencyReport> out(total);
    std::vector<std::string> errors(total);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long idx = 0; idx < static_cast<long>(total); ++idx) {
        const auto i = static_cast<std::size_t>(idx);
        const auto& e = entries[i / alphas.size()];
        try {
            grid::Grid g(e.domain, e.n, e.nt);
            auto o = base;
            o.alpha = alphas[i % alphas.size()];
            out[i] = bound_consistency(e.make(g), g, o);
        } catch (const std::exception& ex) {
            errors[i] = e.name + ": " + ex.what();
        }
    }
    for (const auto& err : errors) {
        if (!err.empty()) throw DomainError("battery run failed: " + err);
    }
    return out;
}

void write_level_csv(std::ostream& os, const grid::Grid& g, const grid::GridFunction& u, std::size_t level) {
    check_shape(g, u);
    if (level >= g.levels()) throw DomainError("level out of range");
    os << "# n=" << g.n() << "\n# h=" << g.h() << "\n# x0=" << g.x0() << "\n# level=" << level << "\n# t=" << g.time(level)
       << "\n# rows: j = 0..n-1 (y = x0 + (j + 1/2) h), columns: i = 0..n-1 (x = x0 + (i + 1/2) h)\n";
    os.precision(17);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (i > 0) os << ',';
            if (g.active(i, j)) os << u.at(level, g.index(i, j));
        }
        os << '\n';
    }
}

}  // namespace moserlab::pde
