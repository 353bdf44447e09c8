#include "moserlab/moser_bound.hpp"

#include "moserlab/aux_functions.hpp"
#include "moserlab/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include <cmath>
#include <limits>

namespace moserlab::bound {

namespace {

using HP = boost::multiprecision::cpp_bin_float_50;

const HP kLn10 = boost::multiprecision::log(HP(10));

double to_log10(const HP& ln) { return static_cast<double>(ln / kLn10); }

/// log(exp(a) + exp(b)); -inf stands for zero.
HP log_add(const HP& a, const HP& b) {
    if (boost::multiprecision::isinf(a) && a < 0) return b;
    if (boost::multiprecision::isinf(b) && b < 0) return a;
    const HP hi = a > b ? a : b, lo = a > b ? b : a;
    return hi + boost::multiprecision::log1p(boost::multiprecision::exp(lo - hi));
}

HP neg_inf() { return -std::numeric_limits<HP>::infinity(); }

HP log_or_neg_inf(double x) { return x > 0 ? HP(boost::multiprecision::log(HP(x))) : neg_inf(); }

struct Work {
    HP kappa, s0, ln_C1, ln_c1, ln_c2, ln_k1, sum1, sum2;
};

void tail_sums_hp(const HP& kappa, int j0, HP& sum1, HP& sum2) {
    const int m = j0 - 1;
    const HP km = boost::multiprecision::pow(kappa, -m);
    sum1 = km / (kappa - 1);
    sum2 = km * (HP(m) / (kappa - 1) + kappa / ((kappa - 1) * (kappa - 1)));
}

double exp10_or_inf(double l) { return l > 300 ? INFINITY : std::pow(10.0, l); }

BoundReport constants_impl(const ProblemData& d, Work& w) {
    const int case_id = classify_case(d);
    const auto& pc = aux::constants();
    BoundReport r;
    r.case_id = case_id;
    r.k0 = pc.k0;
    const HP c0 = pc.c0, Q = d.Q_measure, C = d.C, a = d.a_norm, alpha = d.alpha, rbar = d.chain.rbar;
    w.kappa = HP(d.chain.r) / rbar;
    w.s0 = alpha / rbar;
    r.kappa = static_cast<double>(w.kappa);

    if (case_id == 2) {
        HP s = w.s0;
        while (s * w.kappa <= 1) {
            s *= w.kappa;
            ++r.m_alpha;
        }
    }
    for (int m = 0; m <= r.m_alpha + 1; ++m) r.s.push_back(static_cast<double>(w.s0 * boost::multiprecision::pow(w.kappa, m)));

    w.ln_C1 = boost::multiprecision::log(18 * C * C * c0 * c0 * (Q + 2) * a + 1) / 2;
    r.C1 = static_cast<double>(boost::multiprecision::exp(w.ln_C1));
    w.ln_c1 = (rbar / alpha) * (w.ln_C1 + boost::multiprecision::log(alpha / rbar));
    w.ln_c2 = (rbar / alpha) * boost::multiprecision::log(w.kappa);
    r.c1 = exp10_or_inf(to_log10(w.ln_c1));
    r.c2 = exp10_or_inf(to_log10(w.ln_c2));

    if (case_id == 2) {
        // s_(m_alpha + 1) > 1 by definition, where k_s is undefined; M runs over s_0..s_(m_alpha).
        double M = 0.0;
        for (int m = 0; m <= r.m_alpha; ++m) M = std::max(M, aux::estimate_k_s(r.s[static_cast<std::size_t>(m)]));
        r.M = M;
        const HP c_alpha = boost::multiprecision::sqrt(2 * C * C * c0 * ((c0 + 10) + HP(M) * (1 + Q) * a));
        r.c_alpha = static_cast<double>(c_alpha);
        w.ln_k1 = (2 / alpha) * boost::multiprecision::log(c_alpha + (HP(pc.k0) + 1) * (1 + Q) + 2);
        r.k1 = exp10_or_inf(to_log10(w.ln_k1));
    }
    r.j0 = case_id == 1 ? 1 : r.m_alpha + 1;
    tail_sums_hp(w.kappa, r.j0, w.sum1, w.sum2);
    r.sum1 = static_cast<double>(w.sum1);
    r.sum2 = static_cast<double>(w.sum2);
    return r;
}

/// log of k1^steps u + sum_{i=1}^{steps} k1^i.
HP ln_k1_inner(const HP& ln_k1, int steps, double u) {
    HP acc = log_or_neg_inf(u);
    if (!(boost::multiprecision::isinf(acc))) acc += steps * ln_k1;
    for (int i = 1; i <= steps; ++i) acc = log_add(acc, i * ln_k1);
    return acc;
}

HP positive_part(const HP& x) { return x > 0 ? x : HP(0); }

}  // namespace

void ProblemData::validate() const {
    if (!(chain.rbar > 2.0 && chain.r > chain.rbar)) throw DomainError("parameter chain needs 2 < rbar < r");
    if (!(alpha >= 1.0)) throw DomainError("alpha must be >= 1");
    const double floor = 2.0 / 3.0 - aux::constants().delta;
    if (!(alpha / chain.rbar > floor)) throw DomainError("alpha/rbar must exceed 2/3 - delta");
    if (!(Q_measure > 0.0) || !(C > 0.0) || !(a_norm > 0.0)) throw DomainError("|Q|, C and ||a|| must be positive");
    if (!(u_alpha_norm >= 0.0) || !std::isfinite(u_alpha_norm)) throw DomainError("||u||_alpha must be finite and >= 0");
}

int classify_case(const ProblemData& d) {
    d.validate();
    return d.alpha / d.chain.rbar > 1.0 ? 1 : 2;
}

TailSums tail_sums(double kappa, int j0) {
    if (!(kappa > 1.0) || j0 < 0) throw DomainError("tail sums need kappa > 1 and j0 >= 0");
    HP s1, s2;
    tail_sums_hp(HP(kappa), j0, s1, s2);
    return {static_cast<double>(s1), static_cast<double>(s2)};
}

TailSums partial_tail_sums(double kappa, int j0, int terms) {
    if (!(kappa > 1.0) || j0 < 0 || terms < 1) throw DomainError("partial sums need kappa > 1, j0 >= 0, terms >= 1");
    long double s1 = 0, s2 = 0;
    const long double k = kappa;
    for (int j = j0; j < j0 + terms; ++j) {
        const long double t = std::pow(k, -static_cast<long double>(j));
        s1 += t;
        s2 += j * t;
    }
    return {static_cast<double>(s1), static_cast<double>(s2)};
}

BoundReport compute_constants(const ProblemData& d) {
    Work w;
    return constants_impl(d, w);
}

BoundReport compute_bound(const ProblemData& d) {
    Work w;
    BoundReport r = constants_impl(d, w);
    const HP ln_core = w.sum1 * w.ln_c1 + w.sum2 * w.ln_c2;
    HP ln_inner, ln_inner_rec, ln_core_rec;
    if (r.case_id == 1) {
        ln_inner = ln_inner_rec = log_or_neg_inf(d.u_alpha_norm);
        // Composing the rung inequality from m = 0 gives sums starting at j = 0.
        HP s1, s2;
        tail_sums_hp(w.kappa, 0, s1, s2);
        ln_core_rec = s1 * w.ln_c1 + s2 * w.ln_c2;
    } else {
        ln_inner = ln_k1_inner(w.ln_k1, r.m_alpha, d.u_alpha_norm);
        ln_inner_rec = ln_k1_inner(w.ln_k1, r.m_alpha + 1, d.u_alpha_norm);
        ln_core_rec = ln_core;
    }
    r.log10_inner = boost::multiprecision::isinf(ln_inner) ? -INFINITY : to_log10(ln_inner);
    r.log10_bound = to_log10(ln_core + positive_part(ln_inner));
    r.final_bound = exp10_or_inf(r.log10_bound);
    r.log10_bound_from_recursion = to_log10(ln_core_rec + positive_part(ln_inner_rec));
    return r;
}

std::vector<BoundReport> compute_bounds(const std::vector<ProblemData>& ds) {
    std::vector<BoundReport> out(ds.size());
    std::vector<std::string> errors(ds.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ds.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = compute_bound(ds[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) throw DomainError("problem " + std::to_string(i) + ": " + errors[i]);
    }
    return out;
}

double log10_rung_rhs(const BoundReport& r, int m, double norm_m) {
    if (m < 0) throw DomainError("rung index must be >= 0");
    const HP kappa = r.kappa;
    const HP s_m = HP(r.s.front()) * boost::multiprecision::pow(kappa, m);
    if (r.case_id == 1 || m > r.m_alpha) {
        // c1^(1/kappa^m) c2^(m/kappa^m) = (C1 s_m)^(1/s_m).
        const HP ln_factor = (boost::multiprecision::log(HP(r.C1)) + boost::multiprecision::log(s_m)) / s_m;
        return to_log10(ln_factor + positive_part(log_or_neg_inf(norm_m)));
    }
    const HP k1 = *r.k1;
    return to_log10(boost::multiprecision::log(k1 * HP(norm_m) + k1));
}

IterationTable empirical_iteration(const grid::Grid& g, const grid::GridFunction& u, ProblemData d, int m_max,
                                   bool parallel) {
    if (m_max < 3) throw DomainError("the ladder needs m_max >= 3");
    IterationTable t;
    grid::GridFunction plus = u;
    for (std::size_t k = 0; k < g.levels(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            plus.at(k, c) = std::max(0.0, u.at(k, c));
        }
    }
    t.u_alpha_norm = grid::lp_norm_Q(g, u, d.alpha, parallel);
    t.sup_norm = grid::lp_norm_Q(g, plus, INFINITY, parallel);
    d.u_alpha_norm = t.u_alpha_norm;
    t.bound = compute_bound(d);
    const double ceiling = std::min(t.bound.log10_bound, t.bound.log10_bound_from_recursion);
    constexpr double tol = 1e-12;

    for (int m = 0; m <= m_max; ++m) {
        Rung rung;
        rung.m = m;
        rung.exponent = d.alpha * std::pow(t.bound.kappa, m);
        rung.norm = grid::lp_norm_Q(g, plus, rung.exponent, parallel);
        if (m > 0) {
            rung.log10_rhs = log10_rung_rhs(t.bound, m - 1, t.rungs.back().norm);
            rung.ok = rung.norm == 0.0 || std::log10(rung.norm) <= *rung.log10_rhs + tol;
        }
        if (!rung.ok) t.recursion_ok = false;
        if (rung.norm > 0.0 && std::log10(rung.norm) > ceiling + tol) t.bound_ok = false;
        t.rungs.push_back(rung);
    }
    if (t.sup_norm > 0.0 && std::log10(t.sup_norm) > ceiling + tol) t.bound_ok = false;
    return t;
}

std::string to_json(const BoundReport& r) {
    using J = nlohmann::ordered_json;
    auto num = [](double v) { return std::isfinite(v) ? J(v) : J(nullptr); };
    auto lg = [](double v) { return v > 0 ? J(std::log10(v)) : J(nullptr); };
    J j;
    j["report"] = "bound";
    j["case"] = r.case_id;
    j["kappa"] = r.kappa;
    j["s"] = r.s;
    j["m_alpha"] = r.m_alpha;
    j["C1"] = num(r.C1);
    j["log10_C1"] = lg(r.C1);
    j["c1"] = num(r.c1);
    j["log10_c1"] = lg(r.c1);
    j["c2"] = num(r.c2);
    j["log10_c2"] = lg(r.c2);
    j["M"] = r.M ? num(*r.M) : J(nullptr);
    j["c_alpha"] = r.c_alpha ? num(*r.c_alpha) : J(nullptr);
    j["k1"] = r.k1 ? num(*r.k1) : J(nullptr);
    j["log10_k1"] = r.k1 ? lg(*r.k1) : J(nullptr);
    j["k0"] = r.k0;
    j["j0"] = r.j0;
    j["sum1"] = r.sum1;
    j["sum2"] = r.sum2;
    j["log10_inner"] = num(r.log10_inner);
    j["final_bound"] = num(r.final_bound);
    j["log10_bound"] = r.log10_bound;
    j["log10_bound_from_recursion"] = r.log10_bound_from_recursion;
    return j.dump(2);
}

}  // namespace moserlab::bound
