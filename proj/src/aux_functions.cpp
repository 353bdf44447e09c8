#include "moserlab/aux_functions.hpp"

#include "moserlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace moserlab::aux {

namespace {

double sgn(double t) { return t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0); }

}  // namespace

SLParams::SLParams(double s, double l) : s_(s), l_(l) {
    if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("s must exceed 1, got " + std::to_string(s));
    if (!(l >= 3.0) || !std::isfinite(l)) throw DomainError("l must be at least 3, got " + std::to_string(l));
    eta_ = (1.0 - s * s) * std::pow(l, s);
    a_ = 0.5 * s * (s + 1.0) * std::pow(l, s - 1.0);
    b_ = 0.5 * s * (s - 1.0) * std::pow(l, s + 1.0);
}

SmallSParams::SmallSParams(double s) : s_(s) {
    if (!(s > 0.5 && s <= 1.0)) throw DomainError("s must lie in (1/2, 1], got " + std::to_string(s));
}

double eval_sl(SLFunction which, const SLParams& p, double t) {
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    const double s = p.s();
    const double at = std::fabs(t);
    const bool inner = at <= p.l();
    auto F = [&] { return inner ? std::pow(at, s) : p.eta() + p.a() * at + p.b() / at; };
    auto dF = [&] {
        return inner ? s * sgn(t) * std::pow(at, s - 1.0) : sgn(t) * (p.a() - p.b() / (at * at));
    };
    auto d2F = [&] {
        if (!inner) return 2.0 * p.b() / (at * at * at);
        if (at == 0.0) {
            if (s < 2.0) throw DomainError("F'' is unbounded at t = 0 for s < 2");
            return s == 2.0 ? 2.0 : 0.0;
        }
        return s * (s - 1.0) * std::pow(at, s - 2.0);
    };
    switch (which) {
        case SLFunction::F: return F();
        case SLFunction::dF: return dF();
        case SLFunction::d2F: return d2F();
        case SLFunction::G: return F() * dF();
        case SLFunction::dG:
            if (inner) return s * (2.0 * s - 1.0) * std::pow(at, 2.0 * s - 2.0);
            return dF() * dF() + F() * d2F();
    }
    throw DomainError("unknown function");
}

double eval_small_s(SmallSFunction which, const SmallSParams& p, double t) {
    if (!std::isfinite(t)) throw DomainError("t must be finite");
    const double s = p.s();
    const double at = std::fabs(t);
    const bool inner = at <= 1.0;
    const double bracket = (2.5 + s) * at * at - (5.0 + 10.0 * s / 3.0) * at + 2.5 + 5.0 * s;
    const double cubic = at * at - 10.0 / 3.0 * at + 5.0;

    auto Fs = [&] { return inner ? 0.375 * std::pow(at, s + 0.5) * cubic : std::pow(at, s); };
    auto dFs = [&] {
        if (inner) return 0.375 * sgn(t) * std::pow(at, s - 0.5) * bracket;
        return s * sgn(t) * std::pow(at, s - 1.0);
    };

    switch (which) {
        case SmallSFunction::theta: return inner ? 0.375 * std::sqrt(at) * cubic : 1.0;
        case SmallSFunction::dtheta:
            if (at == 0.0) throw DomainError("theta' is unbounded at t = 0");
            return inner ? 0.375 * sgn(t) / std::sqrt(at) * (2.5 * at * at - 5.0 * at + 2.5) : 0.0;
        case SmallSFunction::d2theta:
            if (at == 0.0) throw DomainError("theta'' is unbounded at t = 0");
            return inner ? 0.375 * std::pow(at, -1.5) * (3.75 * at * at - 2.5 * at - 1.25) : 0.0;
        case SmallSFunction::Fs: return Fs();
        case SmallSFunction::dFs: return dFs();
        case SmallSFunction::Gs: return Fs() * dFs();
        case SmallSFunction::dGs: {
            if (!inner) return s * (2.0 * s - 1.0) * std::pow(at, 2.0 * s - 2.0);
            const double s2 = s * s;
            const double poly = (10.0 + 9.0 * s + 2.0 * s2) * std::pow(at, 4) -
                                (40.0 + 140.0 * s / 3.0 + 40.0 * s2 / 3.0) * at * at * at +
                                (190.0 / 3.0 + 950.0 * s / 9.0 + 380.0 * s2 / 9.0) * at * at -
                                (100.0 / 3.0 + 100.0 * s + 200.0 * s2 / 3.0) * at + 25.0 * s + 50.0 * s2;
            return 9.0 / 64.0 * std::pow(at, 2.0 * s - 1.0) * poly;
        }
        case SmallSFunction::Fbar: return inner ? 0.0 : at;
    }
    throw DomainError("unknown function");
}

const FixedConstants& constants() {
    static const FixedConstants c = [] {
        FixedConstants k;
        k.delta_exact = make_rational(1, 1000000);
        k.alpha0_exact = Rational(1) - make_rational(1, 100000000);
        k.c0_exact = std::max(Rational(1) / (Rational(1) - k.alpha0_exact), Rational(2));
        const Rational inner = make_rational(3, 8) * (Rational(1) + make_rational(10, 3) + Rational(5));
        k.k0_exact = inner * inner;
        k.delta = to_double(k.delta_exact);
        k.alpha0 = to_double(k.alpha0_exact);
        k.c0 = to_double(k.c0_exact);
        k.k0 = to_double(k.k0_exact);
        return k;
    }();
    return c;
}

double estimate_k_s(double s, int grid_points, double slack) {
    const SmallSParams p(s);
    if (grid_points < 1000) throw DomainError("k_s estimation needs at least 1000 grid points");
    if (!(slack > 1.0)) throw DomainError("k_s slack must exceed 1");
    const double exponent = 2.0 - 1.0 / s;
    double best = 0.0;
    for (int i = 1; i <= grid_points; ++i) {
        const double t = static_cast<double>(i) / grid_points;
        const double F = eval_small_s(SmallSFunction::Fs, p, t);
        const double G = eval_small_s(SmallSFunction::Gs, p, t);
        best = std::max(best, std::fabs(G) / std::pow(F, exponent));
    }
    return slack * best;
}

}  // namespace moserlab::aux
