#pragma once

#include "moserlab/rational.hpp"

namespace moserlab::aux {

/// Parameters of the large-exponent family; s > 1, l >= 3.
class SLParams {
public:
    SLParams(double s, double l);
    double s() const { return s_; }
    double l() const { return l_; }
    double eta() const { return eta_; }
    double a() const { return a_; }
    double b() const { return b_; }

private:
    double s_, l_, eta_, a_, b_;
};

/// Parameter of the small-exponent family; 1/2 < s <= 1.
class SmallSParams {
public:
    explicit SmallSParams(double s);
    double s() const { return s_; }

private:
    double s_;
};

enum class SLFunction { F, dF, d2F, G, dG };
enum class SmallSFunction { theta, dtheta, d2theta, Fs, dFs, Gs, dGs, Fbar };

/// Piecewise evaluation; continuous across |t| = l.
/// d2F at t = 0 with s < 2 throws DomainError.
double eval_sl(SLFunction which, const SLParams& p, double t);

/// Piecewise evaluation; continuous across |t| = 1.
/// dtheta and d2theta at t = 0 throw DomainError. dFs, Gs, dGs are 0 at t = 0.
double eval_small_s(SmallSFunction which, const SmallSParams& p, double t);

struct FixedConstants {
    Rational delta_exact;
    Rational alpha0_exact;
    Rational c0_exact;
    Rational k0_exact;
    double delta;
    double alpha0;
    double c0;
    double k0;
};

/// delta, alpha0, c0 = max{1/(1-alpha0), 2}, k0 = [3/8 (1 + 10/3 + 5)]^2, evaluated exactly.
const FixedConstants& constants();

/// slack * max over t = i/n, i = 1..n of |G_s(t)| / F_s(t)^(2 - 1/s).
/// Requires n >= 1000 and slack > 1.
double estimate_k_s(double s, int grid_points = 10000, double slack = 1.1);

}  // namespace moserlab::aux
