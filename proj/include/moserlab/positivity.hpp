#pragma once

#include "moserlab/expr.hpp"

#include <optional>
#include <vector>

namespace moserlab::poly {

enum class PositivityStatus { certified, counterexample, inconclusive };

struct PositivityCertificate {
    std::size_t leaves = 0;
    int depth_reached = 0;
    /// Smallest certified lower bound over all leaves; exceeds the threshold.
    Rational min_lower_bound;
};

struct PositivityResult {
    PositivityStatus status = PositivityStatus::inconclusive;
    std::optional<PositivityCertificate> certificate;
    /// Exact point with p(witness) <= threshold, for counterexample results.
    std::optional<Rational> witness;
    int depth_reached = 0;

    bool certified() const { return status == PositivityStatus::certified; }
};

/// Proves p > threshold on [lo, hi] by bisection. Each leaf is bounded below by
/// p(mid) - halfwidth * max|p'| with the derivative enclosed by exact interval
/// Horner evaluation. Requires lo < hi.
PositivityResult certify_positive(const Poly& p, const Rational& lo, const Rational& hi,
                                  const Rational& threshold, int max_depth = 32);

/// One summand weight * base^2 of a sum-of-squares decomposition.
struct SquareTerm {
    Rational weight;
    Poly base;
};

struct SosFloorResult {
    /// p - (sum of squares + floor); zero when the decomposition is exact.
    Poly residual;
    bool weights_nonnegative = false;
    Rational floor;
    bool clears_threshold = false;

    bool certified() const { return residual.is_zero() && weights_nonnegative && clears_threshold; }
};

/// p = sum w_i q_i^2 + floor with w_i >= 0 implies p >= floor on the whole real line.
SosFloorResult check_sos_floor(const Poly& p, const std::vector<SquareTerm>& squares,
                               const Rational& floor, const Rational& threshold);

struct OrthantResult {
    bool coefficients_nonnegative = false;
    /// Value at (t0, s0).
    Rational corner_value;
    bool clears_threshold = false;

    bool certified() const { return coefficients_nonnegative && clears_threshold; }
};

/// Expands e(t0 + u, s0 + v) as a polynomial in (u, v). Nonnegative coefficients
/// and corner value above the threshold give e > threshold on t >= t0, s >= s0.
/// e must be a polynomial in t on t >= 0 with coefficients polynomial in s.
OrthantResult check_orthant(const Expr& e, const Rational& t0, const Rational& s0, const Rational& threshold);

}  // namespace moserlab::poly
