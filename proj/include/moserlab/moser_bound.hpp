#pragma once

#include "moserlab/spaces_grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace moserlab::bound {

struct ProblemData {
    grid::ParamChain chain;
    double Q_measure = 1.0;   // |Q|
    double C = 1.0;           // admissibility constant C(r, Q, A)
    double a_norm = 1.0;      // ||a|| in L^(rbar/(rbar-2))(Q)
    double alpha = 1.0;
    double u_alpha_norm = 0.0;

    /// Throws DomainError: alpha >= 1, alpha/rbar > 2/3 - delta, |Q|, C, a_norm > 0, u_alpha_norm >= 0,
    /// and a chain with 2 < rbar < r.
    void validate() const;
};

/// Case 1 iff s_0 = alpha/rbar > 1; alpha = rbar goes to Case 2. Validates d.
int classify_case(const ProblemData& d);

struct TailSums {
    double sum1 = 0.0;  // sum_{j >= j0} kappa^-j
    double sum2 = 0.0;  // sum_{j >= j0} j kappa^-j
};

/// Closed forms; j0 >= 0, kappa > 1.
TailSums tail_sums(double kappa, int j0);
/// The first `terms` summands of both series, added in long double.
TailSums partial_tail_sums(double kappa, int j0, int terms);

struct BoundReport {
    int case_id = 0;
    double kappa = 0.0;
    /// s_m = kappa^m alpha/rbar for m = 0..m_alpha+1 (m_alpha = 0 in Case 1).
    std::vector<double> s;
    int m_alpha = 0;
    double C1 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    /// Case 2 only.
    std::optional<double> M, c_alpha, k1;
    double k0 = 0.0;
    int j0 = 1;
    double sum1 = 0.0;
    double sum2 = 0.0;
    /// Case 2: log10(k1^m_alpha ||u||_alpha + sum_{i=1}^{m_alpha} k1^i); Case 1: log10 ||u||_alpha.
    double log10_inner = 0.0;
    double log10_bound = 0.0;
    /// 10^log10_bound, or +inf past the double range.
    double final_bound = 0.0;
    /// Bound obtained by composing the rung inequalities literally, starting at rung 0 (Case 1)
    /// or with m_alpha + 1 rung steps of the k1 recursion (Case 2).
    double log10_bound_from_recursion = 0.0;
};

/// Constants only: s, m_alpha, C1, c1, c2, M, c_alpha, k1, k0, j0, sums.
BoundReport compute_constants(const ProblemData& d);
/// Constants plus the bound, all accumulated in 50-digit log space.
BoundReport compute_bound(const ProblemData& d);
/// compute_bound over a batch, in parallel.
std::vector<BoundReport> compute_bounds(const std::vector<ProblemData>& ds);

/// log10 of the right side of one rung inequality: ||w||_(kappa^(m+1) alpha) <= rhs(||w||_(kappa^m alpha)).
/// s_m > 1: c1^(1/kappa^m) c2^(m/kappa^m) max{1, x}; m <= m_alpha in Case 2: k1 x + k1.
double log10_rung_rhs(const BoundReport& r, int m, double norm_m);

struct Rung {
    int m = 0;
    double exponent = 0.0;  // kappa^m alpha
    double norm = 0.0;      // ||u+||_(L^exponent(Q))
    /// log10 of the rung inequality's right side from the previous rung; absent for m = 0.
    std::optional<double> log10_rhs;
    bool ok = true;
};

struct IterationTable {
    std::vector<Rung> rungs;
    double u_alpha_norm = 0.0;  // ||u||_(L^alpha(Q)) measured on the grid
    double sup_norm = 0.0;      // max u+ over levels 1..nt
    BoundReport bound;
    bool recursion_ok = true;
    /// sup_norm and every rung below both the stated bound and the recursion bound.
    bool bound_ok = true;
};

/// Ladder ||u+||_(kappa^m alpha), m = 0..m_max, on the grid. d.u_alpha_norm is replaced by the measured
/// ||u||_alpha. Throws DomainError when m_max < 3.
IterationTable empirical_iteration(const grid::Grid& g, const grid::GridFunction& u, ProblemData d, int m_max,
                                   bool parallel = false);

/// BoundReport JSON with natural and log10 fields; values past the double range are null.
std::string to_json(const BoundReport& r);

}  // namespace moserlab::bound
