#pragma once

#include "moserlab/kernels.hpp"
#include "moserlab/moser_bound.hpp"
#include "moserlab/spaces_grid.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace moserlab::pde {

using SourceFn = std::function<double(double x, double y, double t)>;

/// Structure functions of the right-hand side, one value per cell (constant in time).
struct Structure {
    std::vector<double> a0, a1, a2, a;
};

struct ParabolicProblem {
    std::string name;
    grid::WeightField weights;
    SourceFn f;
    /// Defaults to a0 = a1 = 0, a2 = sup |f|, a = a2 + structure_eps.
    std::optional<Structure> structure;
    double structure_eps = 1e-3;
};

/// f at active cell centers on levels 1..nt (level 0 is zero).
grid::GridFunction source_values(const ParabolicProblem& p, const grid::Grid& g);
Structure structure_of(const ParabolicProblem& p, const grid::Grid& g);

/// Finite-volume stiffness of -div(B grad u) for diagonal B, scaled by the cell area: face
/// coefficients are arithmetic means of the two cells, a face on A contributes 2 b_P u_P, other
/// boundary faces carry no flux. Inactive cells get an empty row. Throws DomainError for a
/// non-diagonal or negative B.
kernels::Stencil stiffness(const grid::Grid& g, const grid::WeightField& w);

struct SolveOptions {
    double rel_tol = 1e-12;
    /// 0 picks 20 * cells.
    int max_iter = 0;
    bool parallel = false;
};

struct SolveStats {
    int steps = 0;
    int max_iterations = 0;
    double max_residual = 0.0;
};

struct Solution {
    grid::GridFunction u;
    SolveStats stats;
};

/// Backward Euler: (h^2/dt)(u^n - u^(n-1)) + K u^n = h^2 f^n with u^0 = 0, each step by PCG.
/// Throws DomainError when the weights fail check_sandwich, SolverError when PCG stalls.
Solution assemble_and_solve(const ParabolicProblem& p, const grid::Grid& g, const SolveOptions& o = {});

/// Signed discrete weak defect sum_n dt phi^n . [(h^2/dt)(u^n - u^(n-1)) + K u^n - h^2 f^n].
/// Throws DomainError unless phi is zero on level 0 and on cells touching A.
double weak_defect(const grid::GridFunction& u, const ParabolicProblem& p, const grid::Grid& g,
                   const grid::GridFunction& phi);
/// |weak_defect|.
double weak_residual(const grid::GridFunction& u, const ParabolicProblem& p, const grid::Grid& g,
                     const grid::GridFunction& phi);

/// Admissible test function: random spatial candidate, zeroed on cells touching A, times a
/// seeded time profile vanishing at t = 0.
grid::GridFunction random_test_function(const grid::Grid& g, std::uint64_t seed, std::size_t i);

// ---------------------------------------------------------------- convergence

struct ManufacturedCase {
    std::string id;
    grid::Domain domain;
    std::function<grid::WeightField(const grid::Grid&)> weights;
    std::function<double(double, double, double)> exact;
    /// Source on a given grid (may use the grid, e.g. discrete eigenvalues).
    std::function<SourceFn(const grid::Grid&)> source;
};

/// "heat-smooth": u = t sin(pi x) sin(pi y), B = I, A = all.
/// "heat-time": u = sin(2 pi t) sin(pi x) sin(pi y) with the source built from the discrete
///   eigenvalue, so the spatial error vanishes and only the time error remains.
/// "degenerate-0.5": u = t sin(pi x) sin(pi y), B = diag(dist^0.5, 1). Throws ConfigError.
ManufacturedCase manufactured_case(const std::string& id);

enum class Refinement { space, time };

struct ConvergenceResult {
    std::string id;
    Refinement mode = Refinement::space;
    std::vector<double> steps;   // h or dt
    std::vector<double> errors;  // max over levels of the discrete L^2(Omega) error
    double order = 0.0;          // least-squares slope of log error against log step
    bool monotone = true;        // errors decrease with the step
};

/// Space: resolutions are n with dt = h^2. Time: resolutions are nt on a 16 x 16 grid.
/// Needs at least 3 resolutions.
ConvergenceResult manufactured_convergence(const std::string& id, const std::vector<int>& resolutions,
                                           Refinement mode = Refinement::space);

// ---------------------------------------------------------------- checks on solver output

struct ElzCheck {
    bool pass = true;
    /// Smallest a0 |grad u| + a1 |u| + a2 - |f| over active cells and levels 1..nt.
    double margin = 0.0;
};

/// b^-1 a0^2 + a1 + a2 <= a per active cell (a0 = 0 allowed where b = 0).
bool check_cc8(const grid::Grid& g, const grid::WeightField& w, const Structure& s);
ElzCheck check_elz(const grid::Grid& g, const grid::GridFunction& u, const grid::GridFunction& f, const Structure& s);

/// Minimum of u over active cells, levels 1..nt.
double min_value(const grid::Grid& g, const grid::GridFunction& u);

struct ChainRuleCheck {
    double defect = 0.0;  // max |grad_h F(u+) - F'(u+) grad_h u+|
    double bound = 0.0;   // h sup|F''| L^2 / 2, L the largest neighbour difference quotient of u+
    bool pass = false;
};

/// One level, F = F_(s,l) of the large-exponent family; s >= 2 keeps F'' bounded.
ChainRuleCheck chain_rule_check(const grid::Grid& g, const std::vector<double>& u, double s, double l);

struct EnergyCheck {
    double lhs = 0.0;     // ||v||_(L^r(Q))^2, v = F_s(u+)
    double middle = 0.0;  // C^2 int |grad v|^2 b
    double rhs = 0.0;     // C^2 c0 int (a0 |grad u| + a1 |u| + a2) G_s(u+)
    bool embedding_ok = false;
    bool energy_ok = false;
    bool pass = false;    // lhs <= rhs
};

/// Small-exponent family F_s, G_s with s in (1/2, 1], eta = 1.
EnergyCheck energy_check(const grid::Grid& g, const grid::GridFunction& u, const grid::WeightField& w,
                         const Structure& st, const grid::ParamChain& chain, double C, double s);

// ---------------------------------------------------------------- bound consistency

struct ConsistencyOptions {
    grid::ParamChain chain;
    double alpha = 9.0;
    /// C(r, Q, A) = safety * sampled estimate.
    double C_safety = 2.0;
    std::size_t C_samples = 100;
    std::uint64_t seed = 1;
    int m_max = 8;
    double energy_s = 0.8;
};

struct ConsistencyReport {
    std::string name;
    double alpha = 0.0;
    double sup_norm = 0.0;  // max |u|
    double min_u = 0.0;
    double u_alpha_norm = 0.0;
    double C_est = 0.0;
    double C_used = 0.0;
    double a_norm = 0.0;
    bool cc8_ok = false;
    ElzCheck elz;
    EnergyCheck energy;
    SolveStats solve;
    bound::IterationTable ladder;
    double log10_slack = 0.0;  // log10(bound) - log10(sup), +inf for u = 0
    /// Hypotheses hold (cc8 and elz), so the comparison is asserted.
    bool asserted = false;
    bool pass = false;         // sup <= bound, every rung satisfies the recursion, ladder below the bound
};

ConsistencyReport bound_consistency(const ParabolicProblem& p, const grid::Grid& g, const ConsistencyOptions& o,
                                    const SolveOptions& so = {});

/// "const" (1), "sinsin" (sin pi x sin pi y), "bump" (Gaussian at (0.3, 0.3)),
/// "oscillating" (cos 2 pi x cos 2 pi y (1 + t)), "ramp" (4 t (x + y)). Throws ConfigError.
SourceFn named_source(const std::string& name);
std::vector<std::string> source_names();

struct BatteryEntry {
    std::string name;
    grid::Domain domain;
    int n = 32;
    int nt = 16;
    std::function<ParabolicProblem(const grid::Grid&)> make;
};

/// Heat equation with five sources on the unit square (A = all) and the L-shape (A = left,bottom),
/// plus B = diag(dist^gamma, 1), f = 1 for gamma in {0.1, 0.2}.
std::vector<BatteryEntry> default_battery();

/// Every entry at every alpha; entries run concurrently when parallel is set.
std::vector<ConsistencyReport> run_battery(const std::vector<BatteryEntry>& entries, const std::vector<double>& alphas,
                                           const ConsistencyOptions& base, bool parallel = true);

/// One level as a CSV matrix: '#' header lines (n, h, x0, level, t), then n rows j = 0..n-1
/// (y increasing), n comma-separated values i = 0..n-1 (x increasing); inactive cells are empty.
void write_level_csv(std::ostream& os, const grid::Grid& g, const grid::GridFunction& u, std::size_t level);

}  // namespace moserlab::pde
