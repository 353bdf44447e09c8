#pragma once

#include "moserlab/rational.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moserlab::grid {

// ---------------------------------------------------------------- parameter chain

struct ParamChain {
    int N = 2;
    double tbar = 0.0;
    double r = 0.0;
    double tstar = 0.0;
    double rbar = 0.0;
};

/// (2N^2 + 2N - 2) / (N^2 + 2N - 1).
Rational tbar_lower_exact(int N);
double tbar_lower(int N);

/// r = (tbar(N+1) - 2)/(N - tbar), tstar = tbar N/(N - tbar), rbar = 2 + fraction (r - 2).
/// Throws DomainError unless N >= 2, tbar in (tbar_lower(N), 2) and fraction in (0, 1).
ParamChain derive_params(int N, double tbar, double rbar_fraction);

struct ExactChain {
    Rational tbar, r, tstar;
    /// 1 < tbar < 2 < r < tstar, decided in exact arithmetic.
    bool ordered = false;
};

/// Exact chain for a rational tbar; no interval check.
ExactChain exact_chain(int N, const Rational& tbar);

// ---------------------------------------------------------------- domains and grids

enum class Shape { unit_square, unit_ball, l_shape };

std::string to_string(Shape s);
/// Accepts "unit-square", "unit-ball", "L-shape". Throws ConfigError.
Shape parse_shape(std::string_view name);

/// Boundary pieces classified by outward normal.
enum Face : unsigned { face_left = 1u, face_right = 2u, face_bottom = 4u, face_top = 8u, face_all = 15u };

/// Parses a comma-separated face list ("left,right", "all"). Throws ConfigError.
unsigned parse_faces(std::string_view list);
std::string faces_to_string(unsigned mask);

struct Domain {
    /// Only N = 2 is discretized.
    int N = 2;
    Shape shape = Shape::unit_square;
    /// Dirichlet part A of the boundary.
    unsigned A = face_all;
    double T = 1.0;
};

/// Throws ConfigError on an empty A, T <= 0, N != 2, or a unit ball with A != all.
void validate(const Domain& d);

/// Cell-centered n x n grid on the bounding box of the domain with nt backward-Euler steps.
/// Unit square and L-shape live in [0,1]^2, the unit ball in [-1,1]^2.
class Grid {
public:
    Grid(Domain d, int n, int nt);

    const Domain& domain() const { return domain_; }
    int n() const { return n_; }
    int nt() const { return nt_; }
    double h() const { return h_; }
    double dt() const { return dt_; }
    double x0() const { return x0_; }
    std::size_t cells() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t levels() const { return static_cast<std::size_t>(nt_) + 1; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    bool active(int i, int j) const;
    bool active(std::size_t p) const { return active_[p] != 0; }
    std::array<double, 2> center(int i, int j) const;
    double time(std::size_t level) const { return dt_ * static_cast<double>(level); }

    /// Neighbour across direction d (0 west, 1 east, 2 south, 3 north) is an active cell.
    bool has_neighbor(int i, int j, int d) const;
    /// Face in direction d of an active cell lies on the boundary and belongs to A.
    bool dirichlet_face(int i, int j, int d) const;
    /// Active cell touching A.
    bool touches_A(int i, int j) const;

    /// Cell area weights h^2 on active cells, 0 elsewhere.
    const std::vector<double>& area() const { return area_; }
    /// Discrete |Omega| and |Q| = |Omega| T.
    double measure() const { return measure_; }
    double spacetime_measure() const { return measure_ * domain_.T; }

    /// Distance from a point to the closed set A.
    double distance_to_A(double x, double y) const;
    /// Distance from a point to the whole boundary.
    double distance_to_boundary(double x, double y) const;

private:
    Domain domain_;
    int n_, nt_;
    double h_, dt_, x0_;
    std::vector<char> active_;
    std::vector<double> area_;
    double measure_ = 0.0;
    struct Segment {
        double ax, ay, bx, by;
        unsigned face;
    };
    std::vector<Segment> boundary_;
};

/// Values on every space-time level 0..nt of a grid; inactive cells hold 0.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const Grid& g);
    GridFunction(std::size_t cells, std::size_t levels);

    std::size_t cells() const { return cells_; }
    std::size_t levels() const { return levels_; }
    double& at(std::size_t level, std::size_t cell) { return values_[level * cells_ + cell]; }
    double at(std::size_t level, std::size_t cell) const { return values_[level * cells_ + cell]; }
    std::vector<double> level(std::size_t k) const;
    void set_level(std::size_t k, const std::vector<double>& v);
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Samples f(x, y, t) at active cell centers on every level.
    static GridFunction sample(const Grid& g, const std::function<double(double, double, double)>& f);

private:
    std::size_t cells_ = 0, levels_ = 0;
    std::vector<double> values_;
};

/// Per-cell weights: b <= B <= bbar in the sense of quadratic forms.
struct WeightField {
    std::vector<double> b, bbar, b11, b12, b22;

    /// b = bbar = 1, B = I.
    static WeightField identity(const Grid& g);
    /// B = c I with b = bbar = c.
    static WeightField scaled_identity(const Grid& g, double c);
    /// B = diag(b1, b2) with b = min, bbar = max per cell.
    static WeightField diagonal(std::vector<double> b1, std::vector<double> b2);
    bool is_diagonal() const;
};

struct SandwichResult {
    bool pass = true;
    std::optional<std::size_t> failing_cell;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Smallest of lambda_min - b and bbar - lambda_max over the inspected cells.
    double margin = 0.0;
};

/// Eigenvalues of [[a, c], [c, d]] in ascending order.
std::array<double, 2> sym2_eigenvalues(double a, double c, double d);

/// Per cell: lambda_min(B) >= b - 1e-12 and lambda_max(B) <= bbar + 1e-12, on active cells only.
SandwichResult check_sandwich(const Grid& g, const WeightField& w);

// ---------------------------------------------------------------- discrete calculus and norms

/// Cell-centered spatial gradient of one level: central differences between active
/// neighbours, one-sided where a neighbour is missing, zero for isolated cells.
void gradient(const Grid& g, const std::vector<double>& v, std::vector<double>& gx, std::vector<double>& gy);

struct NormReport {
    double b_norm = 0.0;   // ||u||_{b,T}
    double B_norm = 0.0;   // ||u||_{B,T}
    double V_norm = 0.0;   // ||du/dt||_{L^2(Q)} + ||u||_{B,T}
    double dt_L2 = 0.0;    // ||du/dt||_{L^2(Q)}
    std::vector<std::pair<double, double>> lp;  // (p, ||u||_{L^p(Q)})
};

/// Discrete norms. Space: cell midpoint rule. Time: the backward-Euler levels 1..nt with
/// weight dt for gradient and L^p terms, forward differences over levels 0..nt for du/dt.
/// Throws DomainError on shape mismatch.
NormReport weighted_norms(const Grid& g, const GridFunction& u, const WeightField& w,
                          const std::vector<double>& ps = {});

/// ||u||_{L^p(Q)} with the same quadrature; p = inf allowed.
double lp_norm_Q(const Grid& g, const GridFunction& u, double p, bool parallel = false);
/// ||v||_{L^p(Omega)} of one level.
double lp_norm_Omega(const Grid& g, const std::vector<double>& v, double p);
/// ||grad v||_{L^p(Omega)} of one level with the Euclidean gradient length.
double grad_lp_norm_Omega(const Grid& g, const std::vector<double>& v, double p);

// ---------------------------------------------------------------- admissibility constants

using SpatialFunction = std::function<double(double, double)>;

struct AdmissibilityEstimate {
    double C_est = 0.0;
    std::size_t used = 0;
    std::size_t skipped = 0;
    /// Index of the maximizing candidate.
    std::size_t argmax = 0;
    /// Ratio of every candidate, NaN for skipped ones.
    std::vector<double> ratios;
};

/// Ratio ||v||_{L^r}/||grad v||_{L^tbar} of one candidate; nullopt when the gradient vanishes.
std::optional<double> admissibility_ratio(const Grid& g, const ParamChain& p, const SpatialFunction& v);

/// Max ratio over explicit candidates. Throws DomainError if every candidate is degenerate.
AdmissibilityEstimate estimate_admissibility(const Grid& g, const ParamChain& p,
                                             const std::vector<SpatialFunction>& candidates);

/// The random family: distance-to-A cutoff times trigonometric and Gaussian bump mixtures,
/// candidate i seeded from (seed, i) so prefixes of the family are stable.
SpatialFunction random_candidate(const Grid& g, std::uint64_t seed, std::size_t i);

/// Sampled C(r, Omega, A); requires n_samples >= 100. Extra candidates are appended.
AdmissibilityEstimate estimate_admissibility(const Grid& g, const ParamChain& p, std::size_t n_samples,
                                             std::uint64_t seed, const std::vector<SpatialFunction>& extra = {},
                                             bool parallel = true);

/// Sampled C(r, Q, A) in ||w||_{L^r(Q)} <= C ||w||_{b,T}, over w(x,t) = v(x) g(t) with v from
/// the random family and g(t) from a seeded family vanishing at t = 0.
AdmissibilityEstimate estimate_spacetime_constant(const Grid& g, const WeightField& w, const ParamChain& p,
                                                  std::size_t n_samples, std::uint64_t seed, bool parallel = true);

}  // namespace moserlab::grid
