#pragma once

#include <cstddef>
#include <vector>

namespace moserlab::kernels {

/// Five-point operator on an n x n cell grid, row-major (index j*n + i):
///   y_P = diag_P x_P - ex_P x_E - ex_W x_W - ny_P x_N - ny_S x_S
/// where ex_P couples (i,j)-(i+1,j) and ny_P couples (i,j)-(i,j+1).
/// Couplings that leave the grid must be zero.
struct Stencil {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> ex;
    std::vector<double> ny;
};

namespace serial {
void apply(const Stencil& s, const std::vector<double>& x, std::vector<double>& y);
double dot(const std::vector<double>& a, const std::vector<double>& b);
/// y += a x
void axpy(double a, const std::vector<double>& x, std::vector<double>& y);
/// y = x + b y
void xpby(const std::vector<double>& x, double b, std::vector<double>& y);
/// Sum of w_i |v_i / scale|^p.
double weighted_pow_sum(const std::vector<double>& v, const std::vector<double>& w, double p, double scale);
}  // namespace serial

namespace omp {
void apply(const Stencil& s, const std::vector<double>& x, std::vector<double>& y);
double dot(const std::vector<double>& a, const std::vector<double>& b);
void axpy(double a, const std::vector<double>& x, std::vector<double>& y);
void xpby(const std::vector<double>& x, double b, std::vector<double>& y);
double weighted_pow_sum(const std::vector<double>& v, const std::vector<double>& w, double p, double scale);
}  // namespace omp

struct CgResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Jacobi-preconditioned conjugate gradient for a symmetric positive definite stencil.
/// x holds the initial guess on entry.
CgResult pcg(const Stencil& s, const std::vector<double>& rhs, std::vector<double>& x, double rel_tol,
             int max_iter, bool parallel);

/// (sum w_i |v_i|^p)^(1/p) without overflow; p = +inf gives max |v_i| over w_i > 0.
double lp_norm(const std::vector<double>& v, const std::vector<double>& w, double p, bool parallel = false);

}  // namespace moserlab::kernels
