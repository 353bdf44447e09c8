#include "moserlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace moserlab::kernels {

namespace {

inline double stencil_row(const Stencil& s, const std::vector<double>& x, int i, int j) {
    const int n = s.n;
    const std::size_t p = static_cast<std::size_t>(j) * n + i;
    double y = s.diag[p] * x[p];
    if (i + 1 < n) y -= s.ex[p] * x[p + 1];
    if (i > 0) y -= s.ex[p - 1] * x[p - 1];
    if (j + 1 < n) y -= s.ny[p] * x[p + n];
    if (j > 0) y -= s.ny[p - n] * x[p - n];
    return y;
}

inline double pow_term(double v, double w, double p, double scale) {
    if (w == 0.0 || v == 0.0) return 0.0;
    return w * std::pow(std::fabs(v) / scale, p);
}

}  // namespace

namespace serial {

void apply(const Stencil& s, const std::vector<double>& x, std::vector<double>& y) {
    y.resize(x.size());
    for (int j = 0; j < s.n; ++j) {
        for (int i = 0; i < s.n; ++i) y[static_cast<std::size_t>(j) * s.n + i] = stencil_row(s, x, i, j);
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double r = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(const std::vector<double>& x, double b, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

double weighted_pow_sum(const std::vector<double>& v, const std::vector<double>& w, double p, double scale) {
    double r = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) r += pow_term(v[i], w[i], p, scale);
    return r;
}

}  // namespace serial

namespace omp {

void apply(const Stencil& s, const std::vector<double>& x, std::vector<double>& y) {
    y.resize(x.size());
    const int n = s.n;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(j) * n + i] = stencil_row(s, x, i, j);
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double r = 0.0;
    const auto n = static_cast<long>(a.size());
#pragma omp parallel for reduction(+ : r) schedule(static)
    for (long i = 0; i < n; ++i) r += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
    return r;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

void xpby(const std::vector<double>& x, double b, std::vector<double>& y) {
    const auto n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        y[k] = x[k] + b * y[k];
    }
}

double weighted_pow_sum(const std::vector<double>& v, const std::vector<double>& w, double p, double scale) {
    double r = 0.0;
    const auto n = static_cast<long>(v.size());
#pragma omp parallel for reduction(+ : r) schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        r += pow_term(v[k], w[k], p, scale);
    }
    return r;
}

}  // namespace omp

CgResult pcg(const Stencil& s, const std::vector<double>& rhs, std::vector<double>& x, double rel_tol, int max_iter,
             bool parallel) {
    const auto apply = parallel ? omp::apply : serial::apply;
    const auto dot = parallel ? omp::dot : serial::dot;
    const auto axpy = parallel ? omp::axpy : serial::axpy;
    const auto xpby = parallel ? omp::xpby : serial::xpby;

    const std::size_t m = rhs.size();
    x.resize(m, 0.0);
    std::vector<double> r(m), z(m), p(m), q(m);
    apply(s, x, q);
    for (std::size_t i = 0; i < m; ++i) r[i] = rhs[i] - q[i];
    const double bnorm = std::sqrt(dot(rhs, rhs));
    CgResult out;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        out.converged = true;
        return out;
    }
    auto precondition = [&] {
        for (std::size_t i = 0; i < m; ++i) z[i] = r[i] / s.diag[i];
    };
    precondition();
    p = z;
    double rz = dot(r, z);
    out.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    while (out.relative_residual > rel_tol && out.iterations < max_iter) {
        apply(s, p, q);
        const double alpha = rz / dot(p, q);
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        precondition();
        const double rz_new = dot(r, z);
        xpby(z, rz_new / rz, p);
        rz = rz_new;
        ++out.iterations;
        out.relative_residual = std::sqrt(dot(r, r)) / bnorm;
    }
    out.converged = out.relative_residual <= rel_tol;
    return out;
}

double lp_norm(const std::vector<double>& v, const std::vector<double>& w, double p, bool parallel) {
    double scale = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (w[i] > 0.0) scale = std::max(scale, std::fabs(v[i]));
    }
    if (scale == 0.0 || std::isinf(p)) return scale;
    const double sum = parallel ? omp::weighted_pow_sum(v, w, p, scale) : serial::weighted_pow_sum(v, w, p, scale);
    return scale * std::pow(sum, 1.0 / p);
}

}  // namespace moserlab::kernels
