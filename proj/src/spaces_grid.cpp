#include "moserlab/spaces_grid.hpp"

#include "moserlab/errors.hpp"
#include "moserlab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace moserlab::grid {

// ---------------------------------------------------------------- names

std::string to_string(Shape s) {
    switch (s) {
        case Shape::unit_square: return "unit-square";
        case Shape::unit_ball: return "unit-ball";
        case Shape::l_shape: return "L-shape";
    }
    return "unknown";
}

Shape parse_shape(std::string_view name) {
    if (name == "unit-square") return Shape::unit_square;
    if (name == "unit-ball") return Shape::unit_ball;
    if (name == "L-shape") return Shape::l_shape;
    throw ConfigError("unknown shape '" + std::string(name) + "'");
}

unsigned parse_faces(std::string_view list) {
    unsigned mask = 0;
    std::size_t start = 0;
    while (start <= list.size()) {
        std::size_t end = list.find(',', start);
        if (end == std::string_view::npos) end = list.size();
        std::string_view item = list.substr(start, end - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (item == "all") mask |= face_all;
        else if (item == "left") mask |= face_left;
        else if (item == "right") mask |= face_right;
        else if (item == "bottom") mask |= face_bottom;
        else if (item == "top") mask |= face_top;
        else if (!item.empty()) throw ConfigError("unknown face '" + std::string(item) + "'");
        start = end + 1;
    }
    return mask;
}

std::string faces_to_string(unsigned mask) {
    if (mask == face_all) return "all";
    std::string out;
    const std::pair<unsigned, const char*> names[] = {
        {face_left, "left"}, {face_right, "right"}, {face_bottom, "bottom"}, {face_top, "top"}};
    for (const auto& [bit, name] : names) {
        if (mask & bit) out += (out.empty() ? "" : ",") + std::string(name);
    }
    return out;
}

void validate(const Domain& d) {
    if (d.N != 2) throw ConfigError("only N = 2 domains are discretized");
    if ((d.A & face_all) == 0) throw ConfigError("the Dirichlet set A must be non-empty");
    if (!(d.T > 0.0)) throw ConfigError("final time T must be positive");
    if (d.shape == Shape::unit_ball && d.A != face_all) throw ConfigError("the unit ball supports A = all only");
}

// ---------------------------------------------------------------- grid

namespace {

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    double u = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return std::hypot(px - (ax + u * dx), py - (ay + u * dy));
}

constexpr int kDi[4] = {-1, 1, 0, 0};
constexpr int kDj[4] = {0, 0, -1, 1};
constexpr unsigned kFace[4] = {face_left, face_right, face_bottom, face_top};

}  // namespace

Grid::Grid(Domain d, int n, int nt) : domain_(d), n_(n), nt_(nt) {
    validate(d);
    if (n < 2) throw DomainError("grid needs at least 2 cells per side");
    if (nt < 1) throw DomainError("grid needs at least one time step");
    if (d.shape == Shape::l_shape && n % 2 != 0) throw DomainError("the L-shape needs an even cell count");
    const double side = d.shape == Shape::unit_ball ? 2.0 : 1.0;
    x0_ = d.shape == Shape::unit_ball ? -1.0 : 0.0;
    h_ = side / n;
    dt_ = d.T / nt;
    active_.assign(cells(), 0);
    area_.assign(cells(), 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const auto c = center(i, j);
            bool in = true;
            if (d.shape == Shape::unit_ball) in = c[0] * c[0] + c[1] * c[1] < 1.0;
            if (d.shape == Shape::l_shape) in = !(c[0] > 0.5 && c[1] > 0.5);
            active_[index(i, j)] = in ? 1 : 0;
            area_[index(i, j)] = in ? h_ * h_ : 0.0;
            if (in) measure_ += h_ * h_;
        }
    }
    if (d.shape == Shape::unit_square) {
        boundary_ = {{0, 0, 0, 1, face_left}, {1, 0, 1, 1, face_right}, {0, 0, 1, 0, face_bottom}, {0, 1, 1, 1, face_top}};
    } else if (d.shape == Shape::l_shape) {
        boundary_ = {{0, 0, 0, 1, face_left},       {0, 0, 1, 0, face_bottom},   {1, 0, 1, 0.5, face_right},
                     {0.5, 0.5, 1, 0.5, face_top},  {0.5, 0.5, 0.5, 1, face_right}, {0, 1, 0.5, 1, face_top}};
    }
}

bool Grid::active(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return false;
    return active_[index(i, j)] != 0;
}

std::array<double, 2> Grid::center(int i, int j) const {
    return {x0_ + (i + 0.5) * h_, x0_ + (j + 0.5) * h_};
}

bool Grid::has_neighbor(int i, int j, int d) const { return active(i + kDi[d], j + kDj[d]); }

bool Grid::dirichlet_face(int i, int j, int d) const {
    return active(i, j) && !has_neighbor(i, j, d) && (domain_.A & kFace[d]) != 0;
}

bool Grid::touches_A(int i, int j) const {
    for (int d = 0; d < 4; ++d) {
        if (dirichlet_face(i, j, d)) return true;
    }
    return false;
}

double Grid::distance_to_A(double x, double y) const {
    if (domain_.shape == Shape::unit_ball) return std::max(0.0, 1.0 - std::hypot(x, y));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : boundary_) {
        if (domain_.A & s.face) best = std::min(best, segment_distance(x, y, s.ax, s.ay, s.bx, s.by));
    }
    return best;
}

double Grid::distance_to_boundary(double x, double y) const {
    if (domain_.shape == Shape::unit_ball) return std::max(0.0, 1.0 - std::hypot(x, y));
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : boundary_) best = std::min(best, segment_distance(x, y, s.ax, s.ay, s.bx, s.by));
    return best;
}

// ---------------------------------------------------------------- grid functions and weights

GridFunction::GridFunction(const Grid& g) : GridFunction(g.cells(), g.levels()) {}

GridFunction::GridFunction(std::size_t cells, std::size_t levels)
    : cells_(cells), levels_(levels), values_(cells * levels, 0.0) {}

std::vector<double> GridFunction::level(std::size_t k) const {
    const auto first = values_.begin() + static_cast<std::ptrdiff_t>(k * cells_);
    return {first, first + static_cast<std::ptrdiff_t>(cells_)};
}

void GridFunction::set_level(std::size_t k, const std::vector<double>& v) {
    if (v.size() != cells_) throw DomainError("level size mismatch");
    std::copy(v.begin(), v.end(), values_.begin() + static_cast<std::ptrdiff_t>(k * cells_));
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double, double, double)>& f) {
    GridFunction u(g);
    for (std::size_t k = 0; k < g.levels(); ++k) {
        const double t = g.time(k);
        for (int j = 0; j < g.n(); ++j) {
            for (int i = 0; i < g.n(); ++i) {
                if (!g.active(i, j)) continue;
                const auto c = g.center(i, j);
                u.at(k, g.index(i, j)) = f(c[0], c[1], t);
            }
        }
    }
    return u;
}

WeightField WeightField::identity(const Grid& g) { return scaled_identity(g, 1.0); }

WeightField WeightField::scaled_identity(const Grid& g, double c) {
    WeightField w;
    w.b.assign(g.cells(), c);
    w.bbar = w.b;
    w.b11 = w.b;
    w.b22 = w.b;
    w.b12.assign(g.cells(), 0.0);
    return w;
}

WeightField WeightField::diagonal(std::vector<double> b1, std::vector<double> b2) {
    if (b1.size() != b2.size()) throw DomainError("diagonal weight size mismatch");
    WeightField w;
    w.b.resize(b1.size());
    w.bbar.resize(b1.size());
    for (std::size_t p = 0; p < b1.size(); ++p) {
        w.b[p] = std::min(b1[p], b2[p]);
        w.bbar[p] = std::max(b1[p], b2[p]);
    }
    w.b12.assign(b1.size(), 0.0);
    w.b11 = std::move(b1);
    w.b22 = std::move(b2);
    return w;
}

bool WeightField::is_diagonal() const {
    return std::all_of(b12.begin(), b12.end(), [](double v) { return v == 0.0; });
}

std::array<double, 2> sym2_eigenvalues(double a, double c, double d) {
    const double mean = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), c);
    return {mean - rad, mean + rad};
}

namespace {

void check_weight_shape(const Grid& g, const WeightField& w) {
    const std::size_t n = g.cells();
    if (w.b.size() != n || w.bbar.size() != n || w.b11.size() != n || w.b12.size() != n || w.b22.size() != n) {
        throw DomainError("weight field does not match the grid");
    }
}

}  // namespace

SandwichResult check_sandwich(const Grid& g, const WeightField& w) {
    check_weight_shape(g, w);
    SandwichResult r;
    r.margin = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < g.cells(); ++p) {
        if (!g.active(p)) continue;
        const auto ev = sym2_eigenvalues(w.b11[p], w.b12[p], w.b22[p]);
        const double m = std::min(ev[0] - w.b[p], w.bbar[p] - ev[1]);
        if (m < r.margin) {
            r.margin = m;
            r.lambda_min = ev[0];
            r.lambda_max = ev[1];
        }
        if (ev[0] < w.b[p] - 1e-12 || ev[1] > w.bbar[p] + 1e-12) {
            r.pass = false;
            r.failing_cell = p;
            r.lambda_min = ev[0];
            r.lambda_max = ev[1];
            r.margin = m;
            return r;
        }
    }
    return r;
}

// ---------------------------------------------------------------- calculus and norms

void gradient(const Grid& g, const std::vector<double>& v, std::vector<double>& gx, std::vector<double>& gy) {
    const int n = g.n();
    const double h = g.h();
    gx.assign(g.cells(), 0.0);
    gy.assign(g.cells(), 0.0);
    auto diff = [&](int i, int j, int lo, int hi, std::vector<double>& out) {
        const bool a = g.has_neighbor(i, j, lo), b = g.has_neighbor(i, j, hi);
        const std::size_t p = g.index(i, j);
        const auto at = [&](int d) { return v[g.index(i + kDi[d], j + kDj[d])]; };
        if (a && b) out[p] = (at(hi) - at(lo)) / (2 * h);
        else if (b) out[p] = (at(hi) - v[p]) / h;
        else if (a) out[p] = (v[p] - at(lo)) / h;
    };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!g.active(i, j)) continue;
            diff(i, j, 0, 1, gx);
            diff(i, j, 2, 3, gy);
        }
    }
}

namespace {

void check_function_shape(const Grid& g, const GridFunction& u) {
    if (u.cells() != g.cells() || u.levels() != g.levels()) throw DomainError("grid function does not match the grid");
}

}  // namespace

double lp_norm_Q(const Grid& g, const GridFunction& u, double p, bool parallel) {
    check_function_shape(g, u);
    if (!(p >= 1.0)) throw DomainError("L^p norms need p >= 1");
    double scale = 0.0;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (g.active(c)) scale = std::max(scale, std::fabs(u.at(k, c)));
        }
    }
    if (scale == 0.0 || std::isinf(p)) return scale;
    double sum = 0.0;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const auto lv = u.level(k);
        sum += g.dt() * (parallel ? kernels::omp::weighted_pow_sum(lv, g.area(), p, scale)
                                  : kernels::serial::weighted_pow_sum(lv, g.area(), p, scale));
    }
    return scale * std::pow(sum, 1.0 / p);
}

double lp_norm_Omega(const Grid& g, const std::vector<double>& v, double p) {
    if (v.size() != g.cells()) throw DomainError("level does not match the grid");
    return kernels::lp_norm(v, g.area(), p);
}

double grad_lp_norm_Omega(const Grid& g, const std::vector<double>& v, double p) {
    if (v.size() != g.cells()) throw DomainError("level does not match the grid");
    std::vector<double> gx, gy;
    gradient(g, v, gx, gy);
    for (std::size_t c = 0; c < gx.size(); ++c) gx[c] = std::hypot(gx[c], gy[c]);
    return kernels::lp_norm(gx, g.area(), p);
}

NormReport weighted_norms(const Grid& g, const GridFunction& u, const WeightField& w, const std::vector<double>& ps) {
    check_function_shape(g, u);
    check_weight_shape(g, w);
    NormReport r;
    double sb = 0.0, sB = 0.0, st = 0.0;
    std::vector<double> gx, gy;
    for (std::size_t k = 1; k < g.levels(); ++k) {
        const auto lv = u.level(k);
        gradient(g, lv, gx, gy);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            const double a = g.area()[c] * g.dt();
            sb += a * w.b[c] * (gx[c] * gx[c] + gy[c] * gy[c]);
            sB += a * (w.b11[c] * gx[c] * gx[c] + 2 * w.b12[c] * gx[c] * gy[c] + w.b22[c] * gy[c] * gy[c]);
        }
    }
    for (std::size_t k = 0; k + 1 < g.levels(); ++k) {
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (!g.active(c)) continue;
            const double d = (u.at(k + 1, c) - u.at(k, c)) / g.dt();
            st += g.area()[c] * g.dt() * d * d;
        }
    }
    r.b_norm = std::sqrt(sb);
    r.B_norm = std::sqrt(std::max(sB, 0.0));
    r.dt_L2 = std::sqrt(st);
    r.V_norm = r.dt_L2 + r.B_norm;
    for (double p : ps) r.lp.emplace_back(p, lp_norm_Q(g, u, p));
    return r;
}

// ---------------------------------------------------------------- admissibility

namespace {

std::vector<double> sample_level(const Grid& g, const SpatialFunction& f) {
    std::vector<double> v(g.cells(), 0.0);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.active(i, j)) continue;
            const auto c = g.center(i, j);
            v[g.index(i, j)] = f(c[0], c[1]);
        }
    }
    return v;
}

std::mt19937_64 candidate_rng(std::uint64_t seed, std::size_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(static_cast<std::uint64_t>(i) >> 32)};
    return std::mt19937_64(seq);
}

AdmissibilityEstimate summarize(std::vector<double> ratios) {
    AdmissibilityEstimate e;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (std::isnan(ratios[i])) {
            ++e.skipped;
            continue;
        }
        ++e.used;
        if (ratios[i] > e.C_est) {
            e.C_est = ratios[i];
            e.argmax = i;
        }
    }
    if (e.used == 0) throw DomainError("every admissibility candidate had a vanishing gradient");
    e.ratios = std::move(ratios);
    return e;
}

}  // namespace

std::optional<double> admissibility_ratio(const Grid& g, const ParamChain& p, const SpatialFunction& v) {
    const auto lv = sample_level(g, v);
    const double den = grad_lp_norm_Omega(g, lv, p.tbar);
    if (!(den > 0.0)) return std::nullopt;
    return lp_norm_Omega(g, lv, p.r) / den;
}

AdmissibilityEstimate estimate_admissibility(const Grid& g, const ParamChain& p,
                                             const std::vector<SpatialFunction>& candidates) {
    std::vector<double> ratios(candidates.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (auto r = admissibility_ratio(g, p, candidates[i])) ratios[i] = *r;
    }
    return summarize(std::move(ratios));
}

SpatialFunction random_candidate(const Grid& g, std::uint64_t seed, std::size_t i) {
    auto rng = candidate_rng(seed, i);
    std::normal_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> freq(0, 3);
    struct Trig {
        double a, m, n, phase;
    };
    struct Bump {
        double a, cx, cy, sigma;
    };
    std::vector<Trig> trig(3);
    for (auto& t : trig) t = {amp(rng), double(freq(rng)), double(freq(rng)), 2 * std::numbers::pi * unit(rng)};
    std::vector<Bump> bumps(2);
    const double lo = g.x0(), side = g.h() * g.n();
    for (auto& b : bumps) b = {amp(rng), lo + side * unit(rng), lo + side * unit(rng), 0.05 + 0.25 * unit(rng)};
    const double c0 = amp(rng);
    const Grid* grid = &g;
    return [=](double x, double y) {
        double v = c0;
        for (const auto& t : trig) v += t.a * std::cos(std::numbers::pi * (t.m * x + t.n * y) + t.phase);
        for (const auto& b : bumps) {
            const double r2 = (x - b.cx) * (x - b.cx) + (y - b.cy) * (y - b.cy);
            v += b.a * std::exp(-r2 / (2 * b.sigma * b.sigma));
        }
        return grid->distance_to_A(x, y) * v;
    };
}

AdmissibilityEstimate estimate_admissibility(const Grid& g, const ParamChain& p, std::size_t n_samples,
                                             std::uint64_t seed, const std::vector<SpatialFunction>& extra,
                                             bool parallel) {
    if (n_samples < 100) throw DomainError("admissibility estimation needs at least 100 samples");
    const std::size_t total = n_samples + extra.size();
    std::vector<double> ratios(total, std::numeric_limits<double>::quiet_NaN());
    const auto n = static_cast<long>(total);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const SpatialFunction f = i < n_samples ? random_candidate(g, seed, i) : extra[i - n_samples];
        if (auto r = admissibility_ratio(g, p, f)) ratios[i] = *r;
    }
    return summarize(std::move(ratios));
}

AdmissibilityEstimate estimate_spacetime_constant(const Grid& g, const WeightField& w, const ParamChain& p,
                                                  std::size_t n_samples, std::uint64_t seed, bool parallel) {
    if (n_samples < 100) throw DomainError("admissibility estimation needs at least 100 samples");
    check_weight_shape(g, w);
    std::vector<double> ratios(n_samples, std::numeric_limits<double>::quiet_NaN());
    const auto n = static_cast<long>(n_samples);
    const double T = g.domain().T;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        const auto lv = sample_level(g, random_candidate(g, seed, i));
        auto rng = candidate_rng(seed ^ 0x5bd1e995u, i);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const bool power = unit(rng) < 0.5;
        const double expo = 0.5 + 2.5 * unit(rng);
        const int mode = 1 + 2 * static_cast<int>(3 * unit(rng));
        auto profile = [&](double t) {
            return power ? std::pow(t / T, expo) : std::sin(mode * std::numbers::pi * t / (2 * T));
        };
        // w = v(x) g(t) separates: both norms factor into space and time parts.
        double sr = 0.0, s2 = 0.0;
        double gmax = 0.0;
        for (std::size_t lev = 1; lev < g.levels(); ++lev) gmax = std::max(gmax, std::fabs(profile(g.time(lev))));
        if (gmax == 0.0) continue;
        for (std::size_t lev = 1; lev < g.levels(); ++lev) {
            const double gt = profile(g.time(lev));
            sr += g.dt() * std::pow(std::fabs(gt) / gmax, p.r);
            s2 += g.dt() * gt * gt;
        }
        std::vector<double> gx, gy;
        gradient(g, lv, gx, gy);
        double sb = 0.0;
        for (std::size_t c = 0; c < g.cells(); ++c) {
            if (g.active(c)) sb += g.area()[c] * w.b[c] * (gx[c] * gx[c] + gy[c] * gy[c]);
        }
        if (!(sb > 0.0)) continue;
        const double num = gmax * std::pow(sr, 1.0 / p.r) * lp_norm_Omega(g, lv, p.r);
        ratios[i] = num / std::sqrt(s2 * sb);
    }
    return summarize(std::move(ratios));
}

}  // namespace moserlab::grid
