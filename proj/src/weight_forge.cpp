#include "moserlab/weight_forge.hpp"

#include "moserlab/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace moserlab::weights {

// ---------------------------------------------------------------- LogScalar

LogScalar LogScalar::make(int sign, BigInt ip, double frac) {
    LogScalar r;
    if (sign == 0) return r;
    const double f = std::floor(frac);
    r.sign_ = sign;
    r.ip_ = std::move(ip) + BigInt(static_cast<long long>(f));
    r.frac_ = frac - f;
    return r;
}

LogScalar LogScalar::pow2(const BigInt& e) { return make(1, e, 0.0); }

LogScalar LogScalar::pow2(double x) {
    if (!std::isfinite(x)) throw DomainError("LogScalar exponent must be finite");
    const double f = std::floor(x);
    return make(1, BigInt(f), x - f);
}

LogScalar LogScalar::from_double(double v) {
    if (v == 0.0) return {};
    if (!std::isfinite(v)) throw DomainError("LogScalar needs a finite value");
    LogScalar r = pow2(std::log2(std::fabs(v)));
    r.sign_ = v < 0 ? -1 : 1;
    return r;
}

double LogScalar::log2_magnitude() const {
    if (sign_ == 0) return -INFINITY;
    return ip_.convert_to<double>() + frac_;
}

double LogScalar::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp2(log2_magnitude());
}

std::string LogScalar::str() const {
    if (sign_ == 0) return "0";
    std::ostringstream os;
    if (sign_ < 0) os << '-';
    os << "2^(" << ip_ << " + " << frac_ << ")";
    return os.str();
}

LogScalar LogScalar::operator*(const LogScalar& o) const {
    if (sign_ == 0 || o.sign_ == 0) return {};
    return make(sign_ * o.sign_, ip_ + o.ip_, frac_ + o.frac_);
}

LogScalar LogScalar::operator/(const LogScalar& o) const {
    if (o.sign_ == 0) throw DomainError("LogScalar division by zero");
    if (sign_ == 0) return {};
    return make(sign_ * o.sign_, ip_ - o.ip_, frac_ - o.frac_);
}

LogScalar LogScalar::operator-() const {
    LogScalar r = *this;
    r.sign_ = -r.sign_;
    return r;
}

double LogScalar::log2_gap(const LogScalar& a, const LogScalar& b) {
    const BigInt d = a.ip_ - b.ip_;
    if (d > 4096) return 1e300;
    if (d < -4096) return -1e300;
    return d.convert_to<double>() + (a.frac_ - b.frac_);
}

LogScalar LogScalar::operator+(const LogScalar& o) const {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) return o;
    const double gap = log2_gap(*this, o);
    const LogScalar& big = gap >= 0 ? *this : o;
    const double d = std::fabs(gap);
    const double small = std::exp2(-d);
    if (sign_ == o.sign_) return make(big.sign_, big.ip_, big.frac_ + std::log1p(small) / std::numbers::ln2);
    if (d == 0.0) return {};
    return make(big.sign_, big.ip_, big.frac_ + std::log1p(-small) / std::numbers::ln2);
}

bool operator<(const LogScalar& a, const LogScalar& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    const bool mag_less = a.ip_ < b.ip_ || (a.ip_ == b.ip_ && a.frac_ < b.frac_);
    const bool mag_greater = b.ip_ < a.ip_ || (a.ip_ == b.ip_ && b.frac_ < a.frac_);
    return a.sign_ > 0 ? mag_less : mag_greater;
}

// ---------------------------------------------------------------- annular weight

double unit_ball_volume(int N) {
    return std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0 + 1.0);
}

void AnnularWeightSpec::validate() const {
    if (N < 2) throw DomainError("annular weight needs N >= 2");
    if (beta < 2) throw DomainError("annular weight needs beta >= 2");
    if (K < 5) throw DomainError("annular weight needs K >= 5");
}

BigInt AnnularWeightSpec::exponent(int k) const {
    if (schedule == Schedule::toy) return BigInt(k);
    return boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(4 * k * beta));
}

std::vector<std::array<double, 2>> AnnularWeightSpec::centers() const {
    auto radical_inverse = [](int i, int base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * (i % base);
            i /= base;
        }
        return r;
    };
    std::vector<std::array<double, 2>> out;
    for (int k = 5; k <= K; ++k) out.push_back({radical_inverse(k - 4, 2), radical_inverse(k - 4, 3)});
    return out;
}

namespace {

void check_k(const AnnularWeightSpec& spec, int k) {
    spec.validate();
    if (spec.empty ? k < 1 : (k < 5 || k > spec.K)) {
        throw DomainError("k = " + std::to_string(k) + " outside the annulus range 5.." + std::to_string(spec.K));
    }
}

/// v_k = sigma_N 2^(-N e(k)).
LogScalar ball_volume(const AnnularWeightSpec& spec, int k) {
    return LogScalar::pow2(BigInt(-spec.N) * spec.exponent(k)) * LogScalar::from_double(unit_ball_volume(spec.N));
}

/// k^(p k) as 2^(p k log2 k).
LogScalar power_k(int k, int p) { return LogScalar::pow2(p * k * std::log2(static_cast<double>(k))); }

}  // namespace

DoublingReport doubling_report(const AnnularWeightSpec& spec, int k) {
    check_k(spec, k);
    DoublingReport r;
    r.k = k;
    r.log_r = LogScalar::pow2(BigInt(-1) * spec.exponent(k));
    const LogScalar v = ball_volume(spec, k);
    const LogScalar twoN = LogScalar::pow2(BigInt(spec.N));
    if (spec.empty) {
        r.numerator = twoN * v;
        r.denominator = v;
        r.ratio = r.numerator / r.denominator;
        r.ratio_exact = pow_int(Rational(2), spec.N);
        return r;
    }
    const LogScalar one = LogScalar::from_double(1.0);
    const LogScalar kk = power_k(k, 4);
    const LogScalar annulus = LogScalar::from_double(std::exp2(spec.N) - 1.0) * kk * v;
    r.numerator = annulus + v;
    const double kd = k;
    const LogScalar near = twoN * LogScalar::from_double(1.0 / (kd * kd)) * kk;
    const LogScalar mid = twoN * LogScalar::from_double(8.0 / (kd * kd * kd)) * kk;
    r.denominator = v * (one + near + mid + twoN);
    r.ratio = r.numerator / r.denominator;
    const Rational K = pow_int(Rational(k), 4 * k);
    const Rational two_n = pow_int(Rational(2), spec.N);
    const Rational inv2 = make_rational(1, k * k), inv3 = make_rational(8, k * k * k);
    r.ratio_exact = ((two_n - 1) * K + 1) / (1 + two_n * (inv2 + inv3) * K + two_n);
    r.closed_lower_bound_exact = 3 / (two_n * (inv2 + inv3 + 2 / K));
    r.closed_lower_bound = to_double(*r.closed_lower_bound_exact);
    r.ratio_dominates = r.ratio_exact >= *r.closed_lower_bound_exact;
    return r;
}

MassCheck lbeta_mass_check(const AnnularWeightSpec& spec, int k) {
    check_k(spec, k);
    MassCheck m;
    m.k = k;
    const LogScalar twoN = LogScalar::pow2(BigInt(spec.N));
    m.lhs = power_k(k, 4 * spec.beta) * twoN * ball_volume(spec, k);
    m.rhs = twoN * LogScalar::from_double(unit_ball_volume(spec.N)) * LogScalar::pow2(BigInt(-k));
    m.margin = m.rhs / m.lhs;
    m.pass = m.lhs <= m.rhs;
    return m;
}

std::vector<double> rasterize_annular(const AnnularWeightSpec& spec, const grid::Grid& g) {
    spec.validate();
    std::vector<double> out(g.cells(), 1.0);
    if (spec.empty) return out;
    const auto centers = spec.centers();
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.active(i, j)) continue;
            const auto c = g.center(i, j);
            double s = 0.0;
            for (int k = 5; k <= spec.K; ++k) {
                const double rk = std::exp2(-spec.exponent(k).convert_to<double>());
                const auto& x = centers[static_cast<std::size_t>(k - 5)];
                const double d = std::hypot(c[0] - x[0], c[1] - x[1]);
                if (d >= rk && d < 2 * rk) s += std::exp2(4.0 * k * std::log2(static_cast<double>(k)));
            }
            if (s > 0) out[g.index(i, j)] = s;
        }
    }
    return out;
}

// ---------------------------------------------------------------- distance weight

void DistanceWeightSpec::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("distance weight needs 0 < gamma < 1");
}

grid::WeightField build_distance_weight(const DistanceWeightSpec& spec, const grid::Grid& g,
                                        std::optional<std::vector<double>> bbar) {
    spec.validate();
    std::vector<double> b1(g.cells(), 1.0);
    for (int j = 0; j < g.n(); ++j) {
        for (int i = 0; i < g.n(); ++i) {
            if (!g.active(i, j)) continue;
            const auto c = g.center(i, j);
            b1[g.index(i, j)] = std::pow(g.distance_to_boundary(c[0], c[1]), spec.gamma);
        }
    }
    std::vector<double> b2 = bbar ? std::move(*bbar) : std::vector<double>(g.cells(), 1.0);
    if (b2.size() != g.cells()) throw DomainError("bbar does not match the grid");
    return grid::WeightField::diagonal(std::move(b1), std::move(b2));
}

InverseIntegrability check_inverse_integrability(const grid::Grid& g, const grid::WeightField& w,
                                                 const grid::ParamChain& p, std::optional<double> gamma) {
    if (w.b.size() != g.cells()) throw DomainError("weight field does not match the grid");
    InverseIntegrability r;
    r.exponent = p.tbar / (2.0 - p.tbar);
    for (std::size_t c = 0; c < g.cells(); ++c) {
        if (!g.active(c)) continue;
        if (!(w.b[c] > 0.0)) {
            r.zero_cell = c;
            r.integral = INFINITY;
            r.pass = false;
            return r;
        }
        r.integral += g.area()[c] * std::pow(w.b[c], -r.exponent);
    }
    r.pass = std::isfinite(r.integral);
    if (gamma) {
        r.analytic_pass = *gamma * r.exponent < 1.0;
        r.pass = r.pass && *r.analytic_pass;
    }
    return r;
}

}  // namespace moserlab::weights
