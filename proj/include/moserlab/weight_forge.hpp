#pragma once

#include "moserlab/rational.hpp"
#include "moserlab/spaces_grid.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace moserlab::weights {

/// sign * 2^(ip + frac) with a big-integer exponent part and frac in [0, 1).
class LogScalar {
public:
    LogScalar() = default;
    static LogScalar zero() { return {}; }
    /// Positive value 2^e for a big integer e.
    static LogScalar pow2(const BigInt& e);
    /// Value 2^x for a real exponent.
    static LogScalar pow2(double x);
    static LogScalar from_double(double v);

    int sign() const { return sign_; }
    const BigInt& log2_integer_part() const { return ip_; }
    double log2_fraction() const { return frac_; }
    /// log2|value| as a double; loses precision once |ip| passes 2^53.
    double log2_magnitude() const;
    /// Converts to double; underflows to 0 or overflows to inf outside the double range.
    double to_double() const;
    std::string str() const;

    LogScalar operator*(const LogScalar& o) const;
    LogScalar operator/(const LogScalar& o) const;
    LogScalar operator+(const LogScalar& o) const;
    LogScalar operator-() const;
    LogScalar operator-(const LogScalar& o) const { return *this + (-o); }
    friend bool operator<(const LogScalar& a, const LogScalar& b);
    friend bool operator<=(const LogScalar& a, const LogScalar& b) { return !(b < a); }
    friend bool operator==(const LogScalar& a, const LogScalar& b) {
        return a.sign_ == b.sign_ && (a.sign_ == 0 || (a.ip_ == b.ip_ && a.frac_ == b.frac_));
    }

private:
    static LogScalar make(int sign, BigInt ip, double frac);
    /// Difference of log2 magnitudes as a double, saturated at +-1e300.
    static double log2_gap(const LogScalar& a, const LogScalar& b);
    int sign_ = 0;
    BigInt ip_ = 0;
    double frac_ = 0.0;
};

/// Volume of the unit ball in R^N.
double unit_ball_volume(int N);

enum class Schedule { full, toy };

/// Annular weight bbar = 1 off the annuli plus k^(4k) on B(x_k, 2 r_k) \ B(x_k, r_k), r_k = 2^(-e(k)).
/// Full schedule e(k) = k^(4 k beta); toy schedule e(k) = k (not from the construction, for rasterizing).
struct AnnularWeightSpec {
    int N = 2;
    int beta = 2;
    int K = 10;
    Schedule schedule = Schedule::full;
    /// No annuli at all: bbar = 1.
    bool empty = false;

    /// Throws DomainError: N >= 2, beta >= 2, K >= 5.
    void validate() const;
    BigInt exponent(int k) const;
    /// Centers: Halton points in [0,1]^N, one per k in 5..K.
    std::vector<std::array<double, 2>> centers() const;
};

struct DoublingReport {
    int k = 0;
    LogScalar log_r;           // r_k
    LogScalar numerator;       // lower bound of bbar(B(x_k, 2 r_k))
    LogScalar denominator;     // upper bound of bbar(B(x_k, r_k))
    LogScalar ratio;
    /// The ratio with the common factor v_k cancelled, exactly.
    Rational ratio_exact;
    /// 3 / (2^N (k^-2 + 8 k^-3 + 2 k^-4k)); absent for the empty spec.
    std::optional<double> closed_lower_bound;
    std::optional<Rational> closed_lower_bound_exact;
    /// ratio_exact >= closed_lower_bound_exact, decided exactly: the two differ by about k^-4k
    /// relative, far below double resolution. True for the empty spec.
    bool ratio_dominates = true;
};

/// Numerator: exact annulus mass k^(4k) sigma_N (2^N - 1) 2^(-N e(k)) plus the inner ball at weight >= 1.
/// Denominator: own ball at weight 1, the two partial-sum estimates for annuli j < k, and the
/// tail estimate 2^N v_k for j > k. Throws DomainError for k outside 5..K.
DoublingReport doubling_report(const AnnularWeightSpec& spec, int k);

struct MassCheck {
    int k = 0;
    LogScalar lhs;  // k^(4 beta k) 2^N v_k
    LogScalar rhs;  // 2^N sigma_N 2^(-k)
    /// log2(rhs) - log2(lhs) as an exact big integer part plus fraction.
    LogScalar margin;
    bool pass = false;
};

MassCheck lbeta_mass_check(const AnnularWeightSpec& spec, int k);

/// Rasterizes bbar on a grid (cell centers; annuli of the toy schedule only resolve when r_k >~ h).
std::vector<double> rasterize_annular(const AnnularWeightSpec& spec, const grid::Grid& g);

struct DistanceWeightSpec {
    double gamma = 0.5;
    /// Throws DomainError unless 0 < gamma < 1.
    void validate() const;
};

/// b = dist(center, boundary)^gamma; B = diag(b, bbar). bbar defaults to 1.
grid::WeightField build_distance_weight(const DistanceWeightSpec& spec, const grid::Grid& g,
                                        std::optional<std::vector<double>> bbar = std::nullopt);

struct InverseIntegrability {
    bool pass = false;
    /// Discrete integral of b^(-tbar/(2 - tbar)); infinite when a cell has b = 0.
    double integral = 0.0;
    double exponent = 0.0;  // tbar / (2 - tbar)
    std::optional<std::size_t> zero_cell;
    /// gamma tbar/(2 - tbar) < 1, when gamma is supplied.
    std::optional<bool> analytic_pass;
};

InverseIntegrability check_inverse_integrability(const grid::Grid& g, const grid::WeightField& w,
                                                 const grid::ParamChain& p, std::optional<double> gamma = std::nullopt);

}  // namespace moserlab::weights
