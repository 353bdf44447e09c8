#pragma once

#include "moserlab/positivity.hpp"
#include "moserlab/sexpr.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moserlab::verify {

enum class ClaimKind { exact_identity, certified_positivity, sampled_inequality };
enum class ClaimStatus { pass, fail, inconclusive, error };

std::string to_string(ClaimKind k);
std::string to_string(ClaimStatus s);

/// Unknown registry label.
class UnknownLabel : public std::out_of_range {
public:
    explicit UnknownLabel(const std::string& label) : std::out_of_range("unknown claim label: " + label) {}
};

struct ClaimOutcome {
    std::string label;
    ClaimKind kind = ClaimKind::exact_identity;
    ClaimStatus status = ClaimStatus::error;
    std::string domain;
    std::string detail;
    std::optional<std::string> witness;
    double runtime_ms = 0.0;
};

// ---------------------------------------------------------------- suite data

struct IdentityClaim {
    std::string label;
    poly::Expr lhs;
    poly::Expr rhs;
    /// Compare on t > 0 only.
    bool nonneg = false;
};

struct PositivityClaim {
    enum class Mode { interval, sos_floor, orthant };
    std::string label;
    Mode mode = Mode::interval;
    poly::Expr target;
    Rational threshold;
    Rational lo, hi;                         // interval
    std::vector<poly::SquareTerm> squares;   // sos_floor
    Rational floor;                          // sos_floor
    Rational t0, s0;                         // orthant
};

struct Suite {
    poly::Definitions definitions;
    std::vector<IdentityClaim> identities;
    std::vector<PositivityClaim> positivity;
};

/// Parses the identity/positivity suite format (docs/formats.md). Throws ConfigError.
Suite parse_suite(std::string_view text);

/// The suite compiled into the library from data/identities.sexp.
const Suite& embedded_suite();

struct IdentityResult {
    bool pass = false;
    /// lhs - rhs in canonical form; zero on pass.
    poly::Expr residual;
};

IdentityResult verify_identity(const Suite& suite, std::string_view label);

struct PositivityOutcome {
    ClaimStatus status = ClaimStatus::error;
    /// Certified lower bound minus threshold, when certified.
    std::optional<Rational> margin;
    std::optional<Rational> witness;
    int depth = 0;
    std::string detail;
};

PositivityOutcome verify_positivity(const Suite& suite, std::string_view label, int max_depth = 32);

// ---------------------------------------------------------------- sampled inequalities

struct SampleSpec {
    std::vector<double> s;
    std::vector<double> l;
    std::vector<double> t;
    int random_points = 1000;
    std::uint64_t seed = 20240611;
    double rel_tol = 1e-9;
};

/// s in {1.1, 1.5, 2, 3}, l in {3, 5, 10}, 1000 t-nodes on [-100, 100].
SampleSpec large_s_spec(std::uint64_t seed = 20240611);
/// 20 s-values in (2/3 - 1e-6, 1], 1000 t-nodes on [-5, 5] without 0.
SampleSpec small_s_spec(std::uint64_t seed = 20240611);

struct InequalityOutcome {
    bool pass = false;
    std::size_t evaluations = 0;
    /// Largest lhs/rhs-type ratio observed, for reporting.
    double worst_ratio = 0.0;
    std::optional<std::string> witness;
};

/// Labels: ss1 ss2 ss3 ss4 sss1 sss2 sss3 sss4 lem45-step4 alpha-sampled.
InequalityOutcome check_inequality(std::string_view label, const SampleSpec& spec);

std::vector<std::string> inequality_labels();

// ---------------------------------------------------------------- registry

struct ClaimEntry {
    std::string label;
    ClaimKind kind = ClaimKind::exact_identity;
    std::string domain;
    std::function<ClaimOutcome()> run;
};

class Registry {
public:
    /// Throws std::invalid_argument on a duplicate label.
    void add(ClaimEntry entry);
    bool contains(std::string_view label) const;
    const ClaimEntry& at(std::string_view label) const;
    std::vector<std::string> labels() const;
    std::size_t size() const { return entries_.size(); }
    const std::map<std::string, ClaimEntry, std::less<>>& entries() const { return entries_; }

private:
    std::map<std::string, ClaimEntry, std::less<>> entries_;
};

/// Registers every identity and positivity claim of the suite.
void register_suite(Registry& reg, const Suite& suite);
/// Registers the sampled inequalities with the given seed.
void register_inequalities(Registry& reg, std::uint64_t seed);
/// Per-s certification of 1000 - k'(s) > 0 for 20 values of s in (1/2, 1].
void register_kprime_sampled(Registry& reg);

/// Embedded suite plus sampled claims.
Registry default_registry(std::uint64_t seed = 20240611);

struct Report {
    std::vector<ClaimOutcome> outcomes;  // sorted by label
    std::uint64_t seed = 0;
    bool all_passed() const;
    std::vector<std::string> failing_labels() const;
};

/// Runs every entry, concurrently when parallel is set. Exceptions become error outcomes.
Report run_all(const Registry& reg, bool parallel = true, std::uint64_t seed = 0);

/// JSON text; runtime_ms is included only when with_timing is set, keeping
/// default output byte-identical across runs.
std::string to_json(const Report& report, bool with_timing);

}  // namespace moserlab::verify
