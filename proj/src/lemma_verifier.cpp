#include "moserlab/lemma_verifier.hpp"

#include "moserlab/aux_functions.hpp"
#include "moserlab/embedded_suite.hpp"
#include "moserlab/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <memory>
#include <random>
#include <set>
#include <sstream>

namespace moserlab::verify {

using poly::Expr;
using poly::SNode;
using moserlab::to_string;

std::string to_string(ClaimKind k) {
    switch (k) {
        case ClaimKind::exact_identity: return "exact-identity";
        case ClaimKind::certified_positivity: return "certified-positivity";
        case ClaimKind::sampled_inequality: return "sampled-inequality";
    }
    return "unknown";
}

std::string to_string(ClaimStatus s) {
    switch (s) {
        case ClaimStatus::pass: return "pass";
        case ClaimStatus::fail: return "fail";
        case ClaimStatus::inconclusive: return "inconclusive";
        case ClaimStatus::error: return "error";
    }
    return "unknown";
}

// ---------------------------------------------------------------- suite parsing

namespace {

[[noreturn]] void suite_error(const SNode& node, const std::string& msg) {
    throw ConfigError("suite line " + std::to_string(node.line) + ": " + msg);
}

const std::string& atom_of(const SNode& node, const char* what) {
    if (node.is_list) suite_error(node, std::string("expected ") + what);
    return node.atom;
}

void expect_size(const SNode& form, std::size_t n) {
    if (form.items.size() != n) {
        suite_error(form, "form '" + form.items[0].atom + "' expects " + std::to_string(n - 1) + " arguments");
    }
}

}  // namespace

Suite parse_suite(std::string_view text) {
    Suite suite;
    std::set<std::string, std::less<>> labels;
    auto claim_label = [&](const SNode& form) {
        const std::string& label = atom_of(form.items.at(1), "label");
        if (!labels.insert(label).second) suite_error(form, "duplicate label '" + label + "'");
        return label;
    };
    for (const SNode& form : poly::parse_sexprs(text)) {
        if (!form.is_list || form.items.empty()) suite_error(form, "expected a top-level form");
        const std::string& head = atom_of(form.items[0], "form name");
        const auto& defs = suite.definitions;
        if (head == "define") {
            expect_size(form, 3);
            const std::string& name = atom_of(form.items[1], "name");
            if (defs.count(name) != 0) suite_error(form, "redefinition of '" + name + "'");
            suite.definitions.emplace(name, poly::eval_expr(form.items[2], defs));
        } else if (head == "identity" || head == "identity-nonneg") {
            expect_size(form, 4);
            IdentityClaim c;
            c.label = claim_label(form);
            c.lhs = poly::eval_expr(form.items[2], defs);
            c.rhs = poly::eval_expr(form.items[3], defs);
            c.nonneg = head == "identity-nonneg";
            suite.identities.push_back(std::move(c));
        } else if (head == "positivity") {
            expect_size(form, 6);
            PositivityClaim c;
            c.label = claim_label(form);
            c.mode = PositivityClaim::Mode::interval;
            c.target = poly::eval_expr(form.items[2], defs);
            c.lo = poly::eval_rational(form.items[3], defs);
            c.hi = poly::eval_rational(form.items[4], defs);
            c.threshold = poly::eval_rational(form.items[5], defs);
            if (!(c.lo < c.hi)) suite_error(form, "interval must satisfy lo < hi");
            suite.positivity.push_back(std::move(c));
        } else if (head == "sos-floor") {
            expect_size(form, 6);
            PositivityClaim c;
            c.label = claim_label(form);
            c.mode = PositivityClaim::Mode::sos_floor;
            c.target = poly::eval_expr(form.items[2], defs);
            const SNode& list = form.items[3];
            if (!list.is_list) suite_error(list, "expected a list of (weight base) pairs");
            for (const SNode& pair : list.items) {
                if (!pair.is_list || pair.items.size() != 2) suite_error(pair, "expected (weight base)");
                auto base = poly::univariate(poly::eval_expr(pair.items[1], defs), false);
                if (!base) suite_error(pair, "square base must be a polynomial in t");
                c.squares.push_back({poly::eval_rational(pair.items[0], defs), *base});
            }
            c.floor = poly::eval_rational(form.items[4], defs);
            c.threshold = poly::eval_rational(form.items[5], defs);
            suite.positivity.push_back(std::move(c));
        } else if (head == "orthant") {
            expect_size(form, 6);
            PositivityClaim c;
            c.label = claim_label(form);
            c.mode = PositivityClaim::Mode::orthant;
            c.target = poly::eval_expr(form.items[2], defs);
            c.t0 = poly::eval_rational(form.items[3], defs);
            c.s0 = poly::eval_rational(form.items[4], defs);
            c.threshold = poly::eval_rational(form.items[5], defs);
            suite.positivity.push_back(std::move(c));
        } else {
            suite_error(form, "unknown form '" + head + "'");
        }
    }
    return suite;
}

const Suite& embedded_suite() {
    static const Suite suite = parse_suite(kEmbeddedSuite);
    return suite;
}

// ---------------------------------------------------------------- exact claims

namespace {

const IdentityClaim& find_identity(const Suite& suite, std::string_view label) {
    for (const auto& c : suite.identities) {
        if (c.label == label) return c;
    }
    throw UnknownLabel(std::string(label));
}

const PositivityClaim& find_positivity(const Suite& suite, std::string_view label) {
    for (const auto& c : suite.positivity) {
        if (c.label == label) return c;
    }
    throw UnknownLabel(std::string(label));
}

std::string domain_of(const IdentityClaim& c) {
    return c.nonneg ? "t > 0, s symbolic" : "t != 0, s symbolic";
}

std::string domain_of(const PositivityClaim& c) {
    switch (c.mode) {
        case PositivityClaim::Mode::interval:
            return "t in [" + to_string(c.lo) + ", " + to_string(c.hi) + "], threshold " + to_string(c.threshold);
        case PositivityClaim::Mode::sos_floor: return "t in R, threshold " + to_string(c.threshold);
        case PositivityClaim::Mode::orthant:
            return "t >= " + to_string(c.t0) + ", s >= " + to_string(c.s0) + ", threshold " + to_string(c.threshold);
    }
    return {};
}

}  // namespace

IdentityResult verify_identity(const Suite& suite, std::string_view label) {
    const IdentityClaim& c = find_identity(suite, label);
    IdentityResult r;
    r.residual = c.nonneg ? poly::on_nonneg(c.lhs) - poly::on_nonneg(c.rhs) : c.lhs - c.rhs;
    r.pass = r.residual.is_zero();
    return r;
}

PositivityOutcome verify_positivity(const Suite& suite, std::string_view label, int max_depth) {
    const PositivityClaim& c = find_positivity(suite, label);
    PositivityOutcome out;
    switch (c.mode) {
        case PositivityClaim::Mode::interval: {
            auto p = poly::univariate(c.target, c.lo >= 0);
            if (!p) throw DomainError(c.label + ": target is not a univariate polynomial in t");
            auto r = poly::certify_positive(*p, c.lo, c.hi, c.threshold, max_depth);
            out.depth = r.depth_reached;
            if (r.certified()) {
                out.status = ClaimStatus::pass;
                out.margin = r.certificate->min_lower_bound - c.threshold;
                out.detail = std::to_string(r.certificate->leaves) + " leaves, depth " +
                             std::to_string(r.depth_reached) + ", certified lower bound " +
                             to_string(r.certificate->min_lower_bound);
            } else if (r.status == poly::PositivityStatus::counterexample) {
                out.status = ClaimStatus::fail;
                out.witness = r.witness;
                out.detail = "value " + to_string(p->eval(*r.witness)) + " at t = " + to_string(*r.witness);
            } else {
                out.status = ClaimStatus::inconclusive;
                out.detail = "bisection depth " + std::to_string(max_depth) + " exhausted";
            }
            break;
        }
        case PositivityClaim::Mode::sos_floor: {
            auto p = poly::univariate(c.target, false);
            if (!p) throw DomainError(c.label + ": target is not a univariate polynomial in t");
            auto r = poly::check_sos_floor(*p, c.squares, c.floor, c.threshold);
            out.status = r.certified() ? ClaimStatus::pass : ClaimStatus::fail;
            if (r.certified()) out.margin = c.floor - c.threshold;
            out.detail = "floor " + to_string(c.floor) + (r.residual.is_zero() ? "" : ", residual " + r.residual.str("t")) +
                         (r.weights_nonnegative ? "" : ", negative weight");
            break;
        }
        case PositivityClaim::Mode::orthant: {
            auto r = poly::check_orthant(c.target, c.t0, c.s0, c.threshold);
            out.status = r.certified() ? ClaimStatus::pass : ClaimStatus::fail;
            if (r.certified()) out.margin = r.corner_value - c.threshold;
            out.detail = "corner value " + to_string(r.corner_value) +
                         (r.coefficients_nonnegative ? ", shifted coefficients nonnegative"
                                                     : ", negative shifted coefficient");
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------- sampled inequalities

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return v;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

class Tally {
public:
    explicit Tally(double tol) : tol_(tol) { out.pass = true; }

    /// Records lhs <= rhs up to the relative tolerance.
    void le(double lhs, double rhs, const std::string& where) {
        ++out.evaluations;
        if (rhs > 0) out.worst_ratio = std::max(out.worst_ratio, lhs / rhs);
        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        if (!(lhs <= rhs + tol_ * scale)) fail(where + " lhs=" + fmt(lhs) + " rhs=" + fmt(rhs));
    }
    void eq(double lhs, double rhs, const std::string& where) {
        ++out.evaluations;
        const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
        if (!(std::fabs(lhs - rhs) <= tol_ * scale)) fail(where + " lhs=" + fmt(lhs) + " rhs=" + fmt(rhs));
    }
    /// Strict lhs > bound, no tolerance.
    void gt(double lhs, double bound, const std::string& where) {
        ++out.evaluations;
        if (!(lhs > bound)) fail(where + " value=" + fmt(lhs));
    }

    InequalityOutcome out;

private:
    void fail(const std::string& where) {
        out.pass = false;
        if (!out.witness) out.witness = where;
    }
    double tol_;
};

std::vector<double> t_nodes(const SampleSpec& spec, double lo, double hi, bool drop_zero, int extra_uniform) {
    std::vector<double> out;
    for (double t : spec.t) {
        if (t >= lo && t <= hi) out.push_back(t);
    }
    if (extra_uniform > 1) {
        for (double t : linspace(lo, hi, extra_uniform)) out.push_back(t);
    }
    double glo = spec.t.empty() ? lo : *std::min_element(spec.t.begin(), spec.t.end());
    double ghi = spec.t.empty() ? hi : *std::max_element(spec.t.begin(), spec.t.end());
    glo = std::max(glo, lo);
    ghi = std::min(ghi, hi);
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> dist(glo, ghi);
    for (int i = 0; i < spec.random_points; ++i) out.push_back(dist(rng));
    if (drop_zero) out.erase(std::remove(out.begin(), out.end(), 0.0), out.end());
    return out;
}

std::string at(double s, double t) { return "s=" + fmt(s) + " t=" + fmt(t); }
std::string at(double s, double l, double t) { return "s=" + fmt(s) + " l=" + fmt(l) + " t=" + fmt(t); }

}  // namespace

SampleSpec large_s_spec(std::uint64_t seed) {
    SampleSpec spec;
    spec.s = {1.1, 1.5, 2.0, 3.0};
    spec.l = {3.0, 5.0, 10.0};
    spec.t = linspace(-100.0, 100.0, 1000);
    spec.seed = seed;
    return spec;
}

SampleSpec small_s_spec(std::uint64_t seed) {
    SampleSpec spec;
    const double lo = 2.0 / 3.0 - aux::constants().delta;
    for (int i = 1; i <= 20; ++i) spec.s.push_back(lo + (1.0 - lo) * i / 20.0);
    spec.l = {};
    auto grid = linspace(-5.0, 5.0, 1000);
    spec.t = grid;
    spec.seed = seed;
    return spec;
}

std::vector<std::string> inequality_labels() {
    return {"alpha-sampled", "lem45-step4", "ss1", "ss2", "ss3", "ss4", "sss1", "sss2", "sss3", "sss4"};
}

InequalityOutcome check_inequality(std::string_view label, const SampleSpec& spec) {
    using aux::SLFunction;
    using aux::SmallSFunction;
    if (spec.s.empty() || spec.t.empty()) throw DomainError("sample grids must be non-empty");
    Tally tally(spec.rel_tol);
    const auto& K = aux::constants();

    if (label == "ss1" || label == "ss2" || label == "ss3") {
        if (spec.l.empty()) throw DomainError("l grid must be non-empty");
        const bool third = label == "ss3";
        const auto ts = third ? t_nodes(spec, -1.0, 1.0, false, 201) : t_nodes(spec, -HUGE_VAL, HUGE_VAL, false, 0);
        for (double s : spec.s) {
            for (double l : spec.l) {
                const aux::SLParams p(s, l);
                for (double t : ts) {
                    const double F = aux::eval_sl(SLFunction::F, p, t);
                    const double dF = aux::eval_sl(SLFunction::dF, p, t);
                    if (label == "ss1") {
                        tally.le(std::fabs(t * dF), 4.0 * s * F, at(s, l, t));
                    } else if (label == "ss2") {
                        tally.le(dF * dF, s * s * aux::eval_sl(SLFunction::dG, p, t), at(s, l, t));
                    } else {
                        tally.eq(std::fabs(aux::eval_sl(SLFunction::G, p, t)), s * std::pow(F, 2.0 - 1.0 / s),
                                 at(s, l, t));
                    }
                }
            }
        }
        return tally.out;
    }
    if (label == "ss4") {
        std::vector<double> ls = spec.l;
        ls.push_back(7.0);
        std::sort(ls.begin(), ls.end());
        ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
        const auto ts = t_nodes(spec, -HUGE_VAL, HUGE_VAL, false, 0);
        for (double s : spec.s) {
            for (std::size_t i = 0; i < ls.size(); ++i) {
                for (std::size_t j = i + 1; j < ls.size(); ++j) {
                    const aux::SLParams lo(s, ls[i]), hi(s, ls[j]);
                    for (double t : ts) {
                        tally.le(aux::eval_sl(SLFunction::F, lo, t), aux::eval_sl(SLFunction::F, hi, t),
                                 "s=" + fmt(s) + " l=" + fmt(ls[i]) + " k=" + fmt(ls[j]) + " t=" + fmt(t));
                    }
                }
            }
        }
        return tally.out;
    }
    if (label == "sss1" || label == "sss2" || label == "sss4") {
        const auto ts = t_nodes(spec, -HUGE_VAL, HUGE_VAL, true, 0);
        for (double s : spec.s) {
            const aux::SmallSParams p(s);
            for (double t : ts) {
                const double F = aux::eval_small_s(SmallSFunction::Fs, p, t);
                const double dF = aux::eval_small_s(SmallSFunction::dFs, p, t);
                if (label == "sss1") {
                    tally.le(std::fabs(t * dF), 5.0 * F, at(s, t));
                } else if (label == "sss2") {
                    tally.le(dF * dF, K.c0 * aux::eval_small_s(SmallSFunction::dGs, p, t), at(s, t));
                } else {
                    const double Fbar = aux::eval_small_s(SmallSFunction::Fbar, p, t);
                    const double root = std::pow(F, 1.0 / s);
                    tally.le(Fbar, root, at(s, t));
                    tally.le(root, Fbar + K.k0, at(s, t));
                }
            }
        }
        return tally.out;
    }
    if (label == "sss3") {
        const auto ts = t_nodes(spec, -1.0, 1.0, true, 201);
        for (double s : spec.s) {
            const aux::SmallSParams p(s);
            const double ks = aux::estimate_k_s(s, 10000, 1.1);
            for (double t : ts) {
                const double F = aux::eval_small_s(SmallSFunction::Fs, p, t);
                tally.le(std::fabs(aux::eval_small_s(SmallSFunction::Gs, p, t)), ks * std::pow(F, 2.0 - 1.0 / s),
                         at(s, t) + " k_s=" + fmt(ks));
            }
        }
        return tally.out;
    }
    if (label == "lem45-step4") {
        const auto ts = t_nodes(spec, -1.0, 1.0, false, 201);
        for (double s : spec.s) {
            for (double t : ts) {
                const double at_ = std::fabs(t);
                const double br = (2.5 + s) * t * t - (5.0 + 10.0 * s / 3.0) * at_ + 2.5 + 5.0 * s;
                tally.le(br * br, 1e4, at(s, t));
            }
        }
        return tally.out;
    }
    if (label == "alpha-sampled") {
        const auto ts = t_nodes(spec, 0.0, 1.0, true, 201);
        const double one_minus_alpha0 = to_double(Rational(1) - K.alpha0_exact);
        for (double s : spec.s) {
            const aux::SmallSParams p(s);
            for (double t : ts) {
                const double dF = aux::eval_small_s(SmallSFunction::dFs, p, t);
                const double dG = aux::eval_small_s(SmallSFunction::dGs, p, t);
                // alpha0 F'^2 + F F'' = G' - (1 - alpha0) F'^2.
                const double h = (dG - one_minus_alpha0 * dF * dF) / (9.0 / 64.0 * std::pow(t, 2.0 * s - 1.0));
                tally.gt(h, 1e-4, at(s, t));
            }
        }
        return tally.out;
    }
    throw UnknownLabel(std::string(label));
}

// ---------------------------------------------------------------- registry

void Registry::add(ClaimEntry entry) {
    const std::string label = entry.label;
    if (!entries_.emplace(label, std::move(entry)).second) {
        throw std::invalid_argument("duplicate claim label: " + label);
    }
}

bool Registry::contains(std::string_view label) const { return entries_.find(label) != entries_.end(); }

const ClaimEntry& Registry::at(std::string_view label) const {
    auto it = entries_.find(label);
    if (it == entries_.end()) throw UnknownLabel(std::string(label));
    return it->second;
}

std::vector<std::string> Registry::labels() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

void register_suite(Registry& reg, const Suite& suite) {
    auto shared = std::make_shared<const Suite>(suite);
    for (const auto& c : suite.identities) {
        const std::string label = c.label;
        reg.add({label, ClaimKind::exact_identity, domain_of(c), [shared, label] {
                     ClaimOutcome o;
                     auto r = verify_identity(*shared, label);
                     o.status = r.pass ? ClaimStatus::pass : ClaimStatus::fail;
                     o.detail = r.pass ? "zero residual" : "nonzero residual";
                     if (!r.pass) o.witness = poly::serialize(r.residual);
                     return o;
                 }});
    }
    for (const auto& c : suite.positivity) {
        const std::string label = c.label;
        reg.add({label, ClaimKind::certified_positivity, domain_of(c), [shared, label] {
                     ClaimOutcome o;
                     auto r = verify_positivity(*shared, label);
                     o.status = r.status;
                     o.detail = r.detail;
                     if (r.margin) o.detail += ", margin " + fmt(to_double(*r.margin));
                     if (r.witness) o.witness = "t=" + to_string(*r.witness);
                     return o;
                 }});
    }
}

void register_inequalities(Registry& reg, std::uint64_t seed) {
    for (const std::string& label : inequality_labels()) {
        const bool large = label.rfind("ss", 0) == 0 && label.rfind("sss", 0) != 0;
        const SampleSpec spec = large ? large_s_spec(seed) : small_s_spec(seed);
        const std::string domain = large ? "s in {1.1,1.5,2,3}, l in {3,5,10}, t in [-100,100]"
                                         : "20 s in (2/3-1e-6, 1], t in [-5,5] without 0";
        reg.add({label, ClaimKind::sampled_inequality, domain, [label, spec] {
                     ClaimOutcome o;
                     auto r = check_inequality(label, spec);
                     o.status = r.pass ? ClaimStatus::pass : ClaimStatus::fail;
                     o.detail = std::to_string(r.evaluations) + " evaluations, worst ratio " + fmt(r.worst_ratio);
                     o.witness = r.witness;
                     return o;
                 }});
    }
}

void register_kprime_sampled(Registry& reg) {
    reg.add({"kprime-upper-sampled", ClaimKind::certified_positivity, "20 s in (1/2, 1], t in [0, 1], threshold 0",
             [] {
                 ClaimOutcome o;
                 const Expr kprime = poly::differentiate_s(embedded_suite().definitions.at("k-s"));
                 std::optional<Rational> margin;
                 o.status = ClaimStatus::pass;
                 for (int i = 1; i <= 20; ++i) {
                     const Rational s = make_rational(1, 2) + make_rational(i, 40);
                     const auto p = poly::univariate(Expr::constant(1000) - poly::substitute_s(kprime, s), true);
                     auto r = poly::certify_positive(*p, 0, 1, 0);
                     if (!r.certified()) {
                         o.status = r.status == poly::PositivityStatus::inconclusive ? ClaimStatus::inconclusive
                                                                                      : ClaimStatus::fail;
                         o.witness = "s=" + to_string(s) + (r.witness ? " t=" + to_string(*r.witness) : "");
                         break;
                     }
                     if (!margin || r.certificate->min_lower_bound < *margin) margin = r.certificate->min_lower_bound;
                 }
                 if (margin) o.detail = "smallest certified value of 1000 - k'(s) is " + fmt(to_double(*margin));
                 return o;
             }});
}

Registry default_registry(std::uint64_t seed) {
    Registry reg;
    register_suite(reg, embedded_suite());
    register_inequalities(reg, seed);
    register_kprime_sampled(reg);
    return reg;
}

bool Report::all_passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.status == ClaimStatus::pass; });
}

std::vector<std::string> Report::failing_labels() const {
    std::vector<std::string> out;
    for (const auto& o : outcomes) {
        if (o.status != ClaimStatus::pass) out.push_back(o.label);
    }
    return out;
}

Report run_all(const Registry& reg, bool parallel, std::uint64_t seed) {
    std::vector<const ClaimEntry*> entries;
    for (const auto& [k, e] : reg.entries()) entries.push_back(&e);
    Report report;
    report.seed = seed;
    report.outcomes.resize(entries.size());
    const auto n = static_cast<long>(entries.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < n; ++i) {
        const ClaimEntry& e = *entries[static_cast<std::size_t>(i)];
        const auto start = std::chrono::steady_clock::now();
        ClaimOutcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.status = ClaimStatus::error;
            o.detail = ex.what();
        }
        o.label = e.label;
        o.kind = e.kind;
        o.domain = e.domain;
        o.runtime_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        report.outcomes[static_cast<std::size_t>(i)] = std::move(o);
    }
    return report;
}

std::string to_json(const Report& report, bool with_timing) {
    nlohmann::ordered_json claims = nlohmann::ordered_json::array();
    for (const auto& o : report.outcomes) {
        nlohmann::ordered_json j;
        j["label"] = o.label;
        j["kind"] = to_string(o.kind);
        j["status"] = to_string(o.status);
        j["domain"] = o.domain;
        j["detail"] = o.detail;
        if (o.witness) j["witness"] = *o.witness;
        if (with_timing) j["runtime_ms"] = o.runtime_ms;
        claims.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["report"] = "verify";
    doc["seed"] = report.seed;
    doc["all_passed"] = report.all_passed();
    doc["claims"] = std::move(claims);
    return doc.dump(2) + "\n";
}

}  // namespace moserlab::verify
