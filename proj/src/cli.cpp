#include "moserlab/cli.hpp"

#include "moserlab/config.hpp"
#include "moserlab/errors.hpp"
#include "moserlab/lemma_verifier.hpp"
#include "moserlab/moser_bound.hpp"
#include "moserlab/pde_lab.hpp"
#include "moserlab/rational.hpp"
#include "moserlab/spaces_grid.hpp"
#include "moserlab/weight_forge.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace moserlab::cli {

namespace {

using J = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::uint64_t default_seed = 20240611;

const std::set<std::string> known_keys = {
    "seed",
    "params.N", "params.tbar", "params.frac",
    "verify.suite", "verify.suite_file",
    "weight.N", "weight.beta", "weight.K",
    "problem.name", "problem.shape", "problem.A", "problem.T", "problem.n", "problem.nt",
    "problem.source", "problem.weight", "problem.gamma",
    "bound.alpha", "bound.u_alpha_norm", "bound.C", "bound.a_norm", "bound.Q_measure",
    "bound.C_safety", "bound.C_samples", "bound.m_max",
    "solve.alphas", "solve.snapshot",
};

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format = "json";
    std::string suite;
    std::optional<int> N;
    std::string tbar;
    std::optional<double> alpha;
    std::optional<double> frac;
    std::string dir = ".";
    bool timing = false;
};

/// A finished report: JSON document, CSV table, and the labels of failed assertions.
struct Output {
    J doc;
    std::string csv_header;
    std::vector<std::string> csv_rows;
    std::vector<std::string> failing;
};

J num(double v) { return std::isfinite(v) ? J(v) : J(nullptr); }

/// Shortest round-trip text of a double, e.g. 1.6 -> "1.6".
std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_num(double v) { return std::isfinite(v) ? shortest(v) : std::string(v > 0 ? "inf" : (v < 0 ? "-inf" : "nan")); }

std::string csv_bool(bool b) { return b ? "1" : "0"; }

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += parts[i];
    }
    return out;
}

/// Fields with a comma or quote are quoted.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// ---------------------------------------------------------------- inputs

struct Context {
    Options opt;
    config::Config cfg;
    std::uint64_t seed = default_seed;
};

/// Config tbar may be a number or a string ("8/5", "1.6"); numbers go through their shortest decimal.
Rational tbar_value(const Context& c, const std::string& key, const char* fallback) {
    if (!c.opt.tbar.empty()) {
        try {
            return parse_rational(c.opt.tbar);
        } catch (const std::exception& e) {
            throw ConfigError("--tbar: " + std::string(e.what()));
        }
    }
    const auto& e = c.cfg.entries();
    const auto it = e.find(key);
    std::string text = fallback;
    if (it != e.end()) {
        if (const auto* s = std::get_if<config::Scalar>(&it->second.v)) {
            if (const auto* d = std::get_if<double>(s)) text = shortest(*d);
            else if (const auto* t = std::get_if<std::string>(s)) text = *t;
            else throw ConfigError("config line " + std::to_string(it->second.line) + ": " + key + " must be a number");
        } else {
            throw ConfigError("config line " + std::to_string(it->second.line) + ": " + key + " must be a number");
        }
    }
    try {
        return parse_rational(text);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ConfigError(key + ": " + ex.what());
    }
}

struct ChainInput {
    int N = 2;
    Rational tbar;
    double frac = 0.5;
    grid::ParamChain chain;
};

ChainInput chain_input(const Context& c) {
    ChainInput ci;
    ci.N = c.opt.N ? *c.opt.N : c.cfg.integer_or("params.N", 2);
    ci.tbar = tbar_value(c, "params.tbar", "1.6");
    ci.frac = c.opt.frac ? *c.opt.frac : c.cfg.number_or("params.frac", 0.5);
    ci.chain = grid::derive_params(ci.N, to_double(ci.tbar), ci.frac);
    return ci;
}

double alpha_value(const Context& c) { return c.opt.alpha ? *c.opt.alpha : c.cfg.number_or("bound.alpha", 9.0); }

bool has_problem_section(const config::Config& cfg) {
    return std::any_of(cfg.entries().begin(), cfg.entries().end(),
                       [](const auto& kv) { return kv.first.rfind("problem.", 0) == 0; });
}

/// [problem] as a battery entry; defaults to the heat equation with f = 1 on the unit square.
pde::BatteryEntry configured_problem(const config::Config& cfg) {
    pde::BatteryEntry e;
    e.domain.shape = grid::parse_shape(cfg.string_or("problem.shape", "unit-square"));
    e.domain.A = grid::parse_faces(cfg.string_or("problem.A", "all"));
    e.domain.T = cfg.number_or("problem.T", 1.0);
    grid::validate(e.domain);
    e.n = cfg.integer_or("problem.n", 32);
    e.nt = cfg.integer_or("problem.nt", 16);
    if (e.n < 2 || e.nt < 1) throw ConfigError("problem.n must be >= 2 and problem.nt >= 1");
    const std::string source = cfg.string_or("problem.source", "const");
    const std::string weight = cfg.string_or("problem.weight", "identity");
    const double gamma = cfg.number_or("problem.gamma", 0.2);
    if (weight != "identity" && weight != "distance") {
        throw ConfigError("problem.weight must be \"identity\" or \"distance\", got \"" + weight + "\"");
    }
    if (weight == "distance") weights::DistanceWeightSpec{gamma}.validate();
    auto f = pde::named_source(source);
    e.name = cfg.string_or("problem.name", (weight == "identity" ? "heat-" : "degenerate-") + source);
    e.make = [f, weight, gamma, name = e.name](const grid::Grid& g) {
        pde::ParabolicProblem p;
        p.name = name;
        p.weights = weight == "identity" ? grid::WeightField::identity(g)
                                         : weights::build_distance_weight({gamma}, g);
        p.f = f;
        return p;
    };
    return e;
}

pde::ConsistencyOptions consistency_options(const Context& c, const grid::ParamChain& chain) {
    pde::ConsistencyOptions o;
    o.chain = chain;
    o.seed = c.seed;
    o.C_safety = c.cfg.number_or("bound.C_safety", o.C_safety);
    const int samples = c.cfg.integer_or("bound.C_samples", static_cast<int>(o.C_samples));
    if (samples < 100) throw ConfigError("bound.C_samples must be >= 100");
    o.C_samples = static_cast<std::size_t>(samples);
    o.m_max = c.cfg.integer_or("bound.m_max", o.m_max);
    if (!(o.C_safety >= 1.0)) throw ConfigError("bound.C_safety must be >= 1");
    return o;
}

J chain_json(const ChainInput& ci) {
    J j;
    j["N"] = ci.N;
    j["tbar"] = to_string(ci.tbar);
    j["frac"] = ci.frac;
    j["r"] = ci.chain.r;
    j["tstar"] = ci.chain.tstar;
    j["rbar"] = ci.chain.rbar;
    return j;
}

J consistency_json(const pde::ConsistencyReport& r) {
    J j;
    j["name"] = r.name;
    j["alpha"] = r.alpha;
    j["case"] = r.ladder.bound.case_id;
    j["sup_norm"] = r.sup_norm;
    j["min_u"] = r.min_u;
    j["u_alpha_norm"] = r.u_alpha_norm;
    j["C_est"] = r.C_est;
    j["C_used"] = r.C_used;
    j["a_norm"] = r.a_norm;
    j["log10_bound"] = num(r.ladder.bound.log10_bound);
    j["log10_bound_from_recursion"] = num(r.ladder.bound.log10_bound_from_recursion);
    j["log10_slack"] = num(r.log10_slack);
    j["cc8_ok"] = r.cc8_ok;
    j["elz_ok"] = r.elz.pass;
    j["elz_margin"] = r.elz.margin;
    j["energy"] = {{"lhs", r.energy.lhs},
                   {"middle", r.energy.middle},
                   {"rhs", r.energy.rhs},
                   {"embedding_ok", r.energy.embedding_ok},
                   {"energy_ok", r.energy.energy_ok},
                   {"pass", r.energy.pass}};
    j["solver"] = {{"steps", r.solve.steps},
                   {"max_iterations", r.solve.max_iterations},
                   {"max_residual", r.solve.max_residual}};
    J rungs = J::array();
    for (const auto& g : r.ladder.rungs) {
        rungs.push_back({{"m", g.m},
                         {"exponent", g.exponent},
                         {"norm", num(g.norm)},
                         {"log10_rhs", g.log10_rhs ? num(*g.log10_rhs) : J(nullptr)},
                         {"ok", g.ok}});
    }
    j["ladder"] = std::move(rungs);
    j["recursion_ok"] = r.ladder.recursion_ok;
    j["bound_ok"] = r.ladder.bound_ok;
    j["asserted"] = r.asserted;
    j["pass"] = r.pass;
    return j;
}

std::string run_label(const pde::ConsistencyReport& r) { return r.name + "@alpha=" + shortest(r.alpha); }

void collect_failures(const pde::ConsistencyReport& r, std::vector<std::string>& failing) {
    if (!r.asserted) failing.push_back(run_label(r) + ":hypotheses");
    if (!r.pass) failing.push_back(run_label(r) + ":bound");
}

/// Places report, seed and all_passed first.
J header(const std::string& kind, std::uint64_t seed) {
    J j;
    j["report"] = kind;
    j["seed"] = seed;
    j["all_passed"] = true;
    return j;
}

// ---------------------------------------------------------------- subcommands

Output cmd_params(const Context& c) {
    const auto ci = chain_input(c);
    const auto ex = grid::exact_chain(ci.N, ci.tbar);
    Output o;
    o.doc = header("params", c.seed);
    o.doc["N"] = ci.N;
    o.doc["tbar"] = to_string(ci.tbar);
    o.doc["frac"] = ci.frac;
    o.doc["r"] = to_double(ex.r);
    o.doc["tstar"] = to_double(ex.tstar);
    o.doc["rbar"] = ci.chain.rbar;
    o.doc["tbar_lower"] = grid::tbar_lower(ci.N);
    o.doc["exact"] = {{"tbar", to_string(ex.tbar)}, {"r", to_string(ex.r)}, {"tstar", to_string(ex.tstar)},
                      {"tbar_lower", to_string(grid::tbar_lower_exact(ci.N))}};
    o.doc["ordered"] = ex.ordered;
    if (!ex.ordered) o.failing.push_back("ordering");
    o.csv_header = "N,tbar,r,tstar,rbar,r_exact,tstar_exact,ordered";
    o.csv_rows.push_back(join({std::to_string(ci.N), csv_field(to_string(ci.tbar)), csv_num(to_double(ex.r)),
                               csv_num(to_double(ex.tstar)), csv_num(ci.chain.rbar), csv_field(to_string(ex.r)),
                               csv_field(to_string(ex.tstar)), csv_bool(ex.ordered)}));
    return o;
}

verify::Registry select_claims(const verify::Registry& all, const std::string& suite) {
    if (suite == "all") return all;
    std::optional<verify::ClaimKind> kind;
    if (suite == "exact" || suite == "identities") kind = verify::ClaimKind::exact_identity;
    if (suite == "positivity") kind = verify::ClaimKind::certified_positivity;
    if (suite == "inequalities" || suite == "sampled") kind = verify::ClaimKind::sampled_inequality;
    verify::Registry out;
    if (kind) {
        for (const auto& [label, e] : all.entries()) {
            if (e.kind == *kind) out.add(e);
        }
        return out;
    }
    std::stringstream ss(suite);
    std::string label;
    while (std::getline(ss, label, ',')) {
        if (label.empty()) continue;
        if (!all.contains(label)) throw ConfigError("unknown claim label: " + label);
        if (!out.contains(label)) out.add(all.at(label));
    }
    if (out.size() == 0) throw ConfigError("--suite selects no claims");
    return out;
}

Output cmd_verify(const Context& c) {
    verify::Registry reg;
    if (const auto path = c.cfg.string("verify.suite_file")) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("cannot open suite file " + *path);
        std::ostringstream ss;
        ss << in.rdbuf();
        verify::register_suite(reg, verify::parse_suite(ss.str()));
        verify::register_inequalities(reg, c.seed);
        verify::register_kprime_sampled(reg);
    } else {
        reg = verify::default_registry(c.seed);
    }
    const std::string suite = !c.opt.suite.empty() ? c.opt.suite : c.cfg.string_or("verify.suite", "all");
    const auto selected = select_claims(reg, suite);
    const auto report = verify::run_all(selected, true, c.seed);
    const auto parsed = J::parse(verify::to_json(report, c.opt.timing));
    Output o;
    o.doc = header("verify", c.seed);
    o.doc["suite"] = suite;
    for (const auto& [k, v] : parsed.items()) {
        if (k != "report" && k != "seed" && k != "all_passed") o.doc[k] = v;
    }
    o.failing = report.failing_labels();
    o.csv_header = "label,kind,status,domain";
    for (const auto& r : report.outcomes) {
        o.csv_rows.push_back(join({csv_field(r.label), verify::to_string(r.kind), verify::to_string(r.status),
                                   csv_field(r.domain)}));
    }
    return o;
}

Output cmd_weight(const Context& c) {
    weights::AnnularWeightSpec spec;
    spec.N = c.opt.N ? *c.opt.N : c.cfg.integer_or("weight.N", 2);
    spec.beta = c.cfg.integer_or("weight.beta", 2);
    spec.K = c.cfg.integer_or("weight.K", 10);
    spec.validate();
    Output o;
    o.doc = header("weight", c.seed);
    o.doc["N"] = spec.N;
    o.doc["beta"] = spec.beta;
    o.doc["K"] = spec.K;
    o.csv_header = "k,log2_ratio,ratio,lower_bound,ratio_dominates,mass_log2_margin,mass_pass";
    J rows = J::array();
    std::optional<weights::LogScalar> prev;
    bool increasing = true;
    for (int k = 5; k <= spec.K; ++k) {
        const auto d = weights::doubling_report(spec, k);
        const auto m = weights::lbeta_mass_check(spec, k);
        if (prev && !(*prev < d.ratio)) increasing = false;
        prev = d.ratio;
        const double ratio = to_double(d.ratio_exact);
        const double lower = d.closed_lower_bound.value_or(NAN);
        J r;
        r["k"] = k;
        r["log2_r_k"] = d.log_r.log2_integer_part().str();
        r["log2_ratio"] = d.ratio.log2_magnitude();
        r["ratio"] = num(ratio);
        r["lower_bound"] = num(lower);
        r["ratio_dominates"] = d.ratio_dominates;
        r["mass_log2_margin_int"] = m.margin.log2_integer_part().str();
        r["mass_log2_margin_frac"] = m.margin.log2_fraction();
        r["mass_pass"] = m.pass;
        rows.push_back(std::move(r));
        if (!d.ratio_dominates) o.failing.push_back("doubling-k" + std::to_string(k));
        if (!m.pass) o.failing.push_back("mass-k" + std::to_string(k));
        o.csv_rows.push_back(join({std::to_string(k), csv_num(d.ratio.log2_magnitude()), csv_num(ratio),
                                   csv_num(lower), csv_bool(d.ratio_dominates), csv_num(m.margin.log2_magnitude()),
                                   csv_bool(m.pass)}));
    }
    o.doc["rows"] = std::move(rows);
    o.doc["increasing"] = increasing;
    if (!increasing) o.failing.push_back("doubling-increasing");
    return o;
}

Output cmd_bound(const Context& c) {
    const auto ci = chain_input(c);
    const double alpha = alpha_value(c);
    Output o;
    o.doc = header("bound", c.seed);
    o.doc["alpha"] = alpha;
    o.doc["chain"] = chain_json(ci);
    bound::BoundReport report;
    std::optional<pde::ConsistencyReport> run;
    if (const auto u = c.cfg.number("bound.u_alpha_norm")) {
        bound::ProblemData d;
        d.chain = ci.chain;
        d.alpha = alpha;
        d.u_alpha_norm = *u;
        d.Q_measure = c.cfg.number_or("bound.Q_measure", 1.0);
        d.C = c.cfg.number_or("bound.C", 1.0);
        d.a_norm = c.cfg.number_or("bound.a_norm", 1.0);
        report = bound::compute_bound(d);
        o.doc["mode"] = "direct";
    } else {
        const auto e = configured_problem(c.cfg);
        const grid::Grid g(e.domain, e.n, e.nt);
        auto opts = consistency_options(c, ci.chain);
        opts.alpha = alpha;
        run = pde::bound_consistency(e.make(g), g, opts, {.parallel = true});
        report = run->ladder.bound;
        o.doc["mode"] = "pipeline";
        o.doc["problem"] = {{"name", e.name},
                            {"shape", grid::to_string(e.domain.shape)},
                            {"A", grid::faces_to_string(e.domain.A)},
                            {"T", e.domain.T},
                            {"n", e.n},
                            {"nt", e.nt}};
    }
    const auto parsed = J::parse(bound::to_json(report));
    for (const auto& [k, v] : parsed.items()) {
        if (k != "report") o.doc[k] = v;
    }
    o.csv_header = "alpha,case,kappa,m_alpha,log10_bound,log10_bound_from_recursion,sup_norm,log10_slack,pass";
    double sup = NAN, slack = NAN;
    bool pass = true;
    if (run) {
        o.doc["consistency"] = consistency_json(*run);
        collect_failures(*run, o.failing);
        sup = run->sup_norm;
        slack = run->log10_slack;
        pass = run->pass && run->asserted;
    }
    o.csv_rows.push_back(join({csv_num(alpha), std::to_string(report.case_id), csv_num(report.kappa),
                               std::to_string(report.m_alpha), csv_num(report.log10_bound),
                               csv_num(report.log10_bound_from_recursion), csv_num(sup), csv_num(slack),
                               csv_bool(pass)}));
    return o;
}

Output cmd_solve(const Context& c) {
    const auto ci = chain_input(c);
    std::vector<double> alphas;
    if (c.opt.alpha) alphas = {*c.opt.alpha};
    else alphas = c.cfg.numbers("solve.alphas").value_or(std::vector<double>{9.0, 3.6});
    if (alphas.empty()) throw ConfigError("solve.alphas is empty");
    const bool custom = has_problem_section(c.cfg);
    std::vector<pde::BatteryEntry> entries = custom ? std::vector{configured_problem(c.cfg)} : pde::default_battery();
    const auto reports = pde::run_battery(entries, alphas, consistency_options(c, ci.chain), true);

    Output o;
    o.doc = header("solve", c.seed);
    o.doc["chain"] = chain_json(ci);
    o.doc["alphas"] = alphas;
    o.doc["battery"] = custom ? "config" : "default";
    J runs = J::array();
    o.csv_header = "run,name,alpha,case,sup_norm,u_alpha_norm,log10_bound,log10_slack,cg_iterations,asserted,pass";
    int i = 0;
    for (const auto& r : reports) {
        runs.push_back(consistency_json(r));
        collect_failures(r, o.failing);
        o.csv_rows.push_back(join({std::to_string(i++), csv_field(r.name), csv_num(r.alpha),
                                   std::to_string(r.ladder.bound.case_id), csv_num(r.sup_norm),
                                   csv_num(r.u_alpha_norm), csv_num(r.ladder.bound.log10_bound),
                                   csv_num(r.log10_slack), std::to_string(r.solve.max_iterations),
                                   csv_bool(r.asserted), csv_bool(r.pass)}));
    }
    o.doc["runs"] = std::move(runs);
    if (const auto snap = c.cfg.string("solve.snapshot")) {
        const auto& e = entries.front();
        const grid::Grid g(e.domain, e.n, e.nt);
        const auto sol = pde::assemble_and_solve(e.make(g), g);
        const fs::path path(*snap);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) throw ConfigError("cannot write snapshot " + *snap);
        pde::write_level_csv(f, g, sol.u, g.levels() - 1);
        o.doc["snapshot"] = {{"path", *snap}, {"problem", e.name}, {"level", g.levels() - 1}};
    }
    return o;
}

// ---------------------------------------------------------------- report

using Table = std::pair<std::string, std::vector<std::string>>;

std::string str_or_num(const J& v) {
    if (v.is_string()) return csv_field(v.get<std::string>());
    if (v.is_boolean()) return csv_bool(v.get<bool>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return csv_num(v.get<double>());
    return "nan";
}

std::string cells(const J& obj, const std::vector<std::string>& keys) {
    std::vector<std::string> out;
    for (const auto& k : keys) out.push_back(obj.contains(k) ? str_or_num(obj.at(k)) : "nan");
    return join(out);
}

void add_rows(std::map<std::string, Table>& tables, const std::string& file, const J& doc) {
    const std::string kind = doc.value("report", "");
    auto add = [&](const std::vector<std::string>& keys, const J& row) {
        auto& t = tables[kind];
        if (t.first.empty()) t.first = join(keys) + ",file";
        t.second.push_back(cells(row, keys) + "," + csv_field(file));
    };
    if (kind == "verify" && doc.contains("claims")) {
        for (const auto& r : doc["claims"]) add({"label", "kind", "status"}, r);
    } else if (kind == "params") {
        add({"N", "tbar", "r", "tstar", "rbar"}, doc);
    } else if (kind == "weight" && doc.contains("rows")) {
        for (const auto& r : doc["rows"]) add({"k", "log2_ratio", "ratio", "lower_bound"}, r);
    } else if (kind == "bound") {
        J row = doc;
        if (doc.contains("consistency")) row["sup_norm"] = doc["consistency"]["sup_norm"];
        add({"alpha", "case", "kappa", "m_alpha", "log10_bound", "sup_norm"}, row);
    } else if (kind == "solve" && doc.contains("runs")) {
        for (const auto& r : doc["runs"]) add({"name", "alpha", "case", "sup_norm", "log10_bound", "log10_slack"}, r);
    }
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    f << text;
    if (!f) throw ConfigError("cannot write " + path.string());
}

std::string table_text(const std::string& title, const std::string& head, const std::vector<std::string>& rows) {
    std::string s = "# " + title + "\n" + head + "\n";
    for (const auto& r : rows) s += r + "\n";
    return s;
}

Output cmd_report(const Context& c) {
    const fs::path dir(c.opt.dir);
    if (!fs::is_directory(dir)) throw ConfigError("--dir is not a directory: " + c.opt.dir);
    std::optional<fs::path> self;
    if (!c.opt.out_path.empty() && fs::exists(c.opt.out_path)) self = fs::canonical(c.opt.out_path);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".json") continue;
        if (self && fs::canonical(e.path()) == *self) continue;
        files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());

    Output o;
    o.doc = header("aggregate", c.seed);
    J inputs = J::array();
    J reports = J::object();
    std::map<std::string, Table> tables;
    o.csv_header = "file,report,seed,all_passed";
    for (const auto& p : files) {
        std::ifstream in(p);
        J doc;
        try {
            doc = J::parse(in);
        } catch (const std::exception& e) {
            throw ConfigError("cannot parse " + p.string() + ": " + e.what());
        }
        if (!doc.is_object() || !doc.contains("report") || !doc.contains("all_passed")) {
            throw ConfigError(p.string() + " is not a moserlab report");
        }
        const std::string name = p.filename().string();
        if (doc["report"] == "aggregate") continue;
        const bool passed = doc["all_passed"].get<bool>();
        if (!passed) o.failing.push_back(name);
        inputs.push_back({{"file", name}, {"report", doc["report"]}, {"seed", doc.value("seed", J())},
                          {"all_passed", passed}});
        o.csv_rows.push_back(join({csv_field(name), str_or_num(doc["report"]),
                                   doc.contains("seed") ? str_or_num(doc["seed"]) : "nan", csv_bool(passed)}));
        add_rows(tables, name, doc);
        reports[name] = std::move(doc);
    }
    const fs::path base = c.opt.out_path.empty() ? dir / "aggregate" : fs::path(c.opt.out_path).replace_extension();
    J written = J::array();
    for (const auto& [kind, t] : tables) {
        const fs::path path = base.string() + "_" + kind + ".csv";
        write_file(path, table_text(kind + " seed=" + std::to_string(c.seed), t.first, t.second));
        written.push_back(path.filename().string());
    }
    o.doc["inputs"] = std::move(inputs);
    o.doc["tables"] = std::move(written);
    o.doc["reports"] = std::move(reports);
    return o;
}

std::string render(const Output& o, const std::string& format) {
    if (format == "json") return o.doc.dump(2) + "\n";
    const std::string title = o.doc["report"].get<std::string>() + " seed=" + std::to_string(o.doc["seed"].get<std::uint64_t>()) +
                              " all_passed=" + (o.doc["all_passed"].get<bool>() ? "true" : "false");
    return table_text(title, o.csv_header, o.csv_rows);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Verification harness for weighted parabolic L-infinity bounds", "moserlab"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config_path, "Key-value config file");
    app.add_option("--seed", opt.seed, "Random seed (default: config 'seed', then 20240611)");
    app.add_option("--out", opt.out_path, "Write the report here instead of standard output");
    app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));

    auto* verify = app.add_subcommand("verify", "Run the claim registry");
    verify->add_option("--suite", opt.suite, "all | exact | positivity | inequalities | label[,label...]");
    verify->add_flag("--timing", opt.timing, "Include per-claim runtimes (breaks byte-identical output)");

    auto* params = app.add_subcommand("params", "Exponent chain for N and tbar");
    auto* weight = app.add_subcommand("weight", "Annular weight doubling and mass reports");
    auto* bound = app.add_subcommand("bound", "Moser bound, directly or through a solver run");
    auto* solve = app.add_subcommand("solve", "Solver battery with bound consistency checks");
    for (auto* s : {params, bound, solve}) {
        s->add_option("--N", opt.N, "Space dimension");
        s->add_option("--tbar", opt.tbar, "tbar as an exact decimal or p/q");
        s->add_option("--frac", opt.frac, "rbar = 2 + frac (r - 2)");
    }
    weight->add_option("--N", opt.N, "Space dimension");
    for (auto* s : {bound, solve}) s->add_option("--alpha", opt.alpha, "Starting exponent alpha");
    auto* report = app.add_subcommand("report", "Aggregate prior JSON reports");
    report->add_option("--dir", opt.dir, "Directory of *.json reports");

    std::vector<std::string> argv_store{"moserlab"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    }

    try {
        Context c;
        c.opt = opt;
        if (!opt.config_path.empty()) {
            c.cfg = config::Config::load(opt.config_path);
            c.cfg.require_known(known_keys);
        }
        if (opt.seed) {
            c.seed = *opt.seed;
        } else if (const auto s = c.cfg.number("seed")) {
            if (*s < 0 || *s != std::floor(*s) || *s > 9007199254740992.0) throw ConfigError("seed must be a nonnegative integer");
            c.seed = static_cast<std::uint64_t>(*s);
        }

        Output o;
        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "verify") o = cmd_verify(c);
        else if (cmd == "params") o = cmd_params(c);
        else if (cmd == "weight") o = cmd_weight(c);
        else if (cmd == "bound") o = cmd_bound(c);
        else if (cmd == "solve") o = cmd_solve(c);
        else o = cmd_report(c);

        o.doc["all_passed"] = o.failing.empty();
        const std::string text = render(o, opt.format);
        if (opt.out_path.empty()) out << text;
        else write_file(opt.out_path, text);
        if (!o.failing.empty()) {
            err << "assertion failed:";
            for (const auto& l : o.failing) err << " " << l;
            err << "\n";
            return assertion_failed;
        }
        return ok;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
    } catch (const verify::UnknownLabel& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
    } catch (const fs::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
    } catch (const SolverError& e) {
        err << "assertion failed: solver (" << e.what() << ", residual " << e.residual() << ")\n";
        return assertion_failed;
    }
    return config_error;
}

}  // namespace moserlab::cli
